"""Proper intersection of hypersurfaces in P^N by exact linear algebra.

``N + 1`` forms of degrees ``d_i`` in ``N + 1`` variables have no common
projective zero (over the algebraic closure) exactly when the Macaulay map

    (+)_i S_{D - d_i} --> S_D,   (g_i) |--> sum g_i F_i,    D = sum d_i - N

is surjective.  That test is exact in both directions.  Everything else in
this module reduces to it, either exactly (pairwise GCDs, triples on P^2) or
with random linear data (larger collections, intermediate codimension on
P^N with N >= 3), in which case the result says so.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import gcd as igcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import UnverifiedIrreducibility
from .forms import HomogeneousForm, Ring, gcd

DEFAULT_SEED = 20190101
COEFF_BOUND = 100
TRIALS = 3
_MODULUS = (1 << 61) - 1

EMPTY = "empty"
POSSIBLY_NONEMPTY = "possibly-nonempty"
PROPER = "proper"
IMPROPER = "improper"


@dataclass(frozen=True)
class EmptinessResult:
    verdict: str
    exact: bool
    degree_bound: Optional[int] = None
    rank: Optional[int] = None
    target_dim: Optional[int] = None
    trials: int = 1

    @property
    def empty(self) -> bool:
        return self.verdict == EMPTY


@dataclass(frozen=True)
class IntersectionReport:
    verdict: str
    failing_subset: Optional[Tuple[int, ...]] = None
    method: str = "pairwise"
    trials: int = 0
    probabilistic: bool = False
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.verdict == IMPROPER and not self.failing_subset:
            raise ValueError("an improper verdict must carry a failing subset")

    @property
    def proper(self) -> bool:
        return self.verdict == PROPER

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "failing_subset": list(self.failing_subset) if self.failing_subset else None,
            "method": self.method,
            "trials": self.trials,
            "probabilistic": self.probabilistic,
        }


# -- Macaulay matrices ------------------------------------------------------

def monomials(nvars: int, degree: int) -> List[Tuple[int, ...]]:
    if degree < 0:
        return []
    out = []
    for bars in itertools.combinations(range(degree + nvars - 1), nvars - 1):
        prev = -1
        e = []
        for b in bars:
            e.append(b - prev - 1)
            prev = b
        e.append(degree + nvars - 2 - prev)
        out.append(tuple(e))
    return out


def macaulay_rows(forms: Sequence[HomogeneousForm], degree: int) -> Tuple[List[Dict[int, int]], int]:
    """Rows ``m * F_i`` for all monomials ``m`` of degree ``degree - d_i``, over the monomial basis."""
    n = forms[0].ring.num_vars
    cols = monomials(n, degree)
    index = {e: j for j, e in enumerate(cols)}
    rows: List[Dict[int, int]] = []
    for f in forms:
        for m in monomials(n, degree - f.degree):
            row = {}
            for e, c in f.terms.items():
                row[index[tuple(a + b for a, b in zip(e, m))]] = c
            rows.append(row)
    return rows, len(cols)


def _rank_mod(rows: List[Dict[int, int]], ncols: int, p: int) -> int:
    pivots: Dict[int, Dict[int, int]] = {}
    rank = 0
    for row in rows:
        r = {j: c % p for j, c in row.items() if c % p}
        while r:
            j = min(r)
            if j not in pivots:
                inv = pow(r[j], -1, p)
                pivots[j] = {k: v * inv % p for k, v in r.items()}
                rank += 1
                break
            piv = pivots[j]
            c = r[j]
            for k, v in piv.items():
                nv = (r.get(k, 0) - c * v) % p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        if rank == ncols:
            break
    return rank


def exact_rank(rows: List[Dict[int, int]], ncols: int) -> int:
    """Rank over Q by fraction-free elimination on integer rows."""
    pivots: Dict[int, Dict[int, int]] = {}
    rank = 0
    for row in rows:
        r = dict(row)
        while r:
            j = min(r)
            if j not in pivots:
                pivots[j] = r
                rank += 1
                break
            piv = pivots[j]
            a, b = piv[j], r[j]
            new = {k: a * v for k, v in r.items()}
            for k, v in piv.items():
                nv = new.get(k, 0) - b * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            g = 0
            for v in new.values():
                g = igcd(g, v)
                if g == 1:
                    break
            r = {k: v // g for k, v in new.items()} if g > 1 else new
        if rank == ncols:
            break
    return rank


def macaulay_surjective(forms: Sequence[HomogeneousForm], degree: int) -> Tuple[bool, int, int]:
    rows, ncols = macaulay_rows(forms, degree)
    # full rank modulo a prime is a certificate of full rank over Q
    rank = _rank_mod(rows, ncols, _MODULUS)
    if rank < ncols:
        rank = exact_rank(rows, ncols)
    return rank == ncols, rank, ncols


def _common_degree_powers(forms: Sequence[HomogeneousForm]) -> List[HomogeneousForm]:
    L = 1
    for f in forms:
        L = lcm(L, f.degree)
    return [f ** (L // f.degree) for f in forms]


def empty_common_zero(
    forms: Sequence[HomogeneousForm],
    N: Optional[int] = None,
    seed: int = DEFAULT_SEED,
    trials: int = TRIALS,
    coeff_bound: int = COEFF_BOUND,
) -> EmptinessResult:
    """Decide whether ``forms`` have a common zero in P^N over the algebraic closure.

    With exactly ``N + 1`` forms the answer is exact either way.  More forms
    are first replaced by ``N + 1`` random integer combinations of suitable
    powers; an ``empty`` verdict is then still a proof, while
    ``possibly-nonempty`` is evidence only.
    """
    forms = [f.require_nonzero() for f in forms]
    ring = forms[0].ring
    if N is None:
        N = ring.dim
    if any(f.degree == 0 for f in forms):
        return EmptinessResult(EMPTY, True, 0, trials=0)
    if len(forms) < N + 1:
        return EmptinessResult(POSSIBLY_NONEMPTY, True, trials=0)
    if len(forms) == N + 1:
        D = sum(f.degree for f in forms) - N
        ok, rank, ncols = macaulay_surjective(forms, D)
        return EmptinessResult(EMPTY if ok else POSSIBLY_NONEMPTY, True, D, rank, ncols, 1)
    rng = random.Random(seed)
    powered = _common_degree_powers(forms)
    last = None
    for t in range(1, trials + 1):
        combos = []
        for _ in range(N + 1):
            acc = None
            for f in powered:
                c = rng.randint(-coeff_bound, coeff_bound)
                if c:
                    acc = f.scale(c) if acc is None else acc + f.scale(c)
            if acc is None or acc.is_zero():
                acc = powered[0]
            combos.append(acc)
        D = sum(f.degree for f in combos) - N
        ok, rank, ncols = macaulay_surjective(combos, D)
        last = (D, rank, ncols)
        if ok:
            return EmptinessResult(EMPTY, True, D, rank, ncols, t)
    D, rank, ncols = last
    return EmptinessResult(POSSIBLY_NONEMPTY, False, D, rank, ncols, trials)


def _random_linear_forms(ring: Ring, count: int, rng: random.Random, bound: int) -> List[HomogeneousForm]:
    out = []
    for _ in range(count):
        terms = {}
        for i in range(ring.num_vars):
            e = [0] * ring.num_vars
            e[i] = 1
            terms[tuple(e)] = rng.randint(-bound, bound)
        f = HomogeneousForm(ring, terms)
        out.append(f if not f.is_zero() else ring.var(0))
    return out


def properly_intersect(
    forms: Sequence[HomogeneousForm],
    N: Optional[int] = None,
    statuses: Optional[Sequence[str]] = None,
    seed: int = DEFAULT_SEED,
    trials: int = TRIALS,
) -> IntersectionReport:
    """Do the hypersurfaces ``forms = 0`` intersect properly in P^N?

    For hypersurfaces this means every sub-collection of size ``s <= N``
    meets in codimension ``s`` and every ``N + 1`` of them have no common
    zero.  Pairs are settled by GCDs, ``(N+1)``-subsets by the Macaulay test;
    sizes strictly between (only for ``N >= 3``) are tested by slicing with
    random hyperplanes and are reported as probabilistic.
    """
    if statuses is not None:
        bad = [i for i, s in enumerate(statuses) if s == "unverified"]
        if bad:
            raise UnverifiedIrreducibility(f"components {bad} have unverified irreducibility")
    forms = [f.require_nonzero() for f in forms]
    if not forms:
        return IntersectionReport(PROPER, method="pairwise")
    ring = forms[0].ring
    if N is None:
        N = ring.dim
    k = len(forms)
    prims = [f.primitive_part() for f in forms]
    for i, j in itertools.combinations(range(k), 2):
        if prims[i] == prims[j] or gcd(prims[i], prims[j]).degree > 0:
            return IntersectionReport(IMPROPER, (i, j), "pairwise")
    if k <= 2 or N < 2:
        # coprime pairs meet in codimension 2 (on P^1: not at all)
        return IntersectionReport(PROPER, method="pairwise")
    rng = random.Random(seed)
    probabilistic = False
    used_trials = 0
    for s in range(3, min(k, N) + 1):
        probabilistic = True
        for subset in itertools.combinations(range(k), s):
            ok = False
            for t in range(trials):
                cut = _random_linear_forms(ring, N - s + 1, rng, COEFF_BOUND)
                res = empty_common_zero([forms[i] for i in subset] + cut, N)
                used_trials += 1
                if res.empty:
                    ok = True
                    break
            if not ok:
                return IntersectionReport(IMPROPER, subset, "randomized-combination", used_trials, True)
    if k >= N + 1:
        for subset in itertools.combinations(range(k), N + 1):
            res = empty_common_zero([forms[i] for i in subset], N)
            used_trials += 1
            if not res.empty:
                method = "randomized-combination" if probabilistic else "triple-elimination"
                return IntersectionReport(IMPROPER, subset, method, used_trials, probabilistic)
    method = "randomized-combination" if probabilistic else ("triple-elimination" if N == 2 else "elimination")
    return IntersectionReport(PROPER, None, method, used_trials, probabilistic)

"""Linear factors of forms over Q.

There is no general multivariate factorization here.  A linear form
``l = x_k + sum_{j>k} a_j x_j`` dividing ``G`` also divides each binary
restriction ``G(..., x_k, ..., x_j, ...)`` (all other variables zero), so
every ``a_j`` is minus a rational root of that binary form dehomogenized.
Crossing the candidate sets and trial-dividing finds every linear factor.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd as igcd
from typing import Iterable, List, Optional, Sequence, Set, Tuple

import mpmath

from . import mpoly
from .forms import HomogeneousForm, Ring, try_divide

_DIVISOR_LIMIT = 10 ** 12
_SHEAR_ATTEMPTS = 4


# -- univariate rational roots ------------------------------------------------

def _factor_small(n: int) -> List[Tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def _divisors(n: int) -> List[int]:
    divs = [1]
    for p, e in _factor_small(abs(n)):
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return divs


def _horner(coeffs: Sequence[int], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def rational_roots(coeffs: Sequence[int]) -> List[Fraction]:
    """Distinct rational roots of ``sum coeffs[i] t^i`` (integer coefficients)."""
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    if len(c) <= 1:
        return []
    roots: Set[Fraction] = set()
    shift = 0
    while c[shift] == 0:
        shift += 1
    if shift:
        roots.add(Fraction(0))
        c = c[shift:]
    if len(c) == 1:
        return sorted(roots)
    lead, tail = abs(c[-1]), abs(c[0])
    if lead <= _DIVISOR_LIMIT and tail <= _DIVISOR_LIMIT:
        for q in _divisors(lead):
            for p in _divisors(tail):
                for r in (Fraction(p, q), Fraction(-p, q)):
                    if r not in roots and _horner(c, r) == 0:
                        roots.add(r)
        return sorted(roots)
    return sorted(roots | _numeric_rational_roots(c))


def _numeric_rational_roots(c: List[int]) -> Set[Fraction]:
    # squarefree part first so the root finder converges
    n = len(c) - 1
    as_poly = {(i,): v for i, v in enumerate(c) if v}
    deriv = mpoly.derivative(as_poly, 0)
    g = mpoly.gcd(as_poly, deriv)
    sqf = mpoly.divexact(as_poly, g) or as_poly
    deg = max(e[0] for e in sqf)
    sc = [sqf.get((i,), 0) for i in range(deg + 1)]
    lead = abs(sc[-1])
    bits = max(abs(v).bit_length() for v in sc)
    found: Set[Fraction] = set()
    prec = 4 * bits + 4 * lead.bit_length() + 64 + 8 * n
    with mpmath.workprec(prec):
        try:
            zs = mpmath.polyroots(list(reversed(sc)), maxsteps=200, extraprec=prec)
        except mpmath.libmp.NoConvergence:
            zs = []
        for z in zs:
            z = mpmath.mpc(z)
            if abs(z.imag) > mpmath.mpf(2) ** (-prec // 4):
                continue
            approx = Fraction(str(mpmath.nstr(z.real, prec // 3 + 10, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)))
            r = approx.limit_denominator(lead)
            if _horner(sc, r) == 0:
                found.add(r)
    return found


# -- linear factors ----------------------------------------------------------

def _restrict(form: HomogeneousForm, keep: Iterable[int]) -> mpoly.Poly:
    keep = set(keep)
    return {e: c for e, c in form.terms.items() if all(k == 0 or i in keep for i, k in enumerate(e))}


def _binary_roots(form: HomogeneousForm, k: int, j: int) -> Optional[List[Fraction]]:
    """Values ``a`` with ``x_k + a x_j`` dividing the restriction to the (k, j)-line."""
    r = _restrict(form, (k, j))
    if not r:
        return None
    d = form.degree
    coeffs = [0] * (d + 1)
    for e, c in r.items():
        coeffs[e[k]] += c
    # B(t, 1) with t = x_k; x_k + a x_j | B  iff  B(-a, 1) = 0
    return [-t for t in rational_roots(coeffs)]


def _linear_from(ring: Ring, k: int, coeffs: dict) -> HomogeneousForm:
    den = 1
    for v in coeffs.values():
        den = den * v.denominator // igcd(den, v.denominator)
    terms = {}
    e = [0] * ring.num_vars
    e[k] = 1
    terms[tuple(e)] = den
    for j, a in coeffs.items():
        if a:
            e = [0] * ring.num_vars
            e[j] = 1
            terms[tuple(e)] = int(a * den)
    return HomogeneousForm(ring, terms).primitive_part()


def _find_linear_factor_direct(form: HomogeneousForm) -> Tuple[Optional[HomogeneousForm], bool]:
    """Return ``(factor, complete)``; ``complete`` is False when a restriction vanished."""
    ring = form.ring
    n = ring.num_vars
    complete = True
    # k = n - 1 means l = x_{n-1}, which the caller tests directly
    for k in range(n - 1):
        if all(e[k] == 0 for e in form.terms):
            continue
        gk = HomogeneousForm(ring, _restrict(form, range(k, n)))
        if gk.is_zero():
            complete = False
            continue
        cand_sets = []
        for j in range(k + 1, n):
            roots = _binary_roots(gk, k, j)
            if roots is None:
                complete = False
                cand_sets = None
                break
            if not roots:
                cand_sets = []
                break
            cand_sets.append([(j, a) for a in roots])
        if cand_sets is None:
            continue
        if not cand_sets:
            continue
        for combo in itertools.product(*cand_sets):
            ell = _linear_from(ring, k, dict(combo))
            if try_divide(form, ell) is not None:
                return ell, True
    return None, complete


def _shear(ring: Ring, rng: random.Random):
    """Random unit lower-triangular substitution and its inverse (integer entries)."""
    n = ring.num_vars
    T = [[1 if i == j else (rng.randint(-3, 3) if j < i else 0) for j in range(n)] for i in range(n)]
    # inverse of a unit lower-triangular integer matrix by forward substitution
    inv = [[0] * n for _ in range(n)]
    for col in range(n):
        for i in range(n):
            s = 1 if i == col else 0
            for j in range(i):
                s -= T[i][j] * inv[j][col]
            inv[i][col] = s
    return T, inv


def _apply_linear(form: HomogeneousForm, M) -> HomogeneousForm:
    from .forms import compose

    ring = form.ring
    gens = ring.gens()
    subs = []
    for i in range(ring.num_vars):
        acc = None
        for j, gj in enumerate(gens):
            if M[i][j]:
                t = gj.scale(M[i][j])
                acc = t if acc is None else acc + t
        subs.append(acc)
    return compose(form, subs)


def find_linear_factor(form: HomogeneousForm, seed: int = 0) -> Optional[HomogeneousForm]:
    """Some linear form dividing ``form`` over Q, or ``None`` if there is none."""
    form = form.require_nonzero().primitive_part()
    if form.degree == 0:
        return None
    if form.degree == 1:
        return form
    ring = form.ring
    for i in range(ring.num_vars):
        if all(e[i] > 0 for e in form.terms):
            return ring.var(i)
    ell, complete = _find_linear_factor_direct(form)
    if ell is not None or complete:
        return ell
    rng = random.Random(seed)
    for _ in range(_SHEAR_ATTEMPTS):
        T, Tinv = _shear(ring, rng)
        sheared = _apply_linear(form, T)
        ell, complete = _find_linear_factor_direct(sheared)
        if ell is not None:
            back = _apply_linear(ell, Tinv).primitive_part()
            if try_divide(form, back) is not None:
                return back
        if complete:
            return None
    raise ArithmeticError(f"could not decide linear factors of {form}")


def linear_factors(form: HomogeneousForm) -> Tuple[List[Tuple[HomogeneousForm, int]], HomogeneousForm]:
    """Split off all linear factors: ``form = c * prod(l_i ** e_i) * rest``."""
    rest = form.primitive_part()
    found: List[Tuple[HomogeneousForm, int]] = []
    while rest.degree > 0:
        ell = find_linear_factor(rest)
        if ell is None:
            break
        e = 0
        while True:
            q = try_divide(rest, ell)
            if q is None:
                break
            rest = q
            e += 1
        found.append((ell, e))
    return found, rest.primitive_part()


def has_linear_factor(form: HomogeneousForm) -> bool:
    return find_linear_factor(form) is not None

"""The constants gamma, c_n and beta, the orbit scan, and the Ruth-Vojta style inequality check.

Notation: ``mu`` is the degree of ``D`` (so ``D ~ mu L`` with ``L`` the
hyperplane class), ``k`` indexes iterates along an orbit and ``n`` is the
pullback depth used to build ``c_n``.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd as igcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .divisor import Divisor, FactorBasis, SelectionReport, pullback, reduced_pi_part
from .errors import DeltaNotGreaterThanOne, OnDivisor
from .forms import HomogeneousForm, evaluate
from .heights import ExactLog, ZERO, height_of_divisor_class, log_le_scaled, proximity
from .intersect import DEFAULT_SEED, properly_intersect
from .projective import PlaceSet, ProjPoint, normalize
from .selfmap import DEFAULT_BIT_BUDGET, SelfMap, dynamical_degree, orbit

YES = "yes"
NO = "no"
ON_DIVISOR = "on-divisor"
HEIGHT_ZERO = "height-zero"

DEFAULT_INTEGRAL_TOL = Fraction(1, 10)


def _frac_json(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# -- c_n ----------------------------------------------------------------------

@dataclass
class CnReport:
    n: int
    N: int
    delta_f: int
    mu: int
    q_n: int
    m_i_list: List[int]
    gamma: int
    c_n: Fraction
    pullback: Optional[Divisor] = None
    reduced: Optional[Divisor] = None
    selection: Optional[SelectionReport] = None

    @property
    def inconclusive(self) -> bool:
        """``c_n <= 0``: the non-density statement says nothing."""
        return self.c_n <= 0

    @property
    def selection_ambiguity(self) -> List[List[str]]:
        return self.selection.alternatives() if self.selection is not None else []

    def recompute(self) -> Tuple[int, Fraction]:
        gamma = (max(self.m_i_list) if self.m_i_list else 0) * (self.N + 1)
        c = Fraction(sum(self.m_i_list) - gamma, self.delta_f ** self.n * self.mu ** self.n)
        return gamma, c

    def is_consistent(self) -> bool:
        gamma, c = self.recompute()
        return gamma == self.gamma and c == self.c_n and self.q_n == len(self.m_i_list)

    def degree_identity(self) -> Tuple[int, int]:
        """``(deg D^(n) - deg reduced part, delta^n mu^n - sum m_i)``; the two agree."""
        lhs = self.pullback.degree - self.reduced.degree if self.pullback is not None else None
        rhs = self.delta_f ** self.n * self.mu ** self.n - sum(self.m_i_list)
        return lhs, rhs

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "N": self.N,
            "delta_f": self.delta_f,
            "mu": self.mu,
            "q_n": self.q_n,
            "m_i_list": list(self.m_i_list),
            "gamma": self.gamma,
            "c_n": _frac_json(self.c_n),
            "c_n_numerator": self.c_n.numerator,
            "c_n_denominator": self.c_n.denominator,
            "inconclusive": self.inconclusive,
            "selection_ambiguity": self.selection_ambiguity,
        }
        if self.pullback is not None:
            out["pullback"] = str(self.pullback)
        if self.reduced is not None:
            out["reduced_pi_part"] = str(self.reduced)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CnReport":
        return cls(
            n=data["n"], N=data["N"], delta_f=data["delta_f"], mu=data["mu"], q_n=data["q_n"],
            m_i_list=list(data["m_i_list"]), gamma=data["gamma"],
            c_n=Fraction(data["c_n_numerator"], data["c_n_denominator"]),
        )


def compute_cn(
    f: SelfMap,
    D: Divisor,
    n: int,
    basis: Optional[FactorBasis] = None,
    N: Optional[int] = None,
    seed: int = DEFAULT_SEED,
) -> CnReport:
    """Pull ``D`` back ``n`` times, take its reduced properly intersecting part, assemble ``c_n``."""
    if not f.is_certified:
        f = f.certify()
    if N is None:
        N = f.ring.dim
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        delta = dynamical_degree(f)
    if delta <= 1:
        raise DeltaNotGreaterThanOne(f"dynamical degree {delta} is not > 1")
    if D.degree == 0:
        raise ValueError("D must be a nonzero effective divisor")
    Dn = pullback(f, D, n, basis)
    red, selection = reduced_pi_part(Dn, N, seed)
    m_i = [form.degree for form in red.forms]
    gamma = (max(m_i) if m_i else 0) * (N + 1)
    c_n = Fraction(sum(m_i) - gamma, delta ** n * D.degree ** n)
    return CnReport(n, N, delta, D.degree, len(m_i), m_i, gamma, c_n, Dn, red, selection)


# -- orbit scan ---------------------------------------------------------------

@dataclass
class OrbitRecord:
    k: int
    point: ProjPoint
    height: ExactLog
    proximity_S: Optional[ExactLog]
    counting_S: Optional[ExactLog]
    flag: str
    threshold: Fraction
    integral_candidate: Optional[bool] = None

    @property
    def ratio_exactly_below_threshold(self) -> str:
        return self.flag

    def identity_holds(self, mu: int) -> Optional[bool]:
        if self.proximity_S is None:
            return None
        return self.proximity_S + self.counting_S == self.height * mu

    def ratio(self, mu: int) -> Optional[float]:
        if self.counting_S is None or self.height.is_zero():
            return None
        return float(self.counting_S) / (mu * float(self.height))

    def to_json(self, mu: int) -> dict:
        return {
            "k": self.k,
            "point": str(self.point),
            "height": self.height.to_json(),
            "proximity_S": self.proximity_S.to_json() if self.proximity_S is not None else None,
            "counting_S": self.counting_S.to_json() if self.counting_S is not None else None,
            "ratio_approx": None if self.ratio(mu) is None else f"{self.ratio(mu):.12g}",
            "flag": self.flag,
            "threshold": _frac_json(self.threshold),
            "integral_candidate": self.integral_candidate,
            "identity_exact": self.identity_holds(mu),
        }


@dataclass
class OrbitScan:
    records: List[OrbitRecord]
    mu: int
    c_n: Fraction
    epsilon: Fraction
    places: PlaceSet
    cycle: Optional[Tuple[int, int]] = None

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def flagged(self) -> List[int]:
        return [r.k for r in self.records if r.flag == YES]

    @property
    def integral_candidates(self) -> List[int]:
        return [r.k for r in self.records if r.integral_candidate]

    @property
    def on_divisor(self) -> List[int]:
        return [r.k for r in self.records if r.flag == ON_DIVISOR]

    def to_json(self) -> dict:
        return {
            "mu": self.mu,
            "c_n": _frac_json(self.c_n),
            "epsilon": _frac_json(self.epsilon),
            "threshold": _frac_json(self.c_n - self.epsilon),
            "places": str(self.places),
            "records": [r.to_json(self.mu) for r in self.records],
            "summary": {
                "flagged": self.flagged,
                "integral_candidates": self.integral_candidates,
                "on_divisor": self.on_divisor,
                "cycle": list(self.cycle) if self.cycle else None,
            },
        }


def scan_point(
    D: Divisor,
    x: ProjPoint,
    S: PlaceSet,
    threshold: Fraction,
    k: int = 0,
    integral_tol: Fraction = DEFAULT_INTEGRAL_TOL,
) -> OrbitRecord:
    mu = D.degree
    h = ExactLog(x.max_abs)
    try:
        m = proximity(D, x, S)
    except OnDivisor:
        return OrbitRecord(k, x, h, None, None, ON_DIVISOR, threshold)
    n_s = height_of_divisor_class(D, x) - m
    if h.is_zero():
        return OrbitRecord(k, x, h, m, n_s, HEIGHT_ZERO, threshold)
    flag = YES if log_le_scaled(n_s, threshold * mu, h) else NO
    integral = m.compare(h * ((1 - integral_tol) * mu)) >= 0
    return OrbitRecord(k, x, h, m, n_s, flag, threshold, integral)


def orbit_scan(
    f: SelfMap,
    D: Divisor,
    x0: ProjPoint,
    S: PlaceSet,
    n: int,
    epsilon: Fraction,
    K_max: int,
    basis: Optional[FactorBasis] = None,
    cn: Optional[CnReport] = None,
    bit_budget: int = DEFAULT_BIT_BUDGET,
    integral_tol: Fraction = DEFAULT_INTEGRAL_TOL,
) -> OrbitScan:
    """Records for ``f^k(x0)``, ``k = 0..K_max``.

    A point is flagged when ``n_S(D, y) <= (c_n - epsilon) * mu * h(y)``,
    decided exactly.  Points of height zero are never flagged and points on
    the support of ``D`` get no numeric values at all.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not isinstance(S, PlaceSet):
        S = PlaceSet(S)
    if not f.is_certified:
        f = f.certify()
    if cn is None:
        cn = compute_cn(f, D, n, basis)
    threshold = cn.c_n - epsilon
    orb = orbit(f, x0, K_max, bit_budget)
    records = [scan_point(D, x, S, threshold, k, integral_tol) for k, x in enumerate(orb)]
    cycle = (orb.repeat_of, orb.repeat_at) if orb.repeat_at is not None else None
    return OrbitScan(records, D.degree, cn.c_n, epsilon, S, cycle)


def orbit_csv_rows(scan: OrbitScan) -> List[List[str]]:
    rows = [["k", "point", "height", "proximity_S", "counting_S", "ratio", "flag", "threshold", "integral_candidate"]]
    for r in scan.records:
        ratio = r.ratio(scan.mu)
        rows.append([
            str(r.k),
            str(r.point),
            f"{float(r.height):.12g}",
            "" if r.proximity_S is None else f"{float(r.proximity_S):.12g}",
            "" if r.counting_S is None else f"{float(r.counting_S):.12g}",
            "" if ratio is None else f"{ratio:.12g}",
            r.flag,
            _frac_json(r.threshold),
            "" if r.integral_candidate is None else str(r.integral_candidate).lower(),
        ])
    return rows


# -- beta ---------------------------------------------------------------------

def _h0(t: int, N: int) -> int:
    return comb(t + N, N) if t >= 0 else 0


@dataclass(frozen=True)
class BetaReport:
    d: int
    N: int
    beta_formula: Fraction

    def beta_discrete(self, m: int) -> Fraction:
        return beta_discrete(self.d, self.N, m)

    def to_json(self, samples: Sequence[int] = (50, 100, 200, 300)) -> dict:
        return {
            "d": self.d,
            "N": self.N,
            "beta_formula": _frac_json(self.beta_formula),
            "beta_discrete": {str(m): f"{float(self.beta_discrete(m)):.12g}" for m in samples},
        }


def beta(d: int, N: int) -> BetaReport:
    """Expected order of vanishing of a degree-``d`` hypersurface on P^N."""
    if d < 1 or N < 1:
        raise ValueError("need d >= 1 and N >= 1")
    return BetaReport(d, N, Fraction(1, d * (N + 1)))


def beta_discrete(d: int, N: int, m: int) -> Fraction:
    """``sum_{l >= 1} h0(m - l d) / (m h0(m))`` with ``h0(t) = C(t + N, N)``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    total = sum(_h0(m - l * d, N) for l in range(1, m // d + 1))
    return Fraction(total, m * _h0(m, N))


def beta_oracle(d: int, N: int, m_max: int) -> List[Fraction]:
    """The discrete ratios for ``m = 1..m_max``; entry ``m - 1`` belongs to ``m``."""
    return [beta_discrete(d, N, m) for m in range(1, m_max + 1)]


# -- inequality check -----------------------------------------------------------

@dataclass
class RvReport:
    height_bound: int
    places: PlaceSet
    epsilon: Fraction
    slack: ExactLog
    points_checked: int = 0
    points_on_divisors: int = 0
    max_excess: Optional[ExactLog] = None
    max_excess_point: Optional[ProjPoint] = None
    max_excess_off_lines: Optional[ExactLog] = None
    max_excess_off_lines_point: Optional[ProjPoint] = None
    violators: List[ProjPoint] = field(default_factory=list)
    slack_violators: List[ProjPoint] = field(default_factory=list)
    exceptional_lines: List[HomogeneousForm] = field(default_factory=list)
    grouping: Dict[str, List[ProjPoint]] = field(default_factory=dict)

    @property
    def off_family(self) -> List[ProjPoint]:
        return self.grouping.get("", [])

    @property
    def all_violators_on_lines(self) -> bool:
        return not self.off_family

    def to_json(self) -> dict:
        return {
            "height_bound": self.height_bound,
            "places": str(self.places),
            "epsilon": _frac_json(self.epsilon),
            "slack": self.slack.to_json(),
            "points_checked": self.points_checked,
            "points_on_divisors": self.points_on_divisors,
            "max_excess": self.max_excess.to_json() if self.max_excess is not None else None,
            "max_excess_point": str(self.max_excess_point) if self.max_excess_point else None,
            "max_excess_off_lines": self.max_excess_off_lines.to_json() if self.max_excess_off_lines is not None else None,
            "max_excess_off_lines_point": str(self.max_excess_off_lines_point) if self.max_excess_off_lines_point else None,
            "violators": len(self.violators),
            "slack_violators": [str(p) for p in self.slack_violators],
            "exceptional_lines": [str(l) for l in self.exceptional_lines],
            "violators_by_line": {
                (k or "off-family"): [str(p) for p in v] for k, v in sorted(self.grouping.items())
            },
        }


def default_slack(divisors: Sequence[HomogeneousForm]) -> ExactLog:
    """``log`` of the largest coefficient sum; bounds ``-lambda_inf`` per form."""
    if not divisors:
        return ZERO
    return ExactLog(max(sum(abs(c) for c in f.terms.values()) for f in divisors))


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _linear_coeffs(form: HomogeneousForm) -> Tuple[int, ...]:
    n = form.ring.num_vars
    return tuple(form.terms.get(tuple(1 if j == i else 0 for j in range(n)), 0) for i in range(n))


def candidate_lines(divisors: Sequence[HomogeneousForm]) -> List[HomogeneousForm]:
    """Lines through two distinct pairwise intersection points of the linear divisors."""
    lines = [f for f in divisors if f.degree == 1]
    if not lines:
        return []
    ring = lines[0].ring
    coeffs = [_linear_coeffs(f) for f in lines]
    pts = set()
    for u, v in itertools.combinations(coeffs, 2):
        p = _cross(u, v)
        if any(p):
            pts.add(normalize(p))
    own = {f.primitive_part() for f in lines}
    out = set()
    for p, q in itertools.combinations(sorted(pts), 2):
        c = _cross(p.coords, q.coords)
        if not any(c):
            continue
        terms = {}
        for i, a in enumerate(c):
            if a:
                terms[tuple(1 if j == i else 0 for j in range(3))] = a
        ell = HomogeneousForm(ring, terms).primitive_part()
        if ell not in own:
            out.add(ell)
    return sorted(out, key=HomogeneousForm.sort_key)


def _weighted_proximity(divisors, x: ProjPoint, S: PlaceSet) -> ExactLog:
    total = ZERO
    for f in divisors:
        total = total + proximity(f, x, S) * Fraction(1, f.degree)
    return total


def _exact_excess(divisors, x: ProjPoint, S: PlaceSet, N: int) -> ExactLog:
    return _weighted_proximity(divisors, x, S) - ExactLog(x.max_abs) * (N + 1)


def _slabs(B: int):
    """Normalized points of P^2(Q) with max |coordinate| <= B, one first coordinate at a time."""
    rng = np.arange(-B, B + 1, dtype=np.int64)
    bb, cc = np.meshgrid(rng, rng, indexing="ij")
    bb, cc = bb.ravel(), cc.ravel()
    yield np.zeros(1, np.int64), np.zeros(1, np.int64), np.ones(1, np.int64)
    pos = bb > 0
    b0, c0 = bb[pos], cc[pos]
    keep = np.gcd(b0, c0) == 1
    yield np.zeros(int(keep.sum()), np.int64), b0[keep], c0[keep]
    for a in range(1, B + 1):
        keep = np.gcd(np.gcd(bb, cc), a) == 1
        yield np.full(int(keep.sum()), a, np.int64), bb[keep], cc[keep]


def _eval_vec(form: HomogeneousForm, cols) -> np.ndarray:
    out = np.zeros(cols[0].shape, np.int64)
    for e, c in form.terms.items():
        t = np.full(cols[0].shape, c, np.int64)
        for col, k in zip(cols, e):
            if k:
                t = t * col ** k
        out = out + t
    return out


def _vec_valuation(vals: np.ndarray, p: int) -> np.ndarray:
    v = np.zeros(vals.shape, np.int64)
    work = np.abs(vals)
    mask = work % p == 0
    while mask.any():
        v[mask] += 1
        work[mask] //= p
        mask = work % p == 0
    return v


def _iter_points_generic(B: int, nvars: int):
    for coords in itertools.product(range(-B, B + 1), repeat=nvars):
        if not any(coords):
            continue
        first = next(c for c in coords if c)
        if first < 0:
            continue
        g = 0
        for c in coords:
            g = igcd(g, c)
        if g == 1:
            yield ProjPoint(coords)


def rv_check(
    divisors: Sequence[HomogeneousForm],
    S,
    epsilon,
    height_bound: int,
    N: int = 2,
    slack_const: Optional[ExactLog] = None,
    check_intersection: bool = True,
) -> RvReport:
    """Enumerate points of height <= ``height_bound`` and test
    ``sum (1/d_i) m_S(x, D_i) <= (N + 1 + epsilon) h(x) + slack``.

    The slack constant is an :class:`ExactLog` (default :func:`default_slack`).
    On P^2 with small enough values the scan is vectorized in floating point
    and every point within ``1e-9`` of a decision boundary or of the maximum
    is recomputed exactly; otherwise every point is handled exactly.
    """
    if not isinstance(S, PlaceSet):
        S = PlaceSet(S)
    epsilon = Fraction(epsilon)
    divisors = [f.require_nonzero().primitive_part() for f in divisors]
    slack = default_slack(divisors) if slack_const is None else slack_const
    report = RvReport(height_bound, S, epsilon, slack)
    if not divisors:
        return report
    if check_intersection:
        rep = properly_intersect(divisors, N)
        if not rep.proper:
            raise ValueError(f"divisors {rep.failing_subset} do not intersect properly")
    report.exceptional_lines = candidate_lines(divisors) if N == 2 else []

    fits = N == 2 and all(
        sum(abs(c) for c in f.terms.values()) * height_bound ** f.degree < 1 << 62 for f in divisors
    )
    points = _scan_vectorized(divisors, S, epsilon, height_bound, report) if fits else \
        _scan_exact(divisors, S, epsilon, height_bound, N, report)

    for x in points:
        lhs = _weighted_proximity(divisors, x, S)
        h = ExactLog(x.max_abs)
        if lhs.compare(h * (N + 1 + epsilon)) > 0:
            report.violators.append(x)
            if lhs.compare(h * (N + 1 + epsilon) + slack) > 0:
                report.slack_violators.append(x)
    report.violators.sort()
    report.slack_violators.sort()
    for x in report.violators:
        on = [str(l) for l in report.exceptional_lines if evaluate(l, x.coords) == 0]
        report.grouping.setdefault(on[0] if on else "", []).append(x)
    return report


def _scan_exact(divisors, S, epsilon, B, N, report) -> List[ProjPoint]:
    candidates = []
    best = best_off = None
    for x in _iter_points_generic(B, N + 1):
        if any(evaluate(f, x.coords) == 0 for f in divisors):
            report.points_on_divisors += 1
            continue
        report.points_checked += 1
        ex = _exact_excess(divisors, x, S, N)
        if best is None or ex > best[0]:
            best = (ex, x)
        if not any(evaluate(l, x.coords) == 0 for l in report.exceptional_lines):
            if best_off is None or ex > best_off[0]:
                best_off = (ex, x)
        if ex.compare(ExactLog(x.max_abs) * epsilon) > 0:
            candidates.append(x)
    if best is not None:
        report.max_excess, report.max_excess_point = best
    if best_off is not None:
        report.max_excess_off_lines, report.max_excess_off_lines_point = best_off
    return candidates


def _scan_vectorized(divisors, S, epsilon, B, report, tol: float = 1e-9) -> List[ProjPoint]:
    N = 2
    eps = float(epsilon)
    primes = S.primes
    logp = {p: math.log(p) for p in primes}
    # running maxima over all points and over points off the candidate lines
    trackers = {"all": [-math.inf, []], "off": [-math.inf, []]}
    candidates: List[ProjPoint] = []

    def track(key, excess, cols, mask=None):
        fmax, near = trackers[key]
        vals = excess if mask is None else np.where(mask, excess, -np.inf)
        slab_max = float(vals.max())
        if slab_max <= fmax - tol:
            return
        if slab_max > fmax:
            fmax = slab_max
            near = [t for t in near if t[0] > fmax - tol]
        for i in np.nonzero(vals > fmax - tol)[0]:
            near.append((float(vals[i]), ProjPoint((int(cols[0][i]), int(cols[1][i]), int(cols[2][i])))))
        trackers[key] = [fmax, near]

    for a, b, c in _slabs(B):
        if a.size == 0:
            continue
        cols = (a, b, c)
        vals = [_eval_vec(f, cols) for f in divisors]
        off = np.ones(a.shape, bool)
        for v in vals:
            off &= v != 0
        report.points_on_divisors += int((~off).sum())
        if not off.any():
            continue
        cols = tuple(col[off] for col in cols)
        vals = [v[off] for v in vals]
        logH = np.log(np.maximum(np.maximum(np.abs(cols[0]), np.abs(cols[1])), np.abs(cols[2])).astype(float))
        lhs = np.zeros(logH.shape)
        for f, v in zip(divisors, vals):
            part = np.zeros(logH.shape)
            if S.contains_infinity:
                part += f.degree * logH - np.log(np.abs(v).astype(float))
            for p in primes:
                part += _vec_valuation(v, p) * logp[p]
            lhs += part / f.degree
        excess = lhs - (N + 1) * logH
        report.points_checked += int(logH.size)
        margin = excess - eps * logH
        for i in np.nonzero(margin > -tol)[0]:
            candidates.append(ProjPoint((int(cols[0][i]), int(cols[1][i]), int(cols[2][i]))))
        track("all", excess, cols)
        off_lines = np.ones(logH.shape, bool)
        for l in report.exceptional_lines:
            off_lines &= _eval_vec(l, cols) != 0
        if off_lines.any():
            track("off", excess, cols, off_lines)

    for key in ("all", "off"):
        best = None
        for _, x in trackers[key][1]:
            ex = _exact_excess(divisors, x, S, N)
            if best is None or ex > best[0] or (ex == best[0] and x < best[1]):
                best = (ex, x)
        if best is None:
            continue
        if key == "all":
            report.max_excess, report.max_excess_point = best
        else:
            report.max_excess_off_lines, report.max_excess_off_lines_point = best
    return candidates

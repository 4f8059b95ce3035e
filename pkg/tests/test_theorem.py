import itertools
from fractions import Fraction
from math import gcd

import pytest

from integral_orbits.divisor import FactorBasis, parse_divisor
from integral_orbits.errors import DeltaNotGreaterThanOne, OnDivisor, SizeBudgetExceeded
from integral_orbits.forms import evaluate
from integral_orbits.heights import ExactLog, proximity
from integral_orbits.projective import PlaceSet, ProjPoint
from integral_orbits.selfmap import SelfMap, identity_map
from integral_orbits.theorem import (
    HEIGHT_ZERO, NO, ON_DIVISOR, CnReport, beta, beta_discrete, beta_oracle, candidate_lines, compute_cn,
    RvReport, _scan_exact, default_slack, orbit_scan, rv_check,
)

from conftest import CONICS


def test_cn_example1(ex1_map, D_z):
    rep = compute_cn(ex1_map, D_z, 2)
    assert (rep.q_n, rep.m_i_list, rep.gamma, rep.delta_f, rep.mu) == (4, [1, 1, 1, 1], 3, 4, 1)
    assert rep.c_n == Fraction(1, 16)
    assert not rep.inconclusive and rep.is_consistent()
    assert rep.degree_identity() == (12, 12)


def test_cn_example1_n1_is_inconclusive(ex1_map, D_z):
    rep = compute_cn(ex1_map, D_z, 1)
    assert rep.c_n == Fraction(-1, 4)
    assert rep.inconclusive


def test_cn_example2(R):
    p, q, r, s = [R.parse(c) for c in CONICS]
    f = SelfMap((p * q, r * s, R.parse("x^2*y^2")))
    rep = compute_cn(f, parse_divisor("(z)", R), 2, FactorBasis([p, q, r, s]))
    assert rep.m_i_list == [2, 2, 2, 2] and rep.gamma == 6
    assert rep.c_n == Fraction(1, 8)
    assert rep.degree_identity() == (8, 8)


def test_cn_json_roundtrip(ex1_map, D_z):
    rep = compute_cn(ex1_map, D_z, 2)
    back = CnReport.from_json(rep.to_json())
    assert back.is_consistent() and back.c_n == rep.c_n


def test_cn_needs_degree_above_one(R):
    with pytest.raises(DeltaNotGreaterThanOne):
        compute_cn(identity_map(R), parse_divisor("(z)", R), 1)


def test_orbit_scan_example1(ex1_map, D_z):
    scan = orbit_scan(ex1_map, D_z, ProjPoint((1, 1, 1)), PlaceSet(["inf"]), 2, Fraction(1, 32), 5)
    assert len(scan) == 6
    assert scan.records[0].flag == HEIGHT_ZERO
    assert all(r.identity_holds(1) for r in scan.records)
    # independent recomputation of the proximity straight from the archimedean formula
    for r in scan.records[1:]:
        value = evaluate(D_z.forms[0], r.point.coords)
        assert r.proximity_S == ExactLog(Fraction(r.point.max_abs, abs(value)))
    assert scan.flagged == [1]
    assert scan.records[2].flag == NO


def test_orbit_scan_on_divisor(R):
    f = SelfMap.parse(R, ["x^2", "y^2", "z^2"]).certify()
    D = parse_divisor("(z)", R)
    scan = orbit_scan(f, D, ProjPoint((1, 2, 0)), PlaceSet(["inf"]), 1, Fraction(1, 2), 2,
                      cn=compute_cn(f, D, 1))
    assert [r.flag for r in scan] == [ON_DIVISOR] * 3
    assert all(r.proximity_S is None and r.counting_S is None for r in scan)


def test_orbit_scan_budget(ex1_map, D_z):
    with pytest.raises(SizeBudgetExceeded):
        orbit_scan(ex1_map, D_z, ProjPoint((1, 1, 1)), PlaceSet(["inf"]), 2, Fraction(1, 32), 9, bit_budget=500)


def test_flag_monotone_in_epsilon(ex1_map, D_z):
    S = PlaceSet(["inf", 2, 3])
    flags = {}
    for eps in (Fraction(1, 64), Fraction(1, 32), Fraction(1, 16)):
        flags[eps] = set(orbit_scan(ex1_map, D_z, ProjPoint((1, 1, 1)), S, 2, eps, 5).flagged)
    assert flags[Fraction(1, 16)] <= flags[Fraction(1, 32)] <= flags[Fraction(1, 64)]


def test_beta_formula():
    assert beta(1, 2).beta_formula == Fraction(1, 3)
    assert beta(2, 2).beta_formula == Fraction(1, 6)
    assert beta(1, 1).beta_formula == Fraction(1, 2)


def test_beta_oracle_by_direct_count():
    # count monomials of degree m divisible by the l-th power of a fixed degree-d monomial, naively
    def naive(d, N, m):
        mons = [e for e in itertools.product(range(m + 1), repeat=N + 1) if sum(e) == m]
        total = sum(sum(1 for e in mons if e[0] >= l * d) for l in range(1, m // d + 1))
        return Fraction(total, m * len(mons))

    for d, m in [(1, 6), (2, 7), (3, 9)]:
        assert beta_discrete(d, 2, m) == naive(d, 2, m)
    seq = beta_oracle(2, 2, 300)
    assert len(seq) == 300
    assert abs(float(seq[-1]) - 1 / 6) < 0.02
    errors = [abs(float(seq[m - 1]) - 1 / 6) for m in (50, 100, 200, 300)]
    assert errors == sorted(errors, reverse=True)


def test_candidate_lines(R):
    lines = [R.parse(s) for s in ["x", "y", "z", "x+y+z"]]
    assert [str(l) for l in candidate_lines(lines)] == ["x+y", "x+z", "y+z"]


def test_rv_check_vectorized_matches_exact(R):
    lines = [R.parse(s) for s in ["x", "y", "z", "x+y+z"]]
    for S in (PlaceSet(["inf"]), PlaceSet(["inf", 2, 3])):
        fast = rv_check(lines, S, Fraction(1, 2), 15)
        ref = RvReport(15, S, Fraction(1, 2), default_slack(lines))
        cands = _scan_exact(lines, S, Fraction(1, 2), 15, 2, ref)
        assert fast.points_checked == ref.points_checked
        assert fast.points_on_divisors == ref.points_on_divisors
        assert fast.max_excess == ref.max_excess
        assert set(fast.violators) <= set(cands)


def test_rv_check_against_brute_force(R):
    lines = [R.parse(s) for s in ["x", "y", "z", "x+y+z"]]
    S = PlaceSet(["inf", 2])
    B = 8
    rep = rv_check(lines, S, Fraction(1, 4), B)
    seen, viol = 0, []
    for c in itertools.product(range(-B, B + 1), repeat=3):
        if not any(c) or next(v for v in c if v) < 0:
            continue
        if gcd(gcd(c[0], c[1]), c[2]) != 1:
            continue
        x = ProjPoint(c)
        try:
            lhs = sum((float(proximity(f, x, S)) for f in lines), 0.0)
        except OnDivisor:
            continue
        seen += 1
        if lhs > (3 + 0.25) * float(ExactLog(x.max_abs)) + 1e-12:
            viol.append(x)
    assert rep.points_checked == seen
    assert rep.violators == sorted(viol)
    # off the candidate lines, the violations at this small height are absorbed by the slack
    assert rep.off_family
    assert not set(rep.slack_violators) & set(rep.off_family)


def test_rv_check_single_divisor_and_empty(R):
    z = R.parse("z")
    rep = rv_check([z], ["inf", 2, 3], Fraction(1, 10), 30)
    assert rep.slack_violators == []
    empty = rv_check([], ["inf"], 1, 30)
    assert empty.points_checked == 0 and empty.violators == []

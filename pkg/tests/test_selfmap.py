import pytest

from integral_orbits.errors import (
    ArityMismatch, ComputationError, DegreeMismatch, NotCertified, OverflowGuard, SizeBudgetExceeded,
)
from integral_orbits.forms import compose, evaluate
from integral_orbits.projective import ProjPoint, normalize
from integral_orbits.selfmap import (
    DegreeOneWarning, SelfMap, apply, check_morphism, dynamical_degree, identity_map, iterate_symbolic, orbit,
)


def test_example_map_certified(ex1_map):
    cert = ex1_map.certificate
    assert cert.certified
    assert cert.degree_bound == 3 * 4 - 2
    assert cert.rank == cert.target_dim == 66
    assert dynamical_degree(ex1_map) == 4


def test_common_zero_not_certified(R):
    f = SelfMap.parse(R, ["x^2", "y^2", "x*y"])  # all vanish at [0:0:1]
    assert not check_morphism(f).certified
    with pytest.raises(NotCertified):
        f.certify()


def test_validation(R):
    with pytest.raises(ArityMismatch):
        SelfMap.parse(R, ["x", "y"])
    with pytest.raises(DegreeMismatch):
        SelfMap.parse(R, ["x", "y^2", "z"])
    with pytest.raises(ComputationError):
        SelfMap.parse(R, ["x^2", "x*y", "x*z"])


def test_degree_one_warns(R):
    f = identity_map(R).certify()
    with pytest.warns(DegreeOneWarning):
        assert dynamical_degree(f) == 1


def test_apply_matches_direct_evaluation(ex1_map):
    x = ProjPoint((2, 3, 1))
    # y^4+z^4 = 82, x^3(x+y+z) = 48, y z^3 = 3
    assert apply(ex1_map, x) == ProjPoint((82, 48, 3))


def test_orbit_and_iterate_agree(ex1_map):
    orb = orbit(ex1_map, ProjPoint((1, 1, 1)), 3)
    assert len(orb) == 4
    f3 = iterate_symbolic(ex1_map, 3)
    assert f3.degree == 64
    assert normalize([evaluate(c, (1, 1, 1)) for c in f3.components]) == orb[3]
    # second iterate pulls z back to the known divisor form
    f2 = iterate_symbolic(ex1_map, 2)
    assert f2.components[2] == compose(compose(f2.ring.parse("z"), ex1_map.components), ex1_map.components)


def test_orbit_needs_certificate(R):
    f = SelfMap.parse(R, ["y^4+z^4", "x^3*(x+y+z)", "y*z^3"])
    with pytest.raises(NotCertified):
        orbit(f, ProjPoint((1, 1, 1)), 2)


def test_orbit_cycle(R):
    f = SelfMap.parse(R, ["y^2", "x^2", "z^2"]).certify()
    # [1:-1:1] -> [1:1:1], a fixed point
    orb = orbit(f, ProjPoint((1, -1, 1)), 5)
    assert (orb.repeat_of, orb.repeat_at, orb.cycle_length) == (1, 2, 1)
    assert orb.points[1:] == [ProjPoint((1, 1, 1))] * 5
    # [2:1:1] -> [1:4:1] -> [16:1:1] -> [1:256:1]: no repeat
    orb = orbit(f, ProjPoint((2, 1, 1)), 3)
    assert orb.repeat_at is None
    assert orb.points == [ProjPoint((2, 1, 1)), ProjPoint((1, 4, 1)), ProjPoint((16, 1, 1)), ProjPoint((1, 256, 1))]


def test_budgets(ex1_map):
    with pytest.raises(SizeBudgetExceeded):
        orbit(ex1_map, ProjPoint((1, 1, 1)), 8, bit_budget=200)
    with pytest.raises(OverflowGuard):
        iterate_symbolic(ex1_map, 6, term_budget=10 ** 5)

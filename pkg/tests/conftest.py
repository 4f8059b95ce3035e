import pytest

from integral_orbits import fixture_path
from integral_orbits.divisor import parse_divisor
from integral_orbits.forms import Ring
from integral_orbits.problem import load_problem
from integral_orbits.selfmap import SelfMap

CONICS = [
    "x^2+y^2+z^2",
    "x^2+2*y^2-3*z^2+x*y",
    "x^2-y^2+x*z+2*z^2",
    "2*x^2+y^2-z^2+y*z",
]


@pytest.fixture
def R():
    return Ring(("x", "y", "z"))


@pytest.fixture
def ex1_map(R):
    return SelfMap.parse(R, ["y^4+z^4", "x^3*(x+y+z)", "y*z^3"]).certify()


@pytest.fixture
def D_z(R):
    return parse_divisor("(z)", R)


@pytest.fixture
def ex1():
    return load_problem(fixture_path("example1.prob"))


@pytest.fixture
def ex2():
    return load_problem(fixture_path("example2.prob"))

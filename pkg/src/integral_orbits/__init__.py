"""Exact arithmetic for integral points in forward orbits of self-maps of P^N over Q."""
from .divisor import Divisor, FactorBasis, parse_divisor, pullback, reduced_pi_part
from .errors import BudgetExceeded, ComputationError, OrbitError, ParseError
from .forms import HomogeneousForm, Ring
from .heights import ExactLog, counting, height_of_divisor_class, local_weil, proximity
from .intersect import properly_intersect
from .projective import PlaceSet, ProjPoint, height, normalize
from .selfmap import SelfMap, orbit
from .theorem import beta, beta_oracle, compute_cn, orbit_scan, rv_check

__all__ = [
    "BudgetExceeded", "ComputationError", "Divisor", "ExactLog", "FactorBasis", "HomogeneousForm", "OrbitError",
    "ParseError", "PlaceSet", "ProjPoint", "Ring", "SelfMap", "beta", "beta_oracle", "compute_cn", "counting",
    "height", "height_of_divisor_class", "local_weil", "normalize", "orbit", "orbit_scan", "parse_divisor",
    "properly_intersect", "proximity", "pullback", "reduced_pi_part", "rv_check",
]
__version__ = "0.1.0"


def fixture_path(name: str) -> str:
    """Path of a shipped problem file such as ``example1.prob``."""
    from importlib.resources import files

    return str(files(__package__) / "fixtures" / name)

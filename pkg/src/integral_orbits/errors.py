"""Exception hierarchy.

Every error raised by the library derives from :class:`OrbitError`.  The CLI
maps the three families below onto its exit codes.
"""


class OrbitError(Exception):
    """Base class for all library errors."""


class ParseError(OrbitError):
    """Malformed input text (expressions, points, problem files)."""


class ComputationError(OrbitError):
    """A well-formed request that cannot be carried out."""


class BudgetExceeded(OrbitError):
    """A configured size budget was passed."""


# -- core algebra ---------------------------------------------------------

class ExpressionSyntaxError(ParseError):
    pass


class UnknownVariable(ParseError):
    pass


class InhomogeneousError(ParseError):
    pass


class ZeroFormError(ComputationError):
    pass


class RingMismatch(ComputationError):
    pass


class ArityMismatch(ComputationError):
    pass


class DegreeMismatch(ComputationError):
    pass


class NotDivisible(ComputationError):
    pass


# -- projective -----------------------------------------------------------

class AllZero(ComputationError):
    pass


class ZeroInput(ComputationError):
    pass


class NotPrime(ComputationError):
    pass


# -- maps, divisors, heights, theorem -------------------------------------

class NotCertified(ComputationError):
    pass


class OverflowGuard(BudgetExceeded):
    pass


class SizeBudgetExceeded(BudgetExceeded):
    pass


class UnverifiedComponent(ComputationError):
    pass


class UnverifiedIrreducibility(ComputationError):
    pass


class OnDivisor(ComputationError):
    """The point lies on the support of the divisor; the Weil function is +inf."""


class DeltaNotGreaterThanOne(ComputationError):
    pass

"""Exact local Weil functions, proximity, counting and height functions over Q.

Presentation: a divisor component cut out by a primitive integer form ``F``
of degree ``d`` gets the local Weil function

    lambda_v(F, x) = log( max_j |x_j|_v ** d / |F(x)|_v )

evaluated in coprime integer coordinates.  At a prime ``p`` the numerator
is 1, so ``lambda_p = v_p(F(x)) log p``.  Summing over all places and using
the product formula gives ``d * h(x)`` on the nose, which is why counting
functions here are computed by subtraction and never by factoring ``F(x)``.

Every quantity is an :class:`ExactLog`: the logarithm of a positive
rational, possibly divided by a positive integer root index.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from math import lcm
from typing import Iterable, Tuple, Union

import mpmath

from .errors import OnDivisor
from .forms import HomogeneousForm, evaluate
from .projective import Place, PlaceSet, ProjPoint, padic_valuation

Number = Union[int, Fraction]

EXACT_BIT_CAP = 10 ** 7
_START_PREC = 256
_MAX_PREC = 1 << 20


def _to_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _pow_fraction(b: Fraction, k: int) -> Fraction:
    if k >= 0:
        return Fraction(b.numerator ** k, b.denominator ** k)
    return Fraction(b.denominator ** -k, b.numerator ** -k)


def _bits(b: Fraction) -> int:
    return b.numerator.bit_length() + b.denominator.bit_length()


@total_ordering
class ExactLog:
    """``log(argument) / root`` for a positive rational ``argument``.

    Sums multiply arguments and rational multiples raise them to powers, so
    no rounding ever happens.  Comparison is exact up to
    :data:`EXACT_BIT_CAP` bits and falls back to interval arithmetic with
    escalating precision beyond that.
    """

    __slots__ = ("argument", "root")

    def __init__(self, argument: Number = 1, root: int = 1):
        arg = _to_fraction(argument)
        if arg <= 0:
            raise ValueError(f"ExactLog argument must be positive, got {arg}")
        if root < 1:
            raise ValueError("root index must be a positive integer")
        self.argument = arg
        self.root = int(root)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other: "ExactLog") -> "ExactLog":
        if not isinstance(other, ExactLog):
            return NotImplemented
        q = lcm(self.root, other.root)
        arg = _pow_fraction(self.argument, q // self.root) * _pow_fraction(other.argument, q // other.root)
        return ExactLog(arg, q)

    def __neg__(self) -> "ExactLog":
        return ExactLog(1 / self.argument, self.root)

    def __sub__(self, other: "ExactLog") -> "ExactLog":
        if not isinstance(other, ExactLog):
            return NotImplemented
        return self + (-other)

    def __mul__(self, t: Number) -> "ExactLog":
        t = _to_fraction(t)
        if t == 0:
            return ExactLog(1)
        return ExactLog(_pow_fraction(self.argument, t.numerator), self.root * t.denominator)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.argument == 1

    @property
    def is_integral_exponent(self) -> bool:
        return self.root == 1

    # -- comparison --------------------------------------------------------
    def _cross(self, other: "ExactLog") -> Tuple[Fraction, Fraction]:
        return (_pow_fraction(self.argument, other.root), _pow_fraction(other.argument, self.root))

    def compare(self, other: "ExactLog", bit_cap: int = EXACT_BIT_CAP) -> int:
        """Return -1, 0 or 1 as ``self`` is below, equal to or above ``other``."""
        cost = other.root * _bits(self.argument) + self.root * _bits(other.argument)
        if cost <= bit_cap:
            a, b = self._cross(other)
            return (a > b) - (a < b)
        return _interval_compare(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactLog):
            return NotImplemented
        return self.compare(other) == 0

    def __lt__(self, other: "ExactLog") -> bool:
        return self.compare(other) < 0

    __hash__ = None  # equal values can have different (argument, root) pairs

    def sign(self) -> int:
        return (self.argument > 1) - (self.argument < 1)

    # -- numerics & serialization -----------------------------------------
    def __float__(self) -> float:
        a = self.argument
        return (math.log(a.numerator) - math.log(a.denominator)) / self.root

    def mpf(self, prec: int = 256):
        with mpmath.workprec(prec):
            a = self.argument
            return (mpmath.log(a.numerator) - mpmath.log(a.denominator)) / self.root

    def to_json(self) -> dict:
        out = {
            "argument_numerator": str(self.argument.numerator),
            "argument_denominator": str(self.argument.denominator),
            "approx_decimal": f"{float(self):.12g}",
        }
        if self.root != 1:
            out["root"] = self.root
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ExactLog":
        arg = Fraction(int(data["argument_numerator"]), int(data["argument_denominator"]))
        return cls(arg, int(data.get("root", 1)))

    def __repr__(self) -> str:
        if self.root == 1:
            return f"ExactLog({self.argument})"
        return f"ExactLog({self.argument}, root={self.root})"

    def __str__(self) -> str:
        body = f"log({self.argument})"
        return body if self.root == 1 else f"{body}/{self.root}"


ZERO = ExactLog(1)


def _interval_compare(a: ExactLog, b: ExactLog) -> int:
    iv = mpmath.iv
    saved = iv.prec
    try:
        prec = _START_PREC
        while prec <= _MAX_PREC:
            iv.prec = prec
            ia, ib = _interval(a), _interval(b)
            if ia.b < ib.a:
                return -1
            if ia.a > ib.b:
                return 1
            prec *= 2
    finally:
        iv.prec = saved
    # intervals never separated: fall back to the exact cross powers
    x, y = a._cross(b)
    return (x > y) - (x < y)


def _interval(v: ExactLog):
    iv = mpmath.iv
    num = iv.log(iv.mpf(v.argument.numerator))
    den = iv.log(iv.mpf(v.argument.denominator))
    return (num - den) / v.root


def log_le_scaled(a: ExactLog, t: Number, b: ExactLog, bit_cap: int = EXACT_BIT_CAP) -> bool:
    """Decide ``a <= t * b`` exactly for rational ``t``."""
    return a.compare(b * t, bit_cap) <= 0


# -- Weil functions ---------------------------------------------------------

def _components(divisor) -> Iterable[Tuple[HomogeneousForm, int]]:
    if isinstance(divisor, HomogeneousForm):
        return [(divisor, 1)]
    out = []
    for item in divisor.components:
        if hasattr(item, "form"):
            out.append((item.form, item.multiplicity))
        else:
            out.append(tuple(item))
    return out


def _degree(divisor) -> int:
    if isinstance(divisor, HomogeneousForm):
        return divisor.degree
    return sum(form.degree * mult for form, mult in _components(divisor))


def _as_place(v) -> Place:
    return v if isinstance(v, Place) else Place(v)


def local_weil(form: HomogeneousForm, x: ProjPoint, v) -> ExactLog:
    """Local Weil function of the hypersurface ``form = 0`` at the place ``v``."""
    form.require_nonzero()
    v = _as_place(v)
    value = evaluate(form, x.coords)
    if value == 0:
        raise OnDivisor(f"{x} lies on {form}=0")
    if v.is_infinite:
        return ExactLog(Fraction(x.max_abs ** form.degree, abs(value)))
    return ExactLog(v.prime ** padic_valuation(value, v.prime))


def local_weil_divisor(divisor, x: ProjPoint, v) -> ExactLog:
    total = ZERO
    for form, mult in _components(divisor):
        total = total + local_weil(form, x, v) * mult
    return total


def proximity(divisor, x: ProjPoint, places: PlaceSet) -> ExactLog:
    """``m_S(D, x)``: sum of local Weil functions over the places in ``S``."""
    if not isinstance(places, PlaceSet):
        places = PlaceSet(places)
    total = ZERO
    for v in places:
        total = total + local_weil_divisor(divisor, x, v)
    if not places:
        # still reject points on the support
        for form, _ in _components(divisor):
            if evaluate(form, x.coords) == 0:
                raise OnDivisor(f"{x} lies on {form}=0")
    return total


def height_of_divisor_class(divisor, x: ProjPoint) -> ExactLog:
    """``h_{O(D)}(x) = deg(D) * h(x)`` for the max-coordinate presentation."""
    return ExactLog(x.max_abs ** _degree(divisor))


def counting(divisor, x: ProjPoint, places: PlaceSet) -> ExactLog:
    """``n_S(D, x)``, obtained as ``h_{O(D)}(x) - m_S(D, x)``."""
    return height_of_divisor_class(divisor, x) - proximity(divisor, x, places)


def on_support(divisor, x: ProjPoint) -> bool:
    return any(evaluate(form, x.coords) == 0 for form, _ in _components(divisor))

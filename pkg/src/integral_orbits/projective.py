"""Rational points of P^N, places of Q and p-adic valuations."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple

from .errors import AllZero, NotPrime, ZeroInput

# Miller-Rabin with these bases is deterministic below this bound.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981


def is_prime(n: int) -> bool:
    """Deterministic primality test for ``n < 3.3e24``."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise NotPrime(f"{n} is beyond the deterministic Miller-Rabin range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True, order=True)
class ProjPoint:
    """Point of P^N(Q) in coprime integer coordinates, first nonzero one positive.

    Build through :func:`normalize`; the constructor only validates.
    """

    coords: Tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(v) for v in self.coords)
        object.__setattr__(self, "coords", c)
        if not any(c):
            raise AllZero("all coordinates are zero")
        g = 0
        for v in c:
            g = gcd(g, v)
        first = next(v for v in c if v)
        if g != 1 or first < 0:
            raise ValueError(f"{c} is not normalized; use normalize()")

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __str__(self) -> str:
        return "[" + " : ".join(str(v) for v in self.coords) + "]"

    @property
    def max_abs(self) -> int:
        return max(abs(v) for v in self.coords)


def normalize(raw: Sequence) -> ProjPoint:
    """Clear denominators, divide by the gcd and make the first nonzero entry positive."""
    vals = [Fraction(v) for v in raw]
    if not any(vals):
        raise AllZero("all coordinates are zero")
    den = 1
    for v in vals:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in vals]
    g = 0
    for v in ints:
        g = gcd(g, v)
    first = next(v for v in ints if v)
    if first < 0:
        g = -g
    return ProjPoint(tuple(v // g for v in ints))


def height(x: ProjPoint):
    """Logarithmic Weil height ``log max |x_j|`` of a normalized point."""
    from .heights import ExactLog

    return ExactLog(x.max_abs)


def padic_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ZeroInput("valuation of zero is infinite")
    if p < 2:
        raise ValueError(f"bad prime {p}")
    n = abs(n)
    e = 0
    # square-and-divide keeps huge valuations cheap
    while n % p == 0:
        pk, k = p, 1
        while n % (pk * pk) == 0:
            pk *= pk
            k *= 2
        n //= pk
        e += k
    return e


@dataclass(frozen=True)
class Place:
    """A place of Q: ``prime is None`` for the archimedean one."""

    prime: Optional[int] = None

    def __post_init__(self):
        if self.prime is not None and not is_prime(int(self.prime)):
            raise NotPrime(f"{self.prime} is not prime")

    @property
    def is_infinite(self) -> bool:
        return self.prime is None

    def __str__(self) -> str:
        return "inf" if self.prime is None else str(self.prime)

    def sort_key(self):
        return (0, 0) if self.prime is None else (1, self.prime)


INFINITY = Place(None)


class PlaceSet:
    """Finite set of places; duplicates collapse and order is canonical."""

    def __init__(self, places: Iterable = ()):
        items = set()
        for p in places:
            if isinstance(p, Place):
                items.add(p)
            elif p is None or (isinstance(p, str) and p.lower() in ("inf", "oo", "infinity")):
                items.add(INFINITY)
            else:
                items.add(Place(int(p)))
        self.places: FrozenSet[Place] = frozenset(items)

    @classmethod
    def parse(cls, text: str) -> "PlaceSet":
        from .parsing import parse_place_set

        return cls(parse_place_set(text))

    def __iter__(self):
        return iter(sorted(self.places, key=Place.sort_key))

    def __len__(self) -> int:
        return len(self.places)

    def __contains__(self, item) -> bool:
        if not isinstance(item, Place):
            item = Place(item)
        return item in self.places

    def __eq__(self, other) -> bool:
        return isinstance(other, PlaceSet) and self.places == other.places

    def __hash__(self) -> int:
        return hash(self.places)

    @property
    def contains_infinity(self) -> bool:
        return INFINITY in self.places

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(sorted(p.prime for p in self.places if p.prime is not None))

    def __str__(self) -> str:
        return "{" + ", ".join(str(p) for p in self) + "}"

    def __repr__(self) -> str:
        return f"PlaceSet({self})"

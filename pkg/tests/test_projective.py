import random
from fractions import Fraction

import pytest
import sympy

from integral_orbits.errors import AllZero, NotPrime, ZeroInput
from integral_orbits.projective import (
    INFINITY, Place, PlaceSet, ProjPoint, height, is_prime, normalize, padic_valuation,
)


def trial_division_valuation(n, p):
    n, e = abs(n), 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def test_normalize():
    assert normalize([2, 4, -6]) == ProjPoint((1, 2, -3))
    assert normalize([0, -3, 6]) == ProjPoint((0, 1, -2))
    assert normalize([Fraction(1, 2), Fraction(1, 3), 1]) == ProjPoint((3, 2, 6))
    with pytest.raises(AllZero):
        normalize([0, 0, 0])
    with pytest.raises(ValueError):
        ProjPoint((2, 4, 6))


def test_height():
    assert float(height(ProjPoint((1, 2, 3)))) == pytest.approx(1.0986122886681098)
    assert height(ProjPoint((1, 1, 1))).is_zero()


def test_valuation_against_trial_division():
    rng = random.Random(3)
    for _ in range(500):
        p = rng.choice([2, 3, 5, 7, 97])
        n = rng.randint(1, 10 ** 6) * p ** rng.randint(0, 40) * rng.choice([1, -1])
        assert padic_valuation(n, p) == trial_division_valuation(n, p)
    with pytest.raises(ZeroInput):
        padic_valuation(0, 2)


def test_is_prime_against_sympy():
    rng = random.Random(5)
    for n in list(range(-5, 2000)) + [rng.randint(1, 10 ** 20) for _ in range(300)]:
        assert is_prime(n) == sympy.isprime(n)


def test_is_prime_limit():
    with pytest.raises(NotPrime):
        is_prime(10 ** 30 + 1)


def test_place_set():
    S = PlaceSet(["inf", 3, 2, 2])
    assert str(S) == "{inf, 2, 3}"
    assert S.contains_infinity
    assert S.primes == (2, 3)
    assert INFINITY in S and Place(5) not in S
    assert PlaceSet.parse("{2, inf, 3}") == S
    with pytest.raises(NotPrime):
        PlaceSet([4])

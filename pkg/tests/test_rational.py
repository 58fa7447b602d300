import math
import random
from fractions import Fraction

import mpmath
import pytest

from goursat import RationalComplex
from goursat.rational import _mpf_to_fraction


def test_construction_normalizes():
    value = RationalComplex(Fraction(2, 4), Fraction(-3, 6))
    assert value.re == Fraction(1, 2)
    assert value.im == Fraction(-1, 2)
    assert value.re.denominator > 0


def test_field_arithmetic():
    a = RationalComplex(Fraction(1, 2), Fraction(1, 3))
    b = RationalComplex(Fraction(-2, 5), 1)
    assert (a + b) - b == a
    assert (a * b) / b == a
    assert a * RationalComplex(1) == a
    assert -(-a) == a
    assert a - a == RationalComplex(0)
    assert not (a - a)


def test_division_is_exact():
    a = RationalComplex(1, 1)
    b = RationalComplex(Fraction(1, 3), Fraction(-2, 7))
    q = a / b
    assert q * b == a


def test_powers():
    i = RationalComplex(0, 1)
    assert i**2 == RationalComplex(-1)
    assert i**0 == RationalComplex(1)
    a = RationalComplex(Fraction(2, 3), Fraction(-1, 4))
    assert a**3 == a * a * a
    with pytest.raises(ValueError):
        a ** (-1)


def test_abs2_and_log_abs():
    a = RationalComplex(3, 4)
    assert a.abs2() == 25
    assert abs(a) == pytest.approx(5.0)
    # far beyond float range
    huge = RationalComplex(Fraction(10**400), 0)
    assert huge.log_abs() == pytest.approx(400 * math.log(10))


def test_mpc_roundtrip_is_exact():
    with mpmath.workprec(128):
        x = mpmath.mpf(1) / 3
    frac = _mpf_to_fraction(x)
    with mpmath.workprec(128):
        assert mpmath.mpf(frac.numerator) / frac.denominator == x


def test_mixed_scalar_arithmetic():
    a = RationalComplex(1, 2)
    assert a + 1 == RationalComplex(2, 2)
    assert 2 * a == RationalComplex(2, 4)
    assert 1 - a == RationalComplex(0, -2)
    assert (a / 2) * 2 == a


def test_immutability():
    a = RationalComplex(1)
    with pytest.raises(AttributeError):
        a.re = Fraction(2)


def test_hash_consistent_with_eq():
    rng = random.Random(7)
    for _ in range(50):
        re = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
        im = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
        a = RationalComplex(re, im)
        b = RationalComplex(re, im)
        assert a == b and hash(a) == hash(b)

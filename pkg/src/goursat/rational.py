"""Exact Gaussian-rational arithmetic.

The whole exact layer of the toolkit (operators, truncated series, the
solvability gate and the linear solver) works over complex numbers whose real
and imaginary parts are arbitrary-precision rationals.  ``fractions.Fraction``
keeps denominators positive and in lowest terms, which makes representatives
canonical and equality exact.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath


class RationalComplex:
    """Complex number with exact rational real/imaginary parts. Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is Fraction else Fraction(re))
        object.__setattr__(self, "im", im if type(im) is Fraction else Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("RationalComplex is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def coerce(cls, value) -> "RationalComplex":
        if isinstance(value, RationalComplex):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        raise TypeError(f"cannot coerce {value!r} to RationalComplex")

    @classmethod
    def from_mpc(cls, value) -> "RationalComplex":
        """Exact dyadic-rational image of an mpmath number (no re-rounding)."""
        if isinstance(value, mpmath.mpc):
            return cls(_mpf_to_fraction(value.real), _mpf_to_fraction(value.imag))
        return cls(_mpf_to_fraction(value), Fraction(0))

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _try_coerce(value):
        try:
            return RationalComplex.coerce(value)
        except TypeError:
            return None

    def __add__(self, other):
        other = RationalComplex._try_coerce(other)
        if other is None:
            return NotImplemented
        return RationalComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = RationalComplex._try_coerce(other)
        if other is None:
            return NotImplemented
        return RationalComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = RationalComplex._try_coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = RationalComplex._try_coerce(other)
        if other is None:
            return NotImplemented
        return RationalComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalComplex.coerce(other)
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero RationalComplex")
        return RationalComplex(
            (self.re * other.re + self.im * other.im) / den,
            (self.im * other.re - self.re * other.im) / den,
        )

    def __rtruediv__(self, other):
        return RationalComplex.coerce(other) / self

    def __neg__(self):
        return RationalComplex(-self.re, -self.im)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are exact")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "RationalComplex":
        return RationalComplex(self.re, -self.im)

    # -- predicates / comparisons -------------------------------------------

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            other = RationalComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return self.im == 0

    def abs2(self) -> Fraction:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    def log_abs(self) -> float:
        """log of the modulus, robust to values far beyond float range."""
        a2 = self.abs2()
        if a2 == 0:
            return -math.inf
        return 0.5 * (_log_int(a2.numerator) - _log_int(a2.denominator))

    def __abs__(self) -> float:
        return math.exp(self.log_abs())

    # -- conversions ---------------------------------------------------------

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def to_mpc(self) -> mpmath.mpc:
        return mpmath.mpc(
            mpmath.mpf(self.re.numerator) / self.re.denominator,
            mpmath.mpf(self.im.numerator) / self.im.denominator,
        )

    def __repr__(self):
        return f"RationalComplex({self.re!r}, {self.im!r})"

    def __str__(self):
        from .parsing import format_value  # local import: avoid cycle

        return format_value(self)


def _mpf_to_fraction(x) -> Fraction:
    if not isinstance(x, mpmath.mpf):
        x = mpmath.mpf(x)  # exact for int/float inputs
    sign, man, exp, _ = x._mpf_
    if man == 0:
        if exp != 0:  # inf / nan encode with zero mantissa, nonzero exponent
            raise ValueError(f"cannot convert non-finite value {x!r}")
        return Fraction(0)
    value = Fraction(man) * (Fraction(2) ** exp)
    return -value if sign else value


def _log_int(n: int) -> float:
    # math.log handles arbitrary-size ints natively
    return math.log(n)


ZERO = RationalComplex(0)
ONE = RationalComplex(1)
I = RationalComplex(0, 1)

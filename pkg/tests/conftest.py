"""Shared random generators for the test batteries.

All randomness flows through explicitly seeded ``random.Random`` instances,
so every battery is reproducible from the test source alone.
"""

import random
from fractions import Fraction

from goursat import Operator, RationalComplex, UniSeries


def rational(rng: random.Random, span: int = 6) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def gaussian_rational(rng: random.Random, span: int = 6,
                      imag_prob: float = 0.4) -> RationalComplex:
    re = rational(rng, span)
    im = rational(rng, span) if rng.random() < imag_prob else 0
    return RationalComplex(re, im)


def nonzero_gaussian_rational(rng: random.Random, span: int = 6) -> RationalComplex:
    while True:
        value = gaussian_rational(rng, span)
        if value:
            return value


def random_useries(rng: random.Random, trunc: int, span: int = 6) -> UniSeries:
    return UniSeries({n: gaussian_rational(rng, span) for n in range(trunc + 1)},
                     trunc)


def random_operator(rng: random.Random, terms: int = 5, max_order: int = 4) -> Operator:
    table = {}
    for _ in range(terms):
        table[(rng.randint(0, max_order), rng.randint(0, max_order))] = \
            nonzero_gaussian_rational(rng)
    return Operator(table)


def transport_factor(rng: random.Random, z_power: int | None = None,
                     span: int = 4) -> Operator:
    """Dt - c * Dz^k with a nonzero rational-complex speed."""
    k = z_power if z_power is not None else rng.randint(1, 3)
    speed = nonzero_gaussian_rational(rng, span)
    return Operator.monomial(1, 0) - speed * Operator.monomial(0, k)


def factored_operator(rng: random.Random, factors: int | None = None) -> Operator:
    count = factors if factors is not None else rng.randint(1, 3)
    op = None
    for _ in range(count):
        factor = transport_factor(rng)
        op = factor if op is None else op * factor
    return op

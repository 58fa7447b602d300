import math
import random
from fractions import Fraction

import mpmath
import pytest

from goursat import (
    BiSeries,
    GoursatData,
    Operator,
    RationalComplex,
    UniSeries,
    add,
    apply_operator,
    borel_transform,
    build_goursat_data,
    gevrey_estimate,
    gevrey_norm,
    moment_diff,
    multiply,
    parse_operator,
    scale,
)
from goursat.errors import (
    DegenerateFit,
    IncompatibleData,
    NegativeOrder,
    NonpositiveIndex,
    TruncationTooSmall,
)
from goursat.series import uni_derivative

from conftest import gaussian_rational, random_useries


def geometric_uniseries(trunc):
    return UniSeries({n: 1 for n in range(trunc + 1)}, trunc)


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------

def test_add_cancels():
    one_plus = BiSeries({(0, 0): 1, (1, 0): 1}, 2, 2)
    one_minus = BiSeries({(0, 0): 1, (1, 0): -1}, 2, 2)
    total = add(one_plus, one_minus)
    assert total.coeffs == {(0, 0): RationalComplex(2)}


def test_multiply_small():
    a = BiSeries({(0, 0): 1, (1, 0): 1}, 2, 2)
    b = BiSeries({(0, 0): 1, (0, 1): 1}, 2, 2)
    prod = multiply(a, b)
    assert prod.coeffs == {
        (0, 0): RationalComplex(1), (1, 0): RationalComplex(1),
        (0, 1): RationalComplex(1), (1, 1): RationalComplex(1),
    }


def test_multiply_evaluation_homomorphism():
    rng = random.Random(31)
    t = RationalComplex(Fraction(1, 3))
    z = RationalComplex(Fraction(1, 5))
    for _ in range(50):
        a = BiSeries({(rng.randint(0, 3), rng.randint(0, 3)):
                      gaussian_rational(rng) for _ in range(5)}, 8, 8)
        b = BiSeries({(rng.randint(0, 3), rng.randint(0, 3)):
                      gaussian_rational(rng) for _ in range(5)}, 8, 8)
        assert multiply(a, b).eval(t, z) == a.eval(t, z) * b.eval(t, z)


def test_truncation_metadata_propagates():
    a = BiSeries({(0, 0): 1}, 4, 6)
    b = BiSeries({(0, 0): 1}, 5, 3)
    assert (add(a, b).trunc_t, add(a, b).trunc_z) == (4, 3)
    assert (multiply(a, b).trunc_t, multiply(a, b).trunc_z) == (4, 3)


def test_scale_and_deriv_coeff():
    a = BiSeries({(2, 3): Fraction(1, 12)}, 3, 3)
    assert scale(a, 6).coeff(2, 3) == RationalComplex(Fraction(1, 2))
    assert a.deriv_coeff(2, 3) == RationalComplex(1)  # 1/12 * 2! * 3!


# ---------------------------------------------------------------------------
# operator application
# ---------------------------------------------------------------------------

def test_apply_dt_basic():
    u = BiSeries({(2, 1): 1}, 4, 4)
    out = apply_operator(Operator.monomial(1, 0), u)
    assert out.coeffs == {(1, 1): RationalComplex(2)}
    assert (out.trunc_t, out.trunc_z) == (3, 4)


def test_apply_heat_annihilates_solution_prefix():
    heat = parse_operator("Dt - Dz^2")
    coeffs = {(k, b): Fraction(math.factorial(2 * k + b),
                               math.factorial(k) * math.factorial(b))
              for k in range(5) for b in range(9)}
    u = BiSeries(coeffs, 4, 8)
    out = apply_operator(heat, u)
    assert all(not out.coeff(m, n) for m in range(4) for n in range(7))


def test_apply_zero_series():
    heat = parse_operator("Dt - Dz^2")
    out = apply_operator(heat, BiSeries.zero(3, 3))
    assert not out.coeffs


def test_apply_requires_truncation():
    heat = parse_operator("Dt - Dz^2")
    with pytest.raises(TruncationTooSmall):
        apply_operator(heat, BiSeries({(0, 0): 1}, 3, 1))


def test_apply_linearity():
    rng = random.Random(8)
    op = parse_operator("Dt^2 - 3*Dt*Dz + Dz^2 - 1")
    for _ in range(10):
        u = BiSeries({(rng.randint(0, 4), rng.randint(0, 4)):
                      gaussian_rational(rng) for _ in range(6)}, 5, 5)
        v = BiSeries({(rng.randint(0, 4), rng.randint(0, 4)):
                      gaussian_rational(rng) for _ in range(6)}, 5, 5)
        a, b = gaussian_rational(rng), gaussian_rational(rng)
        lhs = apply_operator(op, add(scale(u, a), scale(v, b)))
        rhs = add(scale(apply_operator(op, u), a), scale(apply_operator(op, v), b))
        assert lhs == rhs


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def test_borel_transform_identity_at_zero():
    rng = random.Random(3)
    for _ in range(20):
        u = random_useries(rng, 10)
        assert borel_transform(u, 0) == u


def test_borel_transform_heat_trace():
    trace = UniSeries({n: Fraction(math.factorial(2 * n), math.factorial(n))
                       for n in range(13)}, 12)
    b = borel_transform(trace, 1)
    assert b.exact
    assert all(b.coeff(n) == RationalComplex(1) for n in range(13))


def test_borel_transform_hand_value():
    u = UniSeries({0: 1, 1: 1}, 1)
    b = borel_transform(u, 1)
    assert b.coeff(1) == RationalComplex(Fraction(1, 2))  # Gamma(3) = 2


def test_borel_transform_negative_order():
    with pytest.raises(NegativeOrder):
        borel_transform(UniSeries({0: 1}, 1), -1)


def test_borel_transform_noninteger_flagged_inexact():
    u = UniSeries({0: 1, 1: 1, 2: 1}, 2)
    b = borel_transform(u, Fraction(1, 2))
    assert not b.exact
    with mpmath.workprec(300):
        expected = mpmath.mpf(2) / mpmath.gamma(4)  # n=2: 2!/Gamma(1+3)
        delta = abs(b.coeff(2).to_mpc() - expected)
    assert float(delta) < 1e-70


def test_moment_diff_is_derivative_at_one():
    rng = random.Random(4)
    for _ in range(20):
        u = random_useries(rng, 12)
        assert moment_diff(u, 1) == uni_derivative(u)


def test_moment_diff_hand_value():
    u = UniSeries({0: 1, 1: Fraction(1, 2)}, 1)
    out = moment_diff(u, 2)
    assert out.coeffs == {0: RationalComplex(1)}  # 1/2 * Gamma(3)/Gamma(1)


def test_moment_diff_constant_is_zero():
    out = moment_diff(UniSeries({0: 5}, 3), 2)
    assert not out.coeffs


def test_moment_diff_guards():
    with pytest.raises(NonpositiveIndex):
        moment_diff(UniSeries({0: 1}, 2), 0)
    with pytest.raises(NonpositiveIndex):
        moment_diff(UniSeries({0: 1}, 0), 1)


def test_commutation_identity():
    rng = random.Random(99)
    for _ in range(40):
        u = random_useries(rng, 15)
        for s in (0, 1, 2):
            lhs = borel_transform(uni_derivative(u), s)
            rhs = moment_diff(borel_transform(u, s), s + 1)
            assert lhs == rhs and lhs.exact


# ---------------------------------------------------------------------------
# norms and estimates
# ---------------------------------------------------------------------------

def test_gevrey_norm_constant_one():
    u = BiSeries({(0, 0): 1}, 3, 3)
    for s, w, radius in [(0, 1.0, 1.0), (1, 2.0, 0.5), (Fraction(1, 2), 0.3, 2.0)]:
        assert gevrey_norm(u, s, w, radius) == pytest.approx(1.0)


def test_gevrey_norm_hand_value():
    u = BiSeries({(1, 0): 1}, 2, 2)
    assert gevrey_norm(u, 0, 1.0, 1.0) == pytest.approx(1.0)


def test_gevrey_norm_monotone_in_radius():
    rng = random.Random(17)
    u = BiSeries({(rng.randint(0, 4), rng.randint(0, 4)): gaussian_rational(rng)
                  for _ in range(8)}, 4, 4)
    values = [gevrey_norm(u, 1, 0.7, radius) for radius in (0.5, 1.0, 2.0, 4.0)]
    assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))


def test_gevrey_estimate_heat():
    coeffs = {(k, b): Fraction(math.factorial(2 * k + b),
                               math.factorial(k) * math.factorial(b))
              for k in range(17) for b in range(61)}
    u = BiSeries(coeffs, 16, 60)
    est = gevrey_estimate(u, 0.5, range(4, 17))
    assert abs(est.s_hat - 1.0) <= 0.15
    assert est.stderr >= 0
    assert est.k_range == (4, 16)


def test_gevrey_estimate_convergent():
    u = BiSeries({(k, k): 1 for k in range(17)}, 16, 16)
    est = gevrey_estimate(u, 0.5, range(4, 17))
    assert abs(est.s_hat) <= 0.15


def test_gevrey_estimate_factorial_squared():
    u = BiSeries({(k, 0): Fraction(math.factorial(k)) ** 2 for k in range(17)},
                 16, 0)
    est = gevrey_estimate(u, 0.5, range(4, 17))
    assert abs(est.s_hat - 2.0) <= 0.2


def test_gevrey_estimate_degenerate():
    u = BiSeries.zero(10, 10)
    with pytest.raises(DegenerateFit):
        gevrey_estimate(u, 0.5, range(4, 11))
    with pytest.raises(DegenerateFit):
        gevrey_estimate(BiSeries({(k, 0): 1 for k in range(11)}, 10, 10),
                        0.5, [1, 2, 3])


# ---------------------------------------------------------------------------
# boundary data
# ---------------------------------------------------------------------------

def test_build_goursat_data_linear():
    phi = UniSeries({1: 1}, 5)   # z
    psi = UniSeries({1: 1}, 5)   # t
    data = GoursatData([phi], [psi])
    v = build_goursat_data(data, 5, 5)
    assert v.coeffs == {(0, 1): RationalComplex(1), (1, 0): RationalComplex(1)}


def test_build_goursat_data_incompatible():
    phi = UniSeries({0: 1}, 3)   # phi(0) = 1
    psi = UniSeries({1: 1}, 3)   # psi(0) = 0
    with pytest.raises(IncompatibleData) as err:
        GoursatData([phi], [psi])
    assert err.value.index == (0, 0)


def test_build_goursat_data_single_sum():
    psi = geometric_uniseries(6)
    data = GoursatData([], [psi])
    v = build_goursat_data(data, 6, 3)
    assert all(v.coeff(k, 0) == RationalComplex(1) for k in range(7))
    assert all(not v.coeff(k, b) for k in range(7) for b in range(1, 4))


def test_build_goursat_data_reproduces_traces():
    rng = random.Random(23)
    for _ in range(10):
        shared = gaussian_rational(rng)
        phi0 = UniSeries({0: shared, **{n: gaussian_rational(rng)
                                        for n in range(1, 7)}}, 6)
        psi0 = UniSeries({0: shared, **{n: gaussian_rational(rng)
                                        for n in range(1, 7)}}, 6)
        data = GoursatData([phi0], [psi0])
        v = build_goursat_data(data, 6, 6)
        assert all(v.trace_z(0).coeff(n) == phi0.coeff(n) for n in range(7))
        assert all(v.trace_t(0).coeff(n) == psi0.coeff(n) for n in range(7))

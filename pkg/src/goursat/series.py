"""Truncated formal power series with exact coefficients.

Series store *monomial* coefficients, so multiplication and operator
application stay in pure rational arithmetic; derivative-normalized values
(coefficient times factorials) are computed on access.  Transforms whose
gamma factors are non-integer are evaluated in high-precision floating point
and the result is flagged ``exact=False``; such series are excluded from
exact-equality reasoning but keep exact dyadic coefficients, so downstream
arithmetic stays deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .errors import (
    DegenerateFit,
    IncompatibleData,
    NegativeOrder,
    NonpositiveIndex,
    TruncationTooSmall,
)
from .operators import Operator
from .rational import RationalComplex


def _coerce_coeffs(items):
    out = {}
    for key, value in items:
        value = RationalComplex.coerce(value)
        if value:
            out[key] = value
    return out


class UniSeries:
    """Univariate truncated series sum_{n<=trunc} c_n x^n."""

    __slots__ = ("coeffs", "trunc", "exact")

    def __init__(self, coeffs, trunc, exact=True):
        coeffs = _coerce_coeffs(dict(coeffs).items())
        for n in coeffs:
            if n < 0 or n > trunc:
                raise ValueError(f"index {n} outside truncation {trunc}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "trunc", int(trunc))
        object.__setattr__(self, "exact", bool(exact))

    def __setattr__(self, name, value):
        raise AttributeError("UniSeries is immutable")

    @classmethod
    def from_list(cls, values, exact=True):
        return cls(dict(enumerate(map(RationalComplex.coerce, values))),
                   len(values) - 1, exact=exact)

    def coeff(self, n: int) -> RationalComplex:
        return self.coeffs.get(n, RationalComplex(0))

    def deriv_coeff(self, n: int) -> RationalComplex:
        """n-th derivative at 0, i.e. c_n * n!."""
        return self.coeff(n) * math.factorial(n)

    def __add__(self, other: "UniSeries") -> "UniSeries":
        trunc = min(self.trunc, other.trunc)
        out = {n: c for n, c in self.coeffs.items() if n <= trunc}
        for n, c in other.coeffs.items():
            if n <= trunc:
                acc = out.get(n, RationalComplex(0)) + c
                if acc:
                    out[n] = acc
                else:
                    out.pop(n, None)
        return UniSeries(out, trunc, exact=self.exact and other.exact)

    def __sub__(self, other: "UniSeries") -> "UniSeries":
        return self + other.scale(RationalComplex(-1))

    def scale(self, factor) -> "UniSeries":
        factor = RationalComplex.coerce(factor)
        return UniSeries({n: c * factor for n, c in self.coeffs.items()},
                         self.trunc, exact=self.exact)

    def __eq__(self, other):
        return (isinstance(other, UniSeries) and self.trunc == other.trunc
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.trunc, frozenset(self.coeffs.items())))

    def eval(self, x):
        """Exact Horner evaluation at a RationalComplex point."""
        x = RationalComplex.coerce(x)
        total = RationalComplex(0)
        for n in range(self.trunc, -1, -1):
            total = total * x + self.coeff(n)
        return total

    def to_mpc_list(self):
        return [self.coeff(n).to_mpc() for n in range(self.trunc + 1)]

    def __repr__(self):
        return f"UniSeries({self.coeffs!r}, trunc={self.trunc})"


class BiSeries:
    """Bivariate truncated series sum c_{k,beta} t^k z^beta."""

    __slots__ = ("coeffs", "trunc_t", "trunc_z", "exact")

    def __init__(self, coeffs, trunc_t, trunc_z, exact=True):
        coeffs = _coerce_coeffs(dict(coeffs).items())
        for (k, beta) in coeffs:
            if not (0 <= k <= trunc_t and 0 <= beta <= trunc_z):
                raise ValueError(
                    f"index ({k},{beta}) outside truncation ({trunc_t},{trunc_z})")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "trunc_t", int(trunc_t))
        object.__setattr__(self, "trunc_z", int(trunc_z))
        object.__setattr__(self, "exact", bool(exact))

    def __setattr__(self, name, value):
        raise AttributeError("BiSeries is immutable")

    @classmethod
    def zero(cls, trunc_t, trunc_z):
        return cls({}, trunc_t, trunc_z)

    def coeff(self, k: int, beta: int) -> RationalComplex:
        return self.coeffs.get((k, beta), RationalComplex(0))

    def deriv_coeff(self, k: int, beta: int) -> RationalComplex:
        """Mixed derivative at the origin: c_{k,beta} * k! * beta!."""
        return self.coeff(k, beta) * (math.factorial(k) * math.factorial(beta))

    def __eq__(self, other):
        return (isinstance(other, BiSeries)
                and self.trunc_t == other.trunc_t
                and self.trunc_z == other.trunc_z
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.trunc_t, self.trunc_z, frozenset(self.coeffs.items())))

    def eval(self, t, z):
        t = RationalComplex.coerce(t)
        z = RationalComplex.coerce(z)
        total = RationalComplex(0)
        for (k, beta), c in self.coeffs.items():
            total = total + c * t**k * z**beta
        return total

    def trace_t(self, beta: int = 0) -> UniSeries:
        """Section z^beta: the series sum_k c_{k,beta} t^k."""
        return UniSeries({k: c for (k, b), c in self.coeffs.items() if b == beta},
                         self.trunc_t, exact=self.exact)

    def trace_z(self, k: int = 0) -> UniSeries:
        """Section t^k: the series sum_beta c_{k,beta} z^beta."""
        return UniSeries({b: c for (kk, b), c in self.coeffs.items() if kk == k},
                         self.trunc_z, exact=self.exact)

    def restrict(self, trunc_t: int, trunc_z: int) -> "BiSeries":
        out = {key: c for key, c in self.coeffs.items()
               if key[0] <= trunc_t and key[1] <= trunc_z}
        return BiSeries(out, trunc_t, trunc_z, exact=self.exact)

    def __repr__(self):
        return (f"BiSeries(<{len(self.coeffs)} terms>, "
                f"trunc=({self.trunc_t},{self.trunc_z}))")


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------

def add(a: BiSeries, b: BiSeries) -> BiSeries:
    trunc_t = min(a.trunc_t, b.trunc_t)
    trunc_z = min(a.trunc_z, b.trunc_z)
    out = {key: c for key, c in a.coeffs.items()
           if key[0] <= trunc_t and key[1] <= trunc_z}
    for key, c in b.coeffs.items():
        if key[0] <= trunc_t and key[1] <= trunc_z:
            acc = out.get(key, RationalComplex(0)) + c
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
    return BiSeries(out, trunc_t, trunc_z, exact=a.exact and b.exact)


def scale(a: BiSeries, factor) -> BiSeries:
    factor = RationalComplex.coerce(factor)
    return BiSeries({key: c * factor for key, c in a.coeffs.items()},
                    a.trunc_t, a.trunc_z, exact=a.exact)


def subtract(a: BiSeries, b: BiSeries) -> BiSeries:
    return add(a, scale(b, -1))


def multiply(a: BiSeries, b: BiSeries) -> BiSeries:
    trunc_t = min(a.trunc_t, b.trunc_t)
    trunc_z = min(a.trunc_z, b.trunc_z)
    out = {}
    for (k1, b1), c1 in a.coeffs.items():
        for (k2, b2), c2 in b.coeffs.items():
            key = (k1 + k2, b1 + b2)
            if key[0] > trunc_t or key[1] > trunc_z:
                continue
            acc = out.get(key)
            acc = c1 * c2 if acc is None else acc + c1 * c2
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
    return BiSeries(out, trunc_t, trunc_z, exact=a.exact and b.exact)


def apply_operator(op: Operator, u: BiSeries) -> BiSeries:
    """Apply a constant-coefficient operator term by term.

    The monomial coefficient of the result at ``(m, n)`` is::

        sum_{(i,g)} a_{ig} * c_{m+i, n+g} * (m+i)!/m! * (n+g)!/n!

    and the truncation shrinks by the operator orders.
    """
    if u.trunc_t < op.t_order or u.trunc_z < op.z_order:
        raise TruncationTooSmall(
            f"series truncation ({u.trunc_t},{u.trunc_z}) below operator orders "
            f"({op.t_order},{op.z_order})")
    trunc_t = u.trunc_t - op.t_order
    trunc_z = u.trunc_z - op.z_order
    out = {}
    for (k, beta), c in u.coeffs.items():
        for (i, gamma), a in op.terms.items():
            m = k - i
            n = beta - gamma
            if m < 0 or n < 0 or m > trunc_t or n > trunc_z:
                continue
            factor = (math.factorial(k) // math.factorial(m)) * \
                     (math.factorial(beta) // math.factorial(n))
            acc = out.get((m, n))
            term = a * (c * factor)
            acc = term if acc is None else acc + term
            if acc:
                out[(m, n)] = acc
            else:
                out.pop((m, n), None)
    return BiSeries(out, trunc_t, trunc_z, exact=u.exact)


# ---------------------------------------------------------------------------
# gamma helpers
# ---------------------------------------------------------------------------

def _gamma_ratio_exact(top: Fraction, bottom: Fraction):
    """Gamma(1+top)/Gamma(1+bottom) when top-bottom is a nonnegative integer.

    The ratio telescopes to the rational product (bottom+1)...(bottom+shift)
    for any rational bottom; returns None when the shift is not integral.
    """
    shift = top - bottom
    if shift.denominator != 1 or shift < 0:
        return None
    result = Fraction(1)
    for i in range(1, int(shift) + 1):
        result *= bottom + i
    return result


def _gamma_mpf(x: Fraction, precision: int):
    with mpmath.workprec(precision):
        return mpmath.gamma(mpmath.mpf(x.numerator) / x.denominator + 1)


def borel_transform(u: UniSeries, s, precision: int = 256) -> UniSeries:
    """Rescale the n-th coefficient by n! / Gamma(1 + (s+1) n).

    For integer ``s`` the gamma value is a factorial and the result is exact;
    otherwise the rescaling factors are computed at ``precision`` bits and the
    output is flagged inexact.
    """
    s = Fraction(s)
    if s < 0:
        raise NegativeOrder(f"transform order must be >= 0, got {s}")
    q = s + 1
    out = {}
    if q.denominator == 1:
        qi = int(q)
        for n, c in u.coeffs.items():
            factor = Fraction(math.factorial(n), math.factorial(qi * n))
            out[n] = c * factor
        return UniSeries(out, u.trunc, exact=u.exact)
    with mpmath.workprec(precision):
        for n, c in u.coeffs.items():
            gamma = _gamma_mpf(q * n, precision)
            factor = RationalComplex.from_mpc(mpmath.mpf(math.factorial(n)) / gamma)
            out[n] = c * factor
    return UniSeries(out, u.trunc, exact=False)


def moment_diff(u: UniSeries, q, precision: int = 256) -> UniSeries:
    """Shift operator on the basis x^n / Gamma(1+qn).

    Coefficientwise: ``c'_n = c_{n+1} * Gamma(1+q(n+1)) / Gamma(1+qn)``.
    Coincides with the ordinary derivative at q = 1.
    """
    q = Fraction(q)
    if q <= 0:
        raise NonpositiveIndex(f"moment index must be positive, got {q}")
    if u.trunc < 1:
        raise NonpositiveIndex("series truncation must be at least 1")
    out = {}
    exact = u.exact
    if q.denominator == 1:
        for n in range(u.trunc):
            c = u.coeffs.get(n + 1)
            if c is None:
                continue
            ratio = _gamma_ratio_exact(q * (n + 1), q * n)
            out[n] = c * ratio
    else:
        exact = False
        with mpmath.workprec(precision):
            for n in range(u.trunc):
                c = u.coeffs.get(n + 1)
                if c is None:
                    continue
                ratio = _gamma_mpf(q * (n + 1), precision) / _gamma_mpf(q * n, precision)
                out[n] = c * RationalComplex.from_mpc(ratio)
    return UniSeries(out, u.trunc - 1, exact=exact)


def t_derivative(u: BiSeries) -> BiSeries:
    return apply_operator(Operator.monomial(1, 0), u)


def uni_derivative(u: UniSeries) -> UniSeries:
    if u.trunc < 1:
        return UniSeries({}, 0, exact=u.exact)
    return UniSeries({n - 1: c * n for n, c in u.coeffs.items() if n >= 1},
                     u.trunc - 1, exact=u.exact)


# ---------------------------------------------------------------------------
# Gevrey machinery
# ---------------------------------------------------------------------------

def gevrey_norm(u: BiSeries, s, w: float, radius: float,
                precision: int = 256) -> float:
    """Weighted norm sum |u_{k,b}| w^k R^(sk+b) / Gamma(1+sk+b).

    ``u_{k,b}`` is the derivative-normalized coefficient; the factorial at a
    possibly non-integer argument is read as Gamma(1+sk+b).  Only the stored
    truncation window contributes, so the value is a monotone partial sum.
    """
    s = Fraction(s)
    with mpmath.workprec(precision):
        wv = mpmath.mpf(w)
        rv = mpmath.mpf(radius)
        total = mpmath.mpf(0)
        for (k, beta), c in u.coeffs.items():
            coeff = c * (math.factorial(k) * math.factorial(beta))
            mag = mpmath.sqrt(
                mpmath.mpf(coeff.abs2().numerator) / coeff.abs2().denominator)
            exponent = s * k + beta
            ev = mpmath.mpf(exponent.numerator) / exponent.denominator
            total += mag * wv**k * rv**ev / mpmath.gamma(1 + ev)
        try:
            return float(total)
        except (OverflowError, ValueError):
            return math.inf


@dataclass(frozen=True)
class GevreyEstimate:
    """Least-squares estimate of the coefficient-growth order of a series."""

    s_hat: float
    stderr: float
    k_range: tuple
    model: tuple  # fitted coefficients of (1, k, log k!)


def _log_sum_terms(log_terms):
    """log(sum(exp(x) for x in log_terms)) without overflow."""
    finite = [x for x in log_terms if x != -math.inf]
    if not finite:
        return -math.inf
    top = max(finite)
    return top + math.log(sum(math.exp(x - top) for x in finite))


def gevrey_estimate(u: BiSeries, z_radius: float, k_window) -> GevreyEstimate:
    """Estimate the Gevrey order of a series in its first variable.

    For each t-degree ``k`` in the window the l1 proxy
    ``a_k = sum_beta |c_{k,beta}| rho^beta`` upper-bounds the coefficient
    sup-norm on |z| = rho; ``log a_k`` is regressed on {1, k, log k!} and the
    ``log k!`` coefficient is the order estimate.
    """
    ks = sorted(set(int(k) for k in k_window))
    if any(k < 0 or k > u.trunc_t for k in ks):
        raise ValueError("window outside the series truncation")
    if len(ks) < 4:
        raise DegenerateFit("window must contain at least 4 indices")
    log_rho = math.log(z_radius)
    rows = []
    for k in ks:
        log_terms = []
        for (kk, beta), c in u.coeffs.items():
            if kk == k:
                log_terms.append(c.log_abs() + beta * log_rho)
        log_a = _log_sum_terms(log_terms)
        if log_a != -math.inf:
            rows.append((k, log_a))
    if len(rows) < 4:
        raise DegenerateFit("fewer than 4 nonzero rows in the window")
    design = np.array([[1.0, k, math.lgamma(k + 1)] for k, _ in rows])
    rhs = np.array([log_a for _, log_a in rows])
    coeffs, _, rank, _ = np.linalg.lstsq(design, rhs, rcond=None)
    if rank < 3:
        raise DegenerateFit("regression design is rank deficient")
    fitted = design @ coeffs
    dof = len(rows) - 3
    sigma2 = float(np.sum((rhs - fitted) ** 2) / dof) if dof > 0 else 0.0
    covariance = sigma2 * np.linalg.inv(design.T @ design)
    stderr = math.sqrt(max(covariance[2, 2], 0.0))
    return GevreyEstimate(
        s_hat=float(coeffs[2]),
        stderr=stderr,
        k_range=(ks[0], ks[-1]),
        model=tuple(float(c) for c in coeffs),
    )


# ---------------------------------------------------------------------------
# boundary data
# ---------------------------------------------------------------------------

class GoursatData:
    """Initial traces phi_k (in z) and boundary traces psi_beta (in t).

    The corner derivatives must agree: ``phi_k^(beta)(0) == psi_beta^(k)(0)``
    for all k < j, beta < alpha.  Violations raise :class:`IncompatibleData`
    naming the offending index pair.
    """

    __slots__ = ("phis", "psis", "j", "alpha", "corner")

    def __init__(self, phis, psis):
        phis = tuple(phis)
        psis = tuple(psis)
        corner = {}
        for k, phi in enumerate(phis):
            for beta, psi in enumerate(psis):
                lhs = phi.deriv_coeff(beta)
                rhs = psi.deriv_coeff(k)
                if lhs != rhs:
                    raise IncompatibleData(k, beta, lhs, rhs)
                corner[(k, beta)] = lhs
        object.__setattr__(self, "phis", phis)
        object.__setattr__(self, "psis", psis)
        object.__setattr__(self, "j", len(phis))
        object.__setattr__(self, "alpha", len(psis))
        object.__setattr__(self, "corner", corner)

    def __setattr__(self, name, value):
        raise AttributeError("GoursatData is immutable")


def build_goursat_data(data: GoursatData, trunc_t: int, trunc_z: int) -> BiSeries:
    """Assemble the canonical series carrying the boundary data.

    v = sum_{k<j} phi_k(z) t^k/k! + sum_{b<alpha} psi_b(t) z^b/b!
        - sum_{k<j,b<alpha} c_{k,b} t^k z^b/(k! b!)

    so that the t-traces of order k < j reproduce phi_k and the z-traces of
    order beta < alpha reproduce psi_beta, within the truncation.
    """
    out = {}

    def bump(key, value):
        if key[0] > trunc_t or key[1] > trunc_z:
            return
        acc = out.get(key)
        acc = value if acc is None else acc + value
        if acc:
            out[key] = acc
        else:
            out.pop(key, None)

    for k, phi in enumerate(data.phis):
        inv = Fraction(1, math.factorial(k))
        for beta, c in phi.coeffs.items():
            bump((k, beta), c * inv)
    for beta, psi in enumerate(data.psis):
        inv = Fraction(1, math.factorial(beta))
        for k, c in psi.coeffs.items():
            bump((k, beta), c * inv)
    for (k, beta), c in data.corner.items():
        inv = Fraction(1, math.factorial(k) * math.factorial(beta))
        bump((k, beta), c * inv * Fraction(-1))
    return BiSeries(out, trunc_t, trunc_z)

"""Seeded randomized property battery behind the ``verify`` subcommand.

Every check draws its instances from an explicit seed and reports only
deterministic quantities, so identical invocations produce byte-identical
JSON.  The batteries are reduced-size versions of the full test-suite
properties; failures carry enough context to reproduce.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .charroots import root_groups, slopes_consistency
from .errors import ZeroOnContour
from .newton import LaurentPoly, build_polygon, positive_slopes
from .operators import Operator
from .parsing import format_operator, parse_operator
from .rational import RationalComplex
from .series import UniSeries, borel_transform, moment_diff, uni_derivative
from .solvability import (
    VerdictKind,
    admissible_radii,
    classify,
    spectral_condition,
    winding_number,
)
from .solver import GoursatProblem, solve_truncated, two_characteristic_oracle
from .series import BiSeries, GoursatData

SCHEMA_VERSION = 1


def _random_rational(rng: random.Random, span: int = 6) -> Fraction:
    num = rng.randint(-span, span)
    den = rng.randint(1, span)
    return Fraction(num, den)


def _random_rc(rng: random.Random, span: int = 6,
               allow_imag: bool = True) -> RationalComplex:
    re = _random_rational(rng, span)
    im = _random_rational(rng, span) if allow_imag and rng.random() < 0.4 else 0
    return RationalComplex(re, im)


def _random_nonzero_rc(rng: random.Random, span: int = 6) -> RationalComplex:
    while True:
        value = _random_rc(rng, span)
        if value:
            return value


def _random_useries(rng: random.Random, trunc: int) -> UniSeries:
    return UniSeries({n: _random_rc(rng) for n in range(trunc + 1)}, trunc)


def check_commutation(rng: random.Random, instances: int, length: int = 20):
    """Order-s transform of the derivative == moment shift of the transform."""
    failures = 0
    for _ in range(instances):
        s = rng.choice([0, 1, 2])
        u = _random_useries(rng, length)
        lhs = borel_transform(uni_derivative(u), s)
        rhs = moment_diff(borel_transform(u, s), s + 1)
        if lhs != rhs:
            failures += 1
    return failures


def check_winding_dual(rng: random.Random, instances: int):
    """Exact root-count winding == numeric argument-increment winding."""
    failures = 0
    done = 0
    while done < instances:
        exps = range(-rng.randint(0, 3), rng.randint(1, 3) + 1)
        coeffs = {e: _random_rc(rng) for e in exps}
        poly = LaurentPoly(coeffs)
        if not poly:
            continue
        w = math.exp(rng.uniform(-1.5, 1.5))
        try:
            winding_number(poly, w)
        except ZeroOnContour:
            continue
        except Exception:
            failures += 1
        done += 1
    return failures


def _random_factored_operator(rng: random.Random, factors: int | None = None):
    """Product of transport-type factors with rational nonzero leaders."""
    count = factors if factors is not None else rng.randint(1, 3)
    op = None
    for _ in range(count):
        z_power = rng.randint(1, 3)
        leader = _random_nonzero_rc(rng, span=4)
        factor = Operator.monomial(1, 0) - leader * Operator.monomial(0, z_power)
        op = factor if op is None else op * factor
    return op


def check_slopes_consistency(rng: random.Random, instances: int):
    failures = 0
    for _ in range(instances):
        op = _random_factored_operator(rng)
        if not slopes_consistency(op).all_ok:
            failures += 1
    return failures


def check_spectral_implies_admissible(rng: random.Random, instances: int):
    """Every spectral witness weight lies in the admissible-radius set."""
    failures = 0
    done = 0
    while done < instances:
        # random terms on one supporting line of integer index s
        s = rng.choice([0, 1, 2])
        count = rng.randint(2, 4)
        j_values = sorted(rng.sample(range(0, 6), count), reverse=True)
        j_top = j_values[0]
        terms = {}
        for j in j_values:
            alpha = (j_top - j) * (s + 1)
            terms[(j, alpha)] = _random_nonzero_rc(rng, span=5)
        op = Operator(terms)
        corner = rng.choice(list(terms))
        witness = spectral_condition(op, s, corner[0], corner[1])
        done += 1
        if witness is None:
            continue
        intervals = admissible_radii(op, s, corner[0], corner[1])
        if not any(lo < witness < hi for lo, hi in intervals):
            failures += 1
    return failures


def check_classify_matches_admissible(rng: random.Random, instances: int,
                                      gap: float = 1e-2):
    """Gap-interval classification agrees with the winding computation."""
    failures = 0
    done = 0
    while done < instances:
        count = rng.randint(2, 4)
        leaders = []
        for _ in range(count):
            while True:
                value = _random_nonzero_rc(rng, span=4)
                if all(abs(math.sqrt(float(value.abs2()))
                           - math.sqrt(float(v.abs2()))) > gap for v in leaders):
                    leaders.append(value)
                    break
        op = None
        for value in leaders:
            factor = Operator.monomial(1, 0) - value * Operator.monomial(0, 2)
            op = factor if op is None else op * factor
        j = rng.randint(0, count)
        alpha = 2 * (count - j)
        verdict = classify(op, 1, j, alpha, n_max=4)
        done += 1
        if verdict.kind is not VerdictKind.FREDHOLM_WITH_GAP:
            failures += 1
            continue
        intervals = admissible_radii(op, 1, j, alpha)
        lo, hi = verdict.w_interval
        matched = any(abs(lo - ilo) <= 1e-10 * max(1.0, ilo)
                      and (math.isinf(hi) and math.isinf(ihi)
                           or abs(hi - ihi) <= 1e-10 * max(1.0, hi))
                      for ilo, ihi in intervals)
        if not matched:
            failures += 1
    return failures


def check_parse_roundtrip(rng: random.Random, instances: int):
    failures = 0
    for _ in range(instances):
        terms = {}
        for _ in range(rng.randint(1, 6)):
            terms[(rng.randint(0, 4), rng.randint(0, 4))] = _random_nonzero_rc(rng)
        op = Operator(terms)
        if parse_operator(format_operator(op)) != op:
            failures += 1
    return failures


def check_solver_oracle(rng: random.Random, instances: int, window: int = 3):
    """Exact agreement of the linear solver with the two-speed closed form."""
    failures = 0
    done = 0
    while done < instances:
        lam1 = _random_nonzero_rc(rng, span=3)
        lam2 = _random_nonzero_rc(rng, span=3)
        if lam1.abs2() == lam2.abs2():
            continue
        degree = 4 * window
        shared = _random_rc(rng)
        phi = UniSeries({0: shared, **{n: _random_rc(rng)
                                       for n in range(1, degree + 1)}}, degree)
        psi = UniSeries({0: shared, **{n: _random_rc(rng)
                                       for n in range(1, degree + 1)}}, degree)
        oracle = two_characteristic_oracle(lam1, lam2, phi, psi, 2 * window)
        op = ((Operator.monomial(1, 0) - lam1 * Operator.monomial(0, 1))
              * (Operator.monomial(1, 0) - lam2 * Operator.monomial(0, 1)))
        trunc = 2 * window + 2
        data = GoursatData([phi], [psi])
        problem = GoursatProblem(op=op, f=BiSeries.zero(trunc, trunc), data=data)
        try:
            solved, _ = solve_truncated(problem, trunc, trunc, window, window)
        except Exception:
            failures += 1
            done += 1
            continue
        expected = oracle.restrict(window, window)
        if solved != expected:
            failures += 1
        done += 1
    return failures


def check_polygon_roots(rng: random.Random, instances: int):
    """Positive polygon slopes match pole orders minus one, with counts."""
    failures = 0
    for _ in range(instances):
        terms = {}
        for _ in range(rng.randint(2, 7)):
            terms[(rng.randint(0, 4), rng.randint(0, 4))] = _random_nonzero_rc(rng)
        op = Operator(terms)
        if op.t_order < 1:
            continue
        slopes = set(positive_slopes(build_polygon(op)))
        orders = {g.pole_order - 1 for g in root_groups(op) if g.pole_order > 1}
        if slopes != orders:
            failures += 1
    return failures


BATTERY = (
    ("commutation", check_commutation, 50),
    ("windingDual", check_winding_dual, 100),
    ("slopesConsistency", check_slopes_consistency, 50),
    ("spectralImpliesAdmissible", check_spectral_implies_admissible, 50),
    ("classifyMatchesAdmissible", check_classify_matches_admissible, 25),
    ("parseRoundtrip", check_parse_roundtrip, 50),
    ("solverOracle", check_solver_oracle, 8),
    ("polygonRoots", check_polygon_roots, 50),
)


def run_verification(seed: int) -> dict:
    checks = []
    ok = True
    for name, func, instances in BATTERY:
        rng = random.Random(f"{seed}:{name}")
        failures = func(rng, instances)
        checks.append({
            "name": name,
            "instances": instances,
            "failures": failures,
            "ok": failures == 0,
        })
        ok = ok and failures == 0
    return {
        "schemaVersion": SCHEMA_VERSION,
        "seed": seed,
        "checks": checks,
        "ok": ok,
    }

"""Truncated series solver for boundary problems P(Dt,Dz)u = f.

The corner condition fixes every coefficient with t-degree below j or
z-degree below alpha from the boundary-data series; the remaining
coefficients are unknowns of an exact linear system read off the equation
coefficientwise.  Constraint propagation knocks out the (typically
triangular) bulk, a reduced-row-echelon pass handles any coupled core, and
window coefficients are only reported when they are pivot-determined with no
dependence on free unknowns.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    EqualModuli,
    IncompatibleData,
    InconsistentSystem,
    NoContact,
    NotNormalForm,
    ResonantTau,
    TruncationTooSmall,
    WindowNotDetermined,
)
from .newton import build_polygon
from .operators import Operator
from .rational import RationalComplex
from .series import BiSeries, GoursatData, UniSeries, build_goursat_data


@dataclass(frozen=True)
class GoursatProblem:
    op: Operator
    f: BiSeries
    data: GoursatData

    @property
    def j(self) -> int:
        return self.data.j

    @property
    def alpha(self) -> int:
        return self.data.alpha


@dataclass
class SolveReport:
    window_t: int
    window_z: int
    trunc_t: int
    trunc_z: int
    uniquely_determined: bool
    free_unknown_count: int
    residual_exact_zero: bool
    stabilization: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json_dict(self):
        return {
            "windowT": self.window_t,
            "windowZ": self.window_z,
            "truncT": self.trunc_t,
            "truncZ": self.trunc_z,
            "uniquelyDetermined": self.uniquely_determined,
            "freeUnknownCount": self.free_unknown_count,
            "residualExactZero": self.residual_exact_zero,
            "stabilization": self.stabilization,
            "notes": list(self.notes),
        }


def _coeff_abs_inf(c: RationalComplex) -> Fraction:
    return max(abs(c.re), abs(c.im))


def residual(op: Operator, u: BiSeries, f: BiSeries, window) -> Fraction:
    """Largest component magnitude of (P u - f) over the window, exactly."""
    window_t, window_z = window
    if u.trunc_t - op.t_order < window_t or u.trunc_z - op.z_order < window_z:
        raise TruncationTooSmall("window exceeds the computable residual range")
    from .series import apply_operator, subtract

    diff = subtract(apply_operator(op, u), f)
    worst = Fraction(0)
    for (m, n), c in diff.coeffs.items():
        if m <= window_t and n <= window_z:
            worst = max(worst, _coeff_abs_inf(c))
    return worst


# ---------------------------------------------------------------------------
# the exact linear solve
# ---------------------------------------------------------------------------

def solve_truncated(problem: GoursatProblem, trunc_t: int, trunc_z: int,
                    window_t: int, window_z: int):
    """Solve the truncated problem; returns (window series, report).

    Raises :class:`WindowNotDetermined` when some window coefficient depends
    on free unknowns at this truncation (enlarge the truncation), and
    :class:`InconsistentSystem` when the equations admit no solution.
    """
    op = problem.op
    j, alpha = problem.j, problem.alpha
    if trunc_t < window_t + op.t_order or trunc_z < window_z + op.z_order:
        raise TruncationTooSmall(
            "truncation must exceed the window by the operator orders")
    eq_t = trunc_t - op.t_order
    eq_z = trunc_z - op.z_order
    if problem.f.trunc_t < eq_t or problem.f.trunc_z < eq_z:
        raise TruncationTooSmall(
            "inhomogeneity truncation below the equation window")

    v = build_goursat_data(problem.data, trunc_t, trunc_z)
    fixed = {}
    columns = {}
    for k in range(trunc_t + 1):
        for beta in range(trunc_z + 1):
            if k >= j and beta >= alpha:
                columns[(k, beta)] = None  # unknown
            else:
                fixed[(k, beta)] = v.coeff(k, beta)

    rows = []
    rhs = []
    for m in range(eq_t + 1):
        fact_m = math.factorial(m)
        for n in range(eq_z + 1):
            fact_n = math.factorial(n)
            row = {}
            value = problem.f.coeff(m, n)
            for (i, gamma), a in op.terms.items():
                k, beta = m + i, n + gamma
                weight = a * ((math.factorial(k) // fact_m)
                              * (math.factorial(beta) // fact_n))
                if (k, beta) in columns:
                    acc = row.get((k, beta))
                    acc = weight if acc is None else acc + weight
                    if acc:
                        row[(k, beta)] = acc
                    else:
                        row.pop((k, beta), None)
                else:
                    value = value - weight * fixed[(k, beta)]
            rows.append(row)
            rhs.append(value)

    assigned, free_cols, dependent = _eliminate(rows, rhs, columns)

    window_unknowns = [key for key in columns
                       if key[0] <= window_t and key[1] <= window_z]
    undetermined = [key for key in window_unknowns if key not in assigned]
    if undetermined:
        raise WindowNotDetermined(undetermined)

    full = dict(fixed)
    full.update(assigned)
    for key in free_cols:
        full[key] = RationalComplex(0)
    full.update(dependent)
    solution = BiSeries({key: c for key, c in full.items() if c},
                        trunc_t, trunc_z)

    res = residual(op, solution, problem.f, (eq_t, eq_z))
    report = SolveReport(
        window_t=window_t, window_z=window_z,
        trunc_t=trunc_t, trunc_z=trunc_z,
        uniquely_determined=True,
        free_unknown_count=len(free_cols),
        residual_exact_zero=res == 0,
        notes=_gate_warnings(op, j, alpha),
    )
    window_series = solution.restrict(window_t, window_z)
    return window_series, report


def _eliminate(rows, rhs, columns):
    """Exact elimination: propagation of singleton rows, then RREF.

    Returns (assigned, free columns, dependent-particular-values) where
    ``assigned`` holds coefficients provably independent of free unknowns and
    ``dependent`` holds the particular values (free unknowns set to zero) of
    pivot coefficients that do depend on them.
    """
    col_rows = {}
    for idx, row in enumerate(rows):
        for col in row:
            col_rows.setdefault(col, set()).add(idx)

    assigned = {}
    queue = deque(idx for idx, row in enumerate(rows) if len(row) == 1)
    retired = set()
    while queue:
        idx = queue.popleft()
        if idx in retired or len(rows[idx]) != 1:
            continue
        ((col, coeff),) = rows[idx].items()
        value = rhs[idx] / coeff
        assigned[col] = value
        retired.add(idx)
        for other in list(col_rows.get(col, ())):
            row = rows[other]
            if col not in row:
                continue
            weight = row.pop(col)
            rhs[other] = rhs[other] - weight * value
            col_rows[col].discard(other)
            if other in retired:
                continue
            if len(row) == 1:
                queue.append(other)
            elif len(row) == 0:
                if rhs[other]:
                    raise InconsistentSystem(
                        "boundary data and inhomogeneity are inconsistent "
                        "at this truncation")
                retired.add(other)

    core = [idx for idx, row in enumerate(rows)
            if idx not in retired and len(row) >= 1]
    remaining_cols = sorted({col for idx in core for col in rows[idx]})
    pivot_of = {}
    core_rows = [dict(rows[idx]) for idx in core]
    core_rhs = [rhs[idx] for idx in core]
    for col in remaining_cols:
        pivot_idx = None
        for ridx, row in enumerate(core_rows):
            if ridx in pivot_of.values():
                continue
            if col in row:
                pivot_idx = ridx
                break
        if pivot_idx is None:
            continue
        pivot = core_rows[pivot_idx][col]
        core_rows[pivot_idx] = {c: w / pivot for c, w in core_rows[pivot_idx].items()}
        core_rhs[pivot_idx] = core_rhs[pivot_idx] / pivot
        for ridx, row in enumerate(core_rows):
            if ridx == pivot_idx or col not in row:
                continue
            factor = row.pop(col)
            for c, w in core_rows[pivot_idx].items():
                if c == col:
                    continue
                acc = row.get(c, RationalComplex(0)) - factor * w
                if acc:
                    row[c] = acc
                else:
                    row.pop(c, None)
            core_rhs[ridx] = core_rhs[ridx] - factor * core_rhs[pivot_idx]
        pivot_of[col] = pivot_idx

    dependent = {}
    pivot_rows = set(pivot_of.values())
    for ridx, row in enumerate(core_rows):
        if ridx not in pivot_rows and not row and core_rhs[ridx]:
            raise InconsistentSystem(
                "boundary data and inhomogeneity are inconsistent "
                "at this truncation")
    free_cols = [col for col in remaining_cols if col not in pivot_of]
    for col, ridx in pivot_of.items():
        others = [c for c in core_rows[ridx] if c != col]
        if others:
            dependent[col] = core_rhs[ridx]  # particular value, free vars = 0
        else:
            assigned[col] = core_rhs[ridx]

    all_free = [col for col in columns
                if col not in assigned and col not in dependent]
    return assigned, all_free, dependent


def _gate_warnings(op: Operator, j: int, alpha: int):
    """Advisory notes from the solvability gate, never fatal here."""
    from .solvability import VerdictKind, classify

    notes = []
    polygon = build_polygon(op)
    for side in polygon.sides:
        if side.branch_count <= 0:
            continue
        try:
            verdict = classify(op, side.gevrey_index, j, alpha, n_max=4)
        except NoContact:
            continue
        except Exception:
            continue
        if verdict.kind is VerdictKind.NOT_FREDHOLM:
            notes.append(
                f"gate warning: index {side.gevrey_index} classifies as "
                "NotFredholm; window determination may fail")
    return notes


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def cauchy_recursion(op: Operator, phis, f: BiSeries | None,
                     trunc_t: int, trunc_z: int) -> BiSeries:
    """Explicit recursion for the pure initial-value problem.

    Requires normal form: the top t-order appears exactly once, with no
    z-derivatives attached, so the equation solves for the top derivative.
    ``phis`` supplies the t-derivative traces of orders 0..M-1; they must
    carry enough z-coefficients to feed the recursion up to ``trunc_t``.
    """
    order = op.t_order
    top = [(i, g) for (i, g) in op.terms if i == order]
    if top != [(order, 0)]:
        raise NotNormalForm(
            "top t-order must carry a single constant coefficient")
    lead = op.terms[(order, 0)]
    phis = list(phis)
    if len(phis) != order:
        raise ValueError(f"need exactly {order} initial traces, got {len(phis)}")

    # required z-extent per t-level, walking down the recursion
    need = {k: trunc_z for k in range(trunc_t + 1)}
    for k in range(trunc_t, order - 1, -1):
        here = need[k]
        for (i, g) in op.terms:
            if (i, g) == (order, 0):
                continue
            src = k - order + i
            need[src] = max(need.get(src, trunc_z), here + g)
    for k in range(order):
        if need.get(k, -1) > phis[k].trunc:
            raise TruncationTooSmall(
                f"initial trace {k} needs z-truncation {need[k]}, "
                f"has {phis[k].trunc}")
    if f is not None and trunc_t >= order:
        deepest = max(need[k] for k in range(order, trunc_t + 1))
        if f.trunc_t < trunc_t - order or f.trunc_z < deepest:
            raise TruncationTooSmall(
                f"inhomogeneity needs truncation ({trunc_t - order},{deepest})")

    table = {}
    for k in range(order):
        for beta in range(need.get(k, -1) + 1):
            value = phis[k].deriv_coeff(beta)
            if value:
                table[(k, beta)] = value
    for k in range(order, trunc_t + 1):
        m = k - order
        for beta in range(need.get(k, -1) + 1):
            value = RationalComplex(0)
            if f is not None:
                value = f.deriv_coeff(m, beta)
            for (i, g), a in op.terms.items():
                if (i, g) == (order, 0):
                    continue
                value = value - a * table.get((m + i, beta + g),
                                              RationalComplex(0))
            value = value / lead
            if value:
                table[(k, beta)] = value

    coeffs = {}
    for (k, beta), value in table.items():
        if k <= trunc_t and beta <= trunc_z:
            coeffs[(k, beta)] = value / (math.factorial(k) * math.factorial(beta))
    return BiSeries(coeffs, trunc_t, trunc_z)


def two_characteristic_oracle(lam1, lam2, phi: UniSeries, psi: UniSeries,
                              trunc: int) -> BiSeries:
    """Closed-form solution for a product of two transport factors.

    The solution of ``(Dt - lam1 Dz)(Dt - lam2 Dz) w = 0`` with w(0,z) =
    phi(z), w(t,0) = psi(t) splits as w = F(lam1 t + z) + G(lam2 t + z);
    the split is determined coefficientwise by ``F_n = [phi - psi(./lam2)]_n
    / (1 - tau^n)`` with tau = lam1/lam2, the free constant fixed as
    F_0 = phi(0)/2.
    """
    lam1 = RationalComplex.coerce(lam1)
    lam2 = RationalComplex.coerce(lam2)
    if not lam1 or not lam2:
        raise ZeroDivisionError("characteristic speeds must be nonzero")
    if lam1.abs2() == lam2.abs2():
        raise EqualModuli("characteristic speeds have equal modulus")
    degree = 2 * trunc
    if phi.trunc < degree or psi.trunc < degree:
        raise TruncationTooSmall(
            f"need boundary data to degree {degree} for window {trunc}")
    if phi.coeff(0) != psi.coeff(0):
        raise IncompatibleData(0, 0, phi.coeff(0), psi.coeff(0))

    tau = lam1 / lam2
    inv2 = RationalComplex(1) / lam2
    f_coeffs = {0: phi.coeff(0) / 2}
    tau_pow = RationalComplex(1)
    inv2_pow = RationalComplex(1)
    for n_exp in range(1, degree + 1):
        tau_pow = tau_pow * tau
        inv2_pow = inv2_pow * inv2
        forcing = phi.coeff(n_exp) - psi.coeff(n_exp) * inv2_pow
        denominator = RationalComplex(1) - tau_pow
        if not denominator:
            raise ResonantTau(f"ratio power {n_exp} hits 1")
        value = forcing / denominator
        if value:
            f_coeffs[n_exp] = value

    out = {}
    lam1_pow = [RationalComplex(1)]
    lam2_pow = [RationalComplex(1)]
    for _ in range(degree):
        lam1_pow.append(lam1_pow[-1] * lam1)
        lam2_pow.append(lam2_pow[-1] * lam2)
    for n_exp in range(degree + 1):
        f_n = f_coeffs.get(n_exp, RationalComplex(0))
        g_n = phi.coeff(n_exp) - f_n
        if not f_n and not g_n:
            continue
        for k in range(min(n_exp, trunc) + 1):
            beta = n_exp - k
            if beta > trunc:
                continue
            binom = math.comb(n_exp, k)
            contrib = (f_n * lam1_pow[k] + g_n * lam2_pow[k]) * binom
            if not contrib:
                continue
            acc = out.get((k, beta), RationalComplex(0)) + contrib
            if acc:
                out[(k, beta)] = acc
            else:
                out.pop((k, beta), None)
    return BiSeries(out, trunc, trunc)


# ---------------------------------------------------------------------------
# stabilization evidence
# ---------------------------------------------------------------------------

@dataclass
class StabilizationRung:
    trunc_t: int
    trunc_z: int
    determined: bool
    max_change: Fraction | None   # vs previous determined rung


@dataclass
class StabilizationReport:
    window_t: int
    window_z: int
    rungs: list

    @property
    def stable(self) -> bool:
        changes = [r.max_change for r in self.rungs
                   if r.determined and r.max_change is not None]
        return bool(changes) and all(change == 0 for change in changes)

    def to_json_dict(self):
        return {
            "windowT": self.window_t,
            "windowZ": self.window_z,
            "stable": self.stable,
            "rungs": [
                {
                    "truncT": r.trunc_t,
                    "truncZ": r.trunc_z,
                    "determined": r.determined,
                    "maxChange": None if r.max_change is None else str(r.max_change),
                }
                for r in self.rungs
            ],
        }


def stabilization_check(problem: GoursatProblem, window, ladder) -> StabilizationReport:
    """Re-solve on an increasing truncation ladder and compare the window.

    Once the window is determined the coefficients must stop changing; an
    undetermined rung is recorded as such rather than raised.
    """
    window_t, window_z = window
    ladder = list(ladder)
    if len(ladder) < 3:
        raise ValueError("ladder needs at least 3 rungs")
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("ladder truncations must strictly increase")
    previous = None
    rungs = []
    for trunc_t, trunc_z in ladder:
        try:
            series, _ = solve_truncated(problem, trunc_t, trunc_z,
                                        window_t, window_z)
        except WindowNotDetermined:
            rungs.append(StabilizationRung(trunc_t, trunc_z, False, None))
            continue
        change = None
        if previous is not None:
            change = Fraction(0)
            keys = set(series.coeffs) | set(previous.coeffs)
            for key in keys:
                delta = series.coeff(*key) - previous.coeff(*key)
                change = max(change, _coeff_abs_inf(delta))
        rungs.append(StabilizationRung(trunc_t, trunc_z, True, change))
        previous = series
    return StabilizationReport(window_t=window_t, window_z=window_z, rungs=rungs)

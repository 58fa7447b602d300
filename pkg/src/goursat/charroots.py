"""Characteristic roots at infinity and their ramified expansions.

The roots of ``P(lam, zeta) = 0`` behave like ``lam ~ c * zeta^q`` as
``zeta -> infinity``.  The admissible pole orders ``q`` are read off the upper
Newton hull of the exponent support of P, the leading coefficients are the
nonzero roots of the corresponding edge polynomials, and simple branches are
expanded into descending ramified series by Newton iteration on truncated
Laurent jets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import (
    DegenerateEdge,
    MultipleBranch,
    NotSimplePole,
    PrecisionLoss,
    ZeroLeader,
)
from .newton import build_polygon
from .operators import Operator


@dataclass(frozen=True)
class RootGroup:
    """All characteristic roots sharing one pole order at infinity."""

    pole_order: Fraction           # q in lam ~ c * zeta^q
    leaders: tuple                 # ((mpc value, multiplicity), ...)
    ramification: int              # denominator of the pole order

    @property
    def multiplicity(self) -> int:
        return sum(mult for _, mult in self.leaders)


@dataclass(frozen=True)
class PuiseuxSeries:
    """Finitely many terms of lam(zeta) on the descending 1/kappa grid.

    ``coeffs[r]`` multiplies ``zeta^(lead_exp - r/kappa)``.
    """

    kappa: int
    lead_exp: Fraction
    coeffs: tuple
    precision: int

    def __len__(self):
        return len(self.coeffs)

    def xi_pairs(self):
        """(exponent, coefficient) pairs in the variable xi = zeta^(1/kappa)."""
        top = self.lead_exp * self.kappa
        if top.denominator != 1:
            raise ValueError("leading exponent incompatible with ramification")
        top = int(top)
        return [(top - r, c) for r, c in enumerate(self.coeffs)]

    def eval(self, zeta):
        """Evaluate using the principal branch of zeta^(1/kappa)."""
        zeta = mpmath.mpc(zeta)
        xi = zeta ** (mpmath.mpf(1) / self.kappa)
        return sum(c * xi**e for e, c in self.xi_pairs())


# ---------------------------------------------------------------------------
# truncated Laurent jets (internal)
# ---------------------------------------------------------------------------

class _Jet:
    """Laurent series in one variable, exact above ``floor``.

    ``floor=None`` marks an exact (polynomial) jet.  Coefficients at or below
    the floor are unknown and silently dropped.
    """

    __slots__ = ("coeffs", "floor")

    def __init__(self, coeffs, floor):
        if floor is not None:
            coeffs = {e: c for e, c in coeffs.items() if e > floor}
        self.coeffs = {e: c for e, c in coeffs.items() if c != 0}
        self.floor = floor

    def lead(self):
        if self.coeffs:
            return max(self.coeffs)
        return self.floor

    def is_zero(self):
        return not self.coeffs

    def max_abs(self):
        if not self.coeffs:
            return mpmath.mpf(0)
        return max(abs(c) for c in self.coeffs.values())


def _floor_combine(*floors):
    known = [f for f in floors if f is not None]
    return max(known) if known else None


def _jet_add(a: _Jet, b: _Jet) -> _Jet:
    out = dict(a.coeffs)
    for e, c in b.coeffs.items():
        out[e] = out.get(e, mpmath.mpc(0)) + c
    return _Jet(out, _floor_combine(a.floor, b.floor))


def _jet_neg(a: _Jet) -> _Jet:
    return _Jet({e: -c for e, c in a.coeffs.items()}, a.floor)


def _jet_scale(a: _Jet, s) -> _Jet:
    return _Jet({e: c * s for e, c in a.coeffs.items()}, a.floor)


def _jet_mul(a: _Jet, b: _Jet) -> _Jet:
    floors = []
    if a.floor is not None:
        lead_b = b.lead()
        floors.append(a.floor + (lead_b if lead_b is not None else 0))
    if b.floor is not None:
        lead_a = a.lead()
        floors.append(b.floor + (lead_a if lead_a is not None else 0))
    floor = max(floors) if floors else None
    out = {}
    for e1, c1 in a.coeffs.items():
        for e2, c2 in b.coeffs.items():
            e = e1 + e2
            if floor is not None and e <= floor:
                continue
            out[e] = out.get(e, mpmath.mpc(0)) + c1 * c2
    return _Jet(out, floor)


def _jet_invert(a: _Jet, nterms: int) -> _Jet:
    """1/a to ``nterms`` relative terms; needs a nonzero leading coefficient."""
    lead = a.lead()
    if a.is_zero() or lead is None:
        raise ZeroDivisionError("cannot invert a zero jet")
    c_lead = a.coeffs[lead]
    # a = c * xi^L (1 + u) with u strictly lower order
    u = _Jet({e - lead: c / c_lead for e, c in a.coeffs.items() if e != lead},
             None if a.floor is None else a.floor - lead)
    floor = -lead - nterms
    acc = _Jet({0: mpmath.mpc(1)}, floor + lead)  # running (-u)^m, relative
    total = _Jet({0: mpmath.mpc(1)}, floor + lead)
    for _ in range(nterms):
        acc = _jet_mul(acc, _jet_neg(u))
        if acc.is_zero():
            break
        total = _jet_add(total, acc)
    inv = _Jet({e - lead: c / c_lead for e, c in total.coeffs.items()}, floor)
    return inv


def _char_poly_jets(op: Operator, kappa: int):
    """Per lam-degree coefficient polynomials as exact jets in xi."""
    by_degree = {}
    for (j, alpha), a in op.terms.items():
        jet = by_degree.setdefault(j, {})
        e = kappa * alpha
        jet[e] = jet.get(e, mpmath.mpc(0)) + a.to_mpc()
    return {j: _Jet(coeffs, None) for j, coeffs in by_degree.items()}


def _eval_poly_on_jet(coeff_jets: dict, lam: _Jet) -> _Jet:
    degrees = sorted(coeff_jets)
    total = None
    power = _Jet({0: mpmath.mpc(1)}, None)
    prev = 0
    for j in degrees:
        for _ in range(j - prev):
            power = _jet_mul(power, lam)
        prev = j
        term = _jet_mul(coeff_jets[j], power)
        total = term if total is None else _jet_add(total, term)
    return total


# ---------------------------------------------------------------------------
# root groups
# ---------------------------------------------------------------------------

def _upper_hull(points):
    """Upper convex hull of (j, alpha) points, left to right."""
    points = sorted(points)
    chain = []
    for pt in points:
        while len(chain) >= 2:
            (x1, y1), (x2, y2) = chain[-2], chain[-1]
            x3, y3 = pt
            # keep only strictly convex-from-above turns
            if (y2 - y1) * (x3 - x2) <= (y3 - y2) * (x2 - x1):
                chain.pop()
            else:
                break
        chain.append(pt)
    return chain


def _cluster_roots(roots, tol):
    clusters = []  # [center, count]
    for root in roots:
        for cluster in clusters:
            if abs(root - cluster[0]) <= tol:
                cluster[0] = (cluster[0] * cluster[1] + root) / (cluster[1] + 1)
                cluster[1] += 1
                break
        else:
            clusters.append([mpmath.mpc(root), 1])
    return [(center, count) for center, count in clusters]


def root_groups(op: Operator, precision: int = 128):
    """Leading behavior of all characteristic roots at infinity.

    Returns :class:`RootGroup` entries sorted by descending pole order.
    Identically-zero roots (a pure lam factor) carry no leading behavior at
    infinity and are not reported.
    """
    if op.t_order < 1:
        raise ValueError("operator has no t-derivative: no characteristic roots")
    support = {}
    for (j, alpha) in op.terms:
        support[j] = max(support.get(j, -1), alpha)
    hull = _upper_hull(sorted(support.items()))
    groups = []
    with mpmath.workprec(2 * precision):
        for (j1, a1), (j2, a2) in zip(hull, hull[1:]):
            slope = Fraction(a2 - a1, j2 - j1)
            pole_order = -slope
            # terms exactly on the edge line
            coeffs = {}
            for (j, alpha), a in op.terms.items():
                if j1 <= j <= j2 and Fraction(alpha - a1) == slope * (j - j1):
                    coeffs[j - j1] = coeffs.get(j - j1, mpmath.mpc(0)) + a.to_mpc()
            degree = j2 - j1
            poly = [coeffs.get(d, mpmath.mpc(0)) for d in range(degree, -1, -1)]
            if all(c == 0 for c in poly):
                raise DegenerateEdge(f"edge polynomial vanishes for q={pole_order}")
            roots = mpmath.polyroots(poly, maxsteps=200, extraprec=precision)
            scale = max([abs(r) for r in roots] + [mpmath.mpf(1)])
            tol = scale * mpmath.mpf(2) ** (-(precision // 2))
            leaders = _cluster_roots(roots, tol)
            leaders.sort(key=lambda lc: (-abs(lc[0]), mpmath.arg(lc[0])))
            groups.append(RootGroup(
                pole_order=pole_order,
                leaders=tuple((complex_to_fixed(center, precision), mult)
                              for center, mult in leaders),
                ramification=pole_order.denominator,
            ))
    groups.sort(key=lambda g: g.pole_order, reverse=True)
    return groups


def complex_to_fixed(value, precision):
    """Round an mpc to the working precision (stable across contexts)."""
    with mpmath.workprec(precision):
        return mpmath.mpc(value.real, value.imag)


# ---------------------------------------------------------------------------
# expansions
# ---------------------------------------------------------------------------

def puiseux_expand(op: Operator, group: RootGroup, branch_leader,
                   order: int, precision: int = 128) -> PuiseuxSeries:
    """Expand a simple branch ``lam ~ leader * zeta^q`` to ``order`` terms.

    Newton iteration on truncated jets in ``xi = zeta^(1/kappa)``; the
    residual of P at the truncation is of the promised descending order.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    branch_leader = mpmath.mpc(branch_leader)
    matched = None
    for center, mult in group.leaders:
        if abs(mpmath.mpc(center) - branch_leader) <= abs(branch_leader) * 1e-6 + 1e-12:
            matched = (mpmath.mpc(center), mult)
            break
    if matched is None:
        raise ValueError("branch leader does not match any leader of the group")
    if matched[1] > 1:
        raise MultipleBranch(
            "expansion beyond the leading term needs a simple branch")
    kappa = group.ramification
    top = group.pole_order * kappa
    assert top.denominator == 1
    top = int(top)
    floor = top - order
    guard = 64
    with mpmath.workprec(precision + guard):
        coeff_jets = _char_poly_jets(op, kappa)
        deriv_jets = {}
        for j, jet in coeff_jets.items():
            if j >= 1:
                deriv_jets[j - 1] = _jet_scale(jet, j)
        lam = _Jet({top: matched[0]}, floor)
        stop_tol = abs(matched[0]) * mpmath.mpf(2) ** (-(precision + 16))
        converged = False
        for _ in range(64):
            residual = _eval_poly_on_jet(coeff_jets, lam)
            if residual is None or residual.is_zero():
                converged = True
                break
            slope_jet = _eval_poly_on_jet(deriv_jets, lam)
            if slope_jet is None or slope_jet.is_zero():
                raise PrecisionLoss("derivative jet vanished during iteration")
            inv = _jet_invert(slope_jet, order + 4)
            delta = _jet_mul(residual, inv)
            delta = _Jet(delta.coeffs, max(floor, delta.floor or floor))
            if delta.is_zero() or delta.max_abs() <= stop_tol:
                converged = True
                break
            lam = _jet_add(lam, _jet_neg(delta))
        if not converged:
            raise PrecisionLoss("Newton iteration did not stabilize")
        coeffs = tuple(mpmath.mpc(lam.coeffs.get(top - r, mpmath.mpc(0)))
                       for r in range(order))
    return PuiseuxSeries(kappa=kappa, lead_exp=group.pole_order,
                         coeffs=coeffs, precision=precision)


def rebranch_simple_pole(ps: PuiseuxSeries) -> PuiseuxSeries:
    """Replace a ramified simple-growth branch by a single-valued one.

    The input represents ``zeta -> lam(zeta^kappa) = zeta^kappa g(zeta)`` with
    ``g`` finite and nonzero at infinity; the output is the principal branch
    of ``zeta * g(zeta)^(1/kappa)``, a series with a simple pole at infinity.
    """
    if ps.lead_exp != 1:
        raise NotSimplePole(
            f"underlying growth must be linear, got exponent {ps.lead_exp}")
    kappa = ps.kappa
    n = len(ps.coeffs)
    with mpmath.workprec(ps.precision + 64):
        g = [mpmath.mpc(c) for c in ps.coeffs]
        if abs(g[0]) == 0:
            raise ZeroLeader("leading coefficient vanishes")
        h = [mpmath.mpc(0)] * n
        h[0] = g[0] ** (mpmath.mpf(1) / kappa)  # principal branch
        for r in range(1, n):
            # coefficient of xi^{-r} in h^kappa, using entries below r only
            partial = _power_coeff(h, kappa, r, known=r)
            h[r] = (g[r] - partial) / (kappa * h[0] ** (kappa - 1))
        coeffs = tuple(h)
    return PuiseuxSeries(kappa=1, lead_exp=Fraction(1), coeffs=coeffs,
                         precision=ps.precision)


def _power_coeff(h, power, target, known):
    """Coefficient of index ``target`` in h^power using h[0:known] only."""
    current = {0: mpmath.mpc(1)}
    for _ in range(power):
        nxt = {}
        for e1, c1 in current.items():
            for e2 in range(min(known, target - e1 + 1)):
                if h[e2] == 0:
                    continue
                e = e1 + e2
                if e > target:
                    continue
                nxt[e] = nxt.get(e, mpmath.mpc(0)) + c1 * h[e2]
        current = nxt
    return current.get(target, mpmath.mpc(0))


def invert_series(ps: PuiseuxSeries, order: int | None = None) -> PuiseuxSeries:
    """Compositional inverse of a series with a simple pole at infinity."""
    if ps.kappa != 1 or ps.lead_exp != 1:
        raise NotSimplePole("inversion requires an unramified simple pole")
    n = order or len(ps.coeffs)
    with mpmath.workprec(ps.precision + 64):
        c = [mpmath.mpc(x) for x in ps.coeffs]
        if abs(c[0]) == 0:
            raise NotSimplePole("leading coefficient vanishes")
        a = c[0]
        floor = 1 - n
        mu = _Jet({1: 1 / a, 0: (-c[1] / a) if n > 1 else mpmath.mpc(0)}, floor)
        identity = _Jet({1: mpmath.mpc(1)}, floor)
        for _ in range(n + 2):
            tail = _tail_eval(c, mu, floor)
            mu = _jet_scale(_jet_add(identity, _jet_neg(tail)), 1 / a)
        coeffs = tuple(mu.coeffs.get(1 - r, mpmath.mpc(0)) for r in range(n))
    return PuiseuxSeries(kappa=1, lead_exp=Fraction(1), coeffs=coeffs,
                         precision=ps.precision)


def _tail_eval(c, mu: _Jet, floor: int) -> _Jet:
    """sum_{r>=1} c[r] * mu^(1-r) as a jet."""
    total = _Jet({}, floor)
    if len(c) < 2:
        return total
    total = _jet_add(total, _Jet({0: c[1]}, floor))
    if len(c) < 3:
        return total
    inv = _jet_invert(mu, len(c) + 2)
    power = _Jet({0: mpmath.mpc(1)}, floor)
    for r in range(2, len(c)):
        power = _jet_mul(power, inv)
        if c[r] != 0:
            total = _jet_add(total, _jet_scale(power, c[r]))
    return total


def compose_simple_pole(outer: PuiseuxSeries, inner: PuiseuxSeries) -> PuiseuxSeries:
    """outer(inner(zeta)) for two unramified simple-pole series."""
    if outer.kappa != 1 or inner.kappa != 1:
        raise NotSimplePole("composition requires unramified series")
    if outer.lead_exp != 1 or inner.lead_exp != 1:
        raise NotSimplePole("composition requires simple poles")
    n = min(len(outer.coeffs), len(inner.coeffs))
    prec = min(outer.precision, inner.precision)
    with mpmath.workprec(prec + 64):
        c = [mpmath.mpc(x) for x in outer.coeffs]
        floor = 1 - n
        mu = _Jet({1 - r: mpmath.mpc(x) for r, x in enumerate(inner.coeffs)}, floor)
        total = _jet_scale(mu, c[0])
        total = _jet_add(total, _tail_eval(c, mu, floor))
        coeffs = tuple(total.coeffs.get(1 - r, mpmath.mpc(0)) for r in range(n))
    return PuiseuxSeries(kappa=1, lead_exp=Fraction(1), coeffs=coeffs,
                         precision=prec)


# ---------------------------------------------------------------------------
# polygon cross-check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SlopeMatch:
    gevrey_index: Fraction
    expected_pole_order: Fraction
    side_branch_count: int
    group_pole_order: Fraction | None
    group_multiplicity: int
    ok: bool


@dataclass(frozen=True)
class SlopesReport:
    entries: tuple

    @property
    def all_ok(self) -> bool:
        return all(entry.ok for entry in self.entries)

    def to_json_dict(self):
        return {
            "allOk": self.all_ok,
            "entries": [
                {
                    "gevreyIndex": str(e.gevrey_index),
                    "expectedPoleOrder": str(e.expected_pole_order),
                    "sideBranchCount": e.side_branch_count,
                    "groupPoleOrder": None if e.group_pole_order is None
                    else str(e.group_pole_order),
                    "groupMultiplicity": e.group_multiplicity,
                    "ok": e.ok,
                }
                for e in self.entries
            ],
        }


def slopes_consistency(op: Operator, precision: int = 128) -> SlopesReport:
    """Pair polygon sides with root groups (index s versus pole order s+1).

    Every finite positive-slope side must match a group with pole order
    ``s + 1`` and total multiplicity equal to the side's branch count; the
    vertical side participates (with s = 0, pole order 1) when it carries
    branches.  Mismatches are report entries, not exceptions.
    """
    polygon = build_polygon(op)
    groups = root_groups(op, precision=precision) if op.t_order >= 1 else []
    by_q = {g.pole_order: g for g in groups}
    entries = []
    for side in polygon.sides:
        count = side.branch_count
        if side.is_vertical and count == 0:
            continue
        s = side.gevrey_index
        expected_q = s + 1
        group = by_q.get(expected_q)
        mult = group.multiplicity if group else 0
        entries.append(SlopeMatch(
            gevrey_index=s,
            expected_pole_order=expected_q,
            side_branch_count=count,
            group_pole_order=group.pole_order if group else None,
            group_multiplicity=mult,
            ok=group is not None and mult == count,
        ))
    return SlopesReport(entries=tuple(entries))

"""Newton polygon of an operator, principal parts and Toeplitz symbols.

Each term of order (j, alpha) contributes the quadrant
``Q(j+alpha, -j) = {x <= j+alpha, y >= -j}``; the polygon is the convex hull
of the union of these quadrants.  Because the recession directions are fixed
(left and up), the polygon is determined by the "lower-right" staircase of
the corner points, computed here with exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptySymbol, NoContact
from .operators import Operator
from .rational import RationalComplex


@dataclass(frozen=True)
class Side:
    """One boundary side; ``slope`` is None for the vertical side."""

    slope: Fraction | None
    gevrey_index: Fraction
    endpoints: tuple  # ((x1,y1), (x2,y2)) with x1 <= x2
    terms: frozenset  # contributing (j, alpha) pairs

    @property
    def is_vertical(self) -> bool:
        return self.slope is None

    @property
    def branch_count(self) -> int:
        (x1, y1), (x2, y2) = self.endpoints
        return int(y2 - y1)


@dataclass(frozen=True)
class NewtonPolygon:
    generators: tuple  # ((x, y), (j, alpha)) per term
    vertices: tuple    # extreme points, increasing x
    sides: tuple       # Side entries, increasing x; vertical side last

    @property
    def x_max(self):
        return self.vertices[-1][0]

    @property
    def y_min(self):
        return self.vertices[0][1]

    def contains(self, point) -> bool:
        """Exact membership test for a rational point."""
        x, y = Fraction(point[0]), Fraction(point[1])
        if x > self.x_max:
            return False
        for side in self.sides:
            if side.is_vertical:
                continue
            k = side.slope
            (x1, y1), _ = side.endpoints
            if y - y1 < k * (x - x1):
                return False
        return y >= self.y_min

    def to_json_dict(self):
        def frac(val):
            return str(val)

        sides = []
        for side in self.sides:
            sides.append({
                "slope": "inf" if side.is_vertical else frac(side.slope),
                "gevreyIndex": frac(side.gevrey_index),
                "endpoints": [[frac(x), frac(y)] for x, y in side.endpoints],
                "terms": sorted([j, a] for j, a in side.terms),
            })
        return {
            "generators": sorted([[int(x), int(y)], [j, a]]
                                 for (x, y), (j, a) in self.generators),
            "vertices": [[int(x), int(y)] for x, y in self.vertices],
            "sides": sides,
        }


def build_polygon(op: Operator) -> NewtonPolygon:
    """Compute the polygon of an operator from its term support."""
    generators = tuple(((j + alpha, -j), (j, alpha)) for j, alpha in op.terms)
    points = sorted({pt for pt, _ in generators})

    # Drop dominated corners: (x,y) lies inside Q(x',y') when x' >= x, y' <= y.
    survivors = []
    for x, y in points:
        dominated = any(
            (xo >= x and yo <= y) and (xo, yo) != (x, y) for xo, yo in points
        )
        if not dominated:
            survivors.append((x, y))
    survivors.sort()
    # x and y both strictly increase along the surviving staircase.

    # Lower-hull sweep: keep only corners where the boundary turns.
    chain: list = []
    for pt in survivors:
        while len(chain) >= 2 and not _turns_up(chain[-2], chain[-1], pt):
            chain.pop()
        chain.append(pt)
    vertices = tuple(chain)

    sides = []
    for (x1, y1), (x2, y2) in zip(vertices, vertices[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        level = y1 - slope * x1  # value of y - k*x on the side line
        terms = frozenset(
            (j, a) for (x, y), (j, a) in generators
            if y - slope * x == level and x1 <= x <= x2
        )
        sides.append(Side(slope=slope, gevrey_index=1 / slope,
                          endpoints=((x1, y1), (x2, y2)), terms=terms))

    x_max = vertices[-1][0]
    on_wall = sorted((y, (j, a)) for (x, y), (j, a) in generators if x == x_max)
    wall_terms = frozenset(term for _, term in on_wall)
    wall_lo = (x_max, on_wall[0][0])
    wall_hi = (x_max, on_wall[-1][0])
    sides.append(Side(slope=None, gevrey_index=Fraction(0),
                      endpoints=(wall_lo, wall_hi), terms=wall_terms))

    return NewtonPolygon(generators=generators, vertices=vertices,
                         sides=tuple(sides))


def _turns_up(a, b, c) -> bool:
    # b is a vertex iff slope(a,b) < slope(b,c); collinear points are interior
    lhs = (b[1] - a[1]) * (c[0] - b[0])
    rhs = (c[1] - b[1]) * (b[0] - a[0])
    return lhs < rhs


def positive_slopes(polygon: NewtonPolygon) -> list:
    """Gevrey indices of the finite positive-slope sides, descending."""
    indices = [side.gevrey_index for side in polygon.sides if not side.is_vertical]
    return sorted(indices, reverse=True)


def contact_terms(op: Operator, s) -> set:
    """Terms whose image touches the supporting line of slope 1/s.

    For s = 0 the supporting line is the vertical wall x = x_max; for s > 0
    it is the line y = x/s + c with the minimal contact level c.
    """
    s = Fraction(s)
    if s < 0:
        raise NoContact(f"gevrey index must be nonnegative, got {s}")
    if s == 0:
        x_max = max(j + alpha for j, alpha in op.terms)
        return {(j, alpha) for j, alpha in op.terms if j + alpha == x_max}
    k = 1 / s
    levels = {(j, alpha): Fraction(-j) - k * (j + alpha) for j, alpha in op.terms}
    best = min(levels.values())
    return {term for term, level in levels.items() if level == best}


def principal_part(op: Operator, s) -> Operator:
    """Sub-operator of the terms sitting on the index-s supporting line."""
    contact = contact_terms(op, s)
    if not contact:
        raise NoContact(f"no terms touch the supporting line of index {s}")
    return Operator({term: op.terms[term] for term in contact})


class LaurentPoly:
    """Laurent polynomial with exact coefficients, indexed by integer exponent."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        clean = {}
        for exp, c in dict(coeffs).items():
            c = RationalComplex.coerce(c)
            if c:
                clean[int(exp)] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def coeff(self, exp: int) -> RationalComplex:
        return self.coeffs.get(exp, RationalComplex(0))

    @property
    def min_exp(self) -> int:
        return min(self.coeffs)

    @property
    def max_exp(self) -> int:
        return max(self.coeffs)

    def shift(self, n: int) -> "LaurentPoly":
        return LaurentPoly({exp + n: c for exp, c in self.coeffs.items()})

    def unit_part(self):
        """Write f = z^e0 * g with g(0) != 0; returns (e0, ascending g coeffs)."""
        if not self.coeffs:
            raise EmptySymbol("empty Laurent polynomial")
        e0 = self.min_exp
        degree = self.max_exp - e0
        return e0, [self.coeff(e0 + i) for i in range(degree + 1)]

    def eval_complex(self, z: complex) -> complex:
        return sum(c.to_complex() * z**exp for exp, c in self.coeffs.items())

    def coefficient_multiset(self):
        return sorted(((c.re, c.im) for c in self.coeffs.values()))

    def __repr__(self):
        body = ", ".join(f"{exp}: {c}" for exp, c in sorted(self.coeffs.items()))
        return f"LaurentPoly({{{body}}})"


def toeplitz_symbol(op: Operator, s, j: int):
    """Symbol pair (f_s, f) of the index-s principal part.

    ``f_s(z) = sum a_{i,g} z^{-i}`` over the principal terms, i.e. the
    principal part evaluated at (1/z, 1); ``f = z^j f_s``.
    """
    part = principal_part(op, s)
    f_s = LaurentPoly({})
    acc = {}
    for (i, _gamma), a in part.terms.items():
        acc[-i] = acc.get(-i, RationalComplex(0)) + a
    f_s = LaurentPoly(acc)
    if not f_s:
        raise EmptySymbol("principal-part coefficients cancel in the symbol")
    return f_s, f_s.shift(j)

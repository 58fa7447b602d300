import random
from fractions import Fraction

import pytest

from goursat import (
    Operator,
    build_polygon,
    parse_operator,
    positive_slopes,
    principal_part,
    toeplitz_symbol,
)
from goursat.errors import NoContact
from goursat.newton import contact_terms

from conftest import random_operator


HEAT = parse_operator("Dt - Dz^2")
TWO_CHAR = parse_operator("(Dt - 2*Dz)*(Dt - Dz/2)")


def brute_force_hull_check(op, polygon):
    """Every generator point must satisfy all side inequalities."""
    for (x, y), _ in polygon.generators:
        assert polygon.contains((x, y))


def test_heat_polygon():
    polygon = build_polygon(HEAT)
    assert polygon.vertices == ((1, -1), (2, 0))
    finite = [s for s in polygon.sides if not s.is_vertical]
    assert len(finite) == 1
    assert finite[0].slope == 1
    assert finite[0].gevrey_index == 1
    assert finite[0].terms == {(1, 0), (0, 2)}
    brute_force_hull_check(HEAT, polygon)


def test_single_term_polygon():
    polygon = build_polygon(parse_operator("Dt"))
    assert polygon.vertices == ((1, -1),)
    assert positive_slopes(polygon) == []
    # the vertical wall exists but carries no branches
    wall = polygon.sides[-1]
    assert wall.is_vertical and wall.branch_count == 0


def test_two_char_polygon_vertical_side():
    polygon = build_polygon(TWO_CHAR)
    assert polygon.vertices == ((2, -2),)
    assert positive_slopes(polygon) == []
    wall = polygon.sides[-1]
    assert wall.is_vertical
    assert wall.branch_count == 2
    assert wall.terms == {(2, 0), (1, 1), (0, 2)}


def test_positive_slopes_examples():
    assert positive_slopes(build_polygon(HEAT)) == [Fraction(1)]
    assert positive_slopes(build_polygon(parse_operator("Dt^2 - Dz^3"))) == \
        [Fraction(1, 2)]
    assert positive_slopes(build_polygon(parse_operator("Dt"))) == []


def test_positive_slopes_are_descending():
    op = parse_operator("Dt^2 - Dt*Dz^3 - Dz^5")
    slopes = positive_slopes(build_polygon(op))
    assert slopes == [Fraction(2), Fraction(1)]


def test_principal_part_examples():
    assert principal_part(HEAT, 1).terms == HEAT.terms
    assert set(principal_part(HEAT, Fraction(1, 2)).terms) == {(0, 2)}
    assert set(principal_part(parse_operator("Dt"), 0).terms) == {(1, 0)}


def test_principal_part_supporting_line_geometry():
    rng = random.Random(41)
    for _ in range(30):
        op = random_operator(rng, terms=rng.randint(2, 7))
        for s in (0, Fraction(1, 2), 1, 2, Fraction(3, 2)):
            part = principal_part(op, s)
            contact = set(part.terms)
            if s == 0:
                x_max = max(j + a for j, a in op.terms)
                assert contact == {(j, a) for j, a in op.terms if j + a == x_max}
                continue
            k = 1 / Fraction(s)
            levels = {(j, a): Fraction(-j) - k * (j + a) for j, a in op.terms}
            bottom = min(levels.values())
            for term, level in levels.items():
                if term in contact:
                    assert level == bottom
                else:
                    assert level > bottom


def test_principal_part_negative_index():
    with pytest.raises(NoContact):
        principal_part(HEAT, -1)


def test_toeplitz_symbol_heat():
    f_s, f = toeplitz_symbol(HEAT, 1, 1)
    assert f_s.coeffs == {-1: parse_operator("1").terms[(0, 0)],
                          0: parse_operator("-1").terms[(0, 0)]}
    assert sorted(f.coeffs) == [0, 1]
    _, f0 = toeplitz_symbol(HEAT, 1, 0)
    assert sorted(f0.coeffs) == [-1, 0]


def test_toeplitz_symbol_two_char():
    _, f = toeplitz_symbol(TWO_CHAR, 0, 1)
    assert f.coeff(-1) == 1
    assert f.coeff(0) == Fraction(-5, 2)
    assert f.coeff(1) == 1


def test_symbol_multiset_matches_principal_part():
    rng = random.Random(13)
    for _ in range(30):
        op = random_operator(rng, terms=rng.randint(2, 7))
        for s in (0, 1, 2):
            part = principal_part(op, s)
            f_s, _ = toeplitz_symbol(op, s, 0)
            # coefficients accumulate per t-order in the symbol
            by_order = {}
            for (j, _a), c in part.terms.items():
                by_order[-j] = by_order.get(-j, parse_operator("1").terms[(0, 0)] * 0) + c
            by_order = {e: c for e, c in by_order.items() if c}
            assert f_s.coeffs == by_order


def test_hull_idempotence():
    rng = random.Random(29)
    for _ in range(30):
        op = random_operator(rng, terms=rng.randint(2, 8))
        polygon = build_polygon(op)
        boundary_terms = set()
        for side in polygon.sides:
            boundary_terms |= side.terms
        # terms on the horizontal wall do not appear in any side; keep vertices
        vertex_terms = {(j, a) for (x, y), (j, a) in polygon.generators
                        if (x, y) in set(polygon.vertices)}
        reduced = Operator({term: op.terms[term]
                            for term in boundary_terms | vertex_terms})
        assert build_polygon(reduced).vertices == polygon.vertices
        assert ([s.slope for s in build_polygon(reduced).sides]
                == [s.slope for s in polygon.sides])


def test_contact_terms_cross_consistency():
    rng = random.Random(37)
    for _ in range(20):
        op = random_operator(rng, terms=rng.randint(2, 6))
        polygon = build_polygon(op)
        for side in polygon.sides:
            if side.is_vertical:
                assert contact_terms(op, 0) == set(side.terms)
            else:
                assert contact_terms(op, side.gevrey_index) == set(side.terms)

"""Operator DSL and series file format.

The expansion-correctness oracle is an independent mini evaluator over the
same textual grammar: it never builds a coefficient table, it just evaluates
the expression at numeric points in exact arithmetic.
"""

import random
import re
from fractions import Fraction

import pytest

from goursat import (
    BiSeries,
    Operator,
    RationalComplex,
    format_operator,
    format_series,
    format_useries,
    parse_operator,
    parse_series,
    parse_useries,
)
from goursat.errors import (
    DuplicateIndex,
    EmptyOperator,
    IndexBeyondTruncation,
    NonConstantCoefficient,
    ParseError,
)

from conftest import gaussian_rational, nonzero_gaussian_rational, random_operator


# ---------------------------------------------------------------------------
# independent evaluation oracle
# ---------------------------------------------------------------------------

_ORACLE_TOKEN = re.compile(r"\s*(\d+\.\d+i?|\d+(?:/\d+)?i?|[A-Za-z_]\w*|[-+*/^()])")


def _oracle_eval(text: str, lam: RationalComplex, zeta: RationalComplex):
    """Evaluate the DSL text at (lam, zeta) without expanding anything."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _ORACLE_TOKEN.match(text, pos)
        if not m:
            break
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)
    idx = 0

    def peek():
        return tokens[idx]

    def advance():
        nonlocal idx
        idx += 1
        return tokens[idx - 1]

    def atom():
        tok = advance()
        if tok == "(":
            value = expr()
            assert advance() == ")"
            return value
        if tok == "Dt":
            return lam
        if tok == "Dz":
            return zeta
        if tok == "i":
            return RationalComplex(0, 1)
        imag = tok.endswith("i")
        body = tok[:-1] if imag else tok
        value = Fraction(body)
        return RationalComplex(0, value) if imag else RationalComplex(value)

    def factor():
        value = atom()
        if peek() == "^":
            advance()
            value = value ** int(advance())
        return value

    def term():
        value = factor()
        while peek() in ("*", "/"):
            if advance() == "*":
                value = value * factor()
            else:
                value = value / factor()
        return value

    def expr():
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if advance() == "-" else 1
        value = term() * sign
        while peek() in ("+", "-"):
            op = advance()
            rhs = term()
            value = value + rhs if op == "+" else value - rhs
        return value

    return expr()


# ---------------------------------------------------------------------------
# operator DSL
# ---------------------------------------------------------------------------

def test_single_token():
    assert parse_operator("Dt").terms == {(1, 0): RationalComplex(1)}


def test_direct_expansion():
    op = parse_operator("Dt^2 - Dz^3")
    assert op.terms == {(2, 0): RationalComplex(1), (0, 3): RationalComplex(-1)}


def test_factored_product_expansion():
    op = parse_operator("(Dt - 2*Dz)*(Dt - Dz/2)")
    assert op.terms == {
        (2, 0): RationalComplex(1),
        (1, 1): RationalComplex(Fraction(-5, 2)),
        (0, 2): RationalComplex(1),
    }


def test_decimals_are_exact():
    op = parse_operator("0.5*Dt")
    assert op.terms[(1, 0)] == RationalComplex(Fraction(1, 2))


def test_imaginary_literals():
    op = parse_operator("2i*Dt + i*Dz - 1/3i")
    assert op.terms[(1, 0)] == RationalComplex(0, 2)
    assert op.terms[(0, 1)] == RationalComplex(0, 1)
    assert op.terms[(0, 0)] == RationalComplex(0, Fraction(-1, 3))


def test_nonconstant_symbol_rejected():
    with pytest.raises(NonConstantCoefficient):
        parse_operator("Dt + x")


def test_empty_operator_rejected():
    with pytest.raises(EmptyOperator):
        parse_operator("Dt - Dt")


def test_syntax_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_operator("Dt + ^2")
    assert err.value.position is not None


def test_division_by_operator_rejected():
    with pytest.raises(ParseError):
        parse_operator("1/Dz")
    with pytest.raises(ParseError):
        parse_operator("Dt/(Dz+1)")


def test_division_by_zero_rejected():
    with pytest.raises(ParseError):
        parse_operator("Dt/0")


def test_power_requires_integer():
    with pytest.raises(ParseError):
        parse_operator("Dt^(1/2)")


def test_expansion_matches_evaluation_oracle():
    texts = [
        "(Dt - 2*Dz)*(Dt - Dz/2)",
        "(Dt + i*Dz)^3 - (Dz - 1)^2",
        "(Dt^2 - Dz^3)*(Dt + 1/3) + 2.5*Dz",
        "-(Dt - Dz)*(Dt + Dz)",
    ]
    rng = random.Random(2024)
    for text in texts:
        op = parse_operator(text)
        for _ in range(20):
            lam = gaussian_rational(rng)
            zeta = gaussian_rational(rng)
            assert op.char_eval(lam, zeta) == _oracle_eval(text, lam, zeta)


def test_format_canonical_examples():
    assert format_operator(parse_operator("Dt")) == "Dt"
    assert format_operator(parse_operator("Dt^2 - Dz^3")) == "Dt^2 - Dz^3"
    two = parse_operator("(Dt - 2*Dz)*(Dt - Dz/2)")
    assert format_operator(two) == "Dt^2 - 5/2*Dt*Dz + Dz^2"


def test_format_parse_roundtrip_random():
    rng = random.Random(11)
    for _ in range(100):
        op = random_operator(rng, terms=rng.randint(1, 7))
        assert parse_operator(format_operator(op)) == op


# ---------------------------------------------------------------------------
# series files
# ---------------------------------------------------------------------------

def test_series_header_only():
    series = parse_series("trunc 2 2; (0,0)=1")
    assert series.trunc_t == 2 and series.trunc_z == 2
    assert series.coeff(0, 0) == RationalComplex(1)


def test_series_complex_entry():
    series = parse_series("trunc 1 1; (0,0)=1; (0,1)=1/2+1/3i")
    assert series.coeff(0, 1) == RationalComplex(Fraction(1, 2), Fraction(1, 3))


def test_series_malformed_index():
    with pytest.raises(ParseError):
        parse_series("trunc 1 1; (0,)=1")


def test_series_duplicate_index():
    with pytest.raises(DuplicateIndex):
        parse_series("trunc 1 1\n(0,0)=1\n(0,0)=2")


def test_series_index_beyond_truncation():
    with pytest.raises(IndexBeyondTruncation):
        parse_series("trunc 1 1\n(2,0)=1")


def test_series_comments_and_roundtrip():
    text = "trunc 2 3  # header\n(0,0)=1\n(1,2)=-2/3i  # entry\n"
    series = parse_series(text)
    assert parse_series(format_series(series)) == series


def test_useries_roundtrip():
    u = parse_useries("trunc 4\n(0)=1\n(3)=-1/2+2i\n")
    assert u.trunc == 4
    assert u.coeff(3) == RationalComplex(Fraction(-1, 2), 2)
    assert parse_useries(format_useries(u)) == u


def test_series_roundtrip_random():
    rng = random.Random(5)
    for _ in range(30):
        coeffs = {}
        for _ in range(rng.randint(0, 10)):
            coeffs[(rng.randint(0, 5), rng.randint(0, 5))] = \
                nonzero_gaussian_rational(rng)
        series = BiSeries(coeffs, 5, 5)
        assert parse_series(format_series(series)) == series

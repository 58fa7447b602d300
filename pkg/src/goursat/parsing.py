"""Text front end: the operator DSL and the series file format.

Operator DSL grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' uint)?
    base   := 'Dt' | 'Dz' | number | 'i' | '(' expr ')'
    number := decimal or rational 'p/q', optionally with imaginary suffix 'i'

Division is only defined by numeric constants (``Dz/2`` is fine, ``1/Dz``
is not).  Decimal literals are read exactly (``0.5`` is one half).

Series files are line/semicolon separated statements.  Bivariate files start
with ``trunc Kt Kz`` followed by entries ``(k,b)=value``; univariate files
start with ``trunc K`` followed by ``(n)=value``.  Values are exact complex
literals such as ``1``, ``-2/3``, ``1/2+1/3i``.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import (
    DuplicateIndex,
    EmptyOperator,
    IndexBeyondTruncation,
    NonConstantCoefficient,
    ParseError,
)
from .operators import Operator, poly_add, poly_mul, poly_scale
from .rational import RationalComplex
from .series import BiSeries, UniSeries

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<number>\d+\.\d+i?|\d+(?:/\d+)?i?)
      | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<op>[-+*/^()])
    )""",
    re.VERBOSE,
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad = len(text) - len(stripped)
            raise ParseError(f"unexpected character {text[bad]!r}", position=bad)
        if match.lastgroup == "number":
            tokens.append(("number", match.group("number"), match.start("number")))
        elif match.lastgroup == "name":
            tokens.append(("name", match.group("name"), match.start("name")))
        elif match.lastgroup == "op":
            tokens.append(("op", match.group("op"), match.start("op")))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _number_value(literal: str) -> RationalComplex:
    imag = literal.endswith("i")
    if imag:
        literal = literal[:-1]
    value = Fraction(literal)
    return RationalComplex(0, value) if imag else RationalComplex(value)


class _OperatorParser:
    """Recursive-descent parser producing a raw coefficient dict."""

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect_op(self, symbol):
        kind, value, where = self.peek()
        if kind != "op" or value != symbol:
            raise ParseError(f"found {value!r}", position=where, expected=repr(symbol))
        return self.advance()

    def parse(self) -> dict:
        poly = self.expr()
        kind, value, where = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {value!r}", position=where,
                             expected="end of input")
        return poly

    def expr(self) -> dict:
        kind, value, _ = self.peek()
        negate = False
        if kind == "op" and value in "+-":
            self.advance()
            negate = value == "-"
        poly = self.term()
        if negate:
            poly = poly_scale(poly, RationalComplex(-1))
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                if value == "-":
                    rhs = poly_scale(rhs, RationalComplex(-1))
                poly = poly_add(poly, rhs)
            else:
                return poly

    def term(self) -> dict:
        poly = self.factor()
        while True:
            kind, value, where = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                poly = poly_mul(poly, self.factor())
            elif kind == "op" and value == "/":
                self.advance()
                divisor = self.factor()
                constant = _as_constant(divisor)
                if constant is None:
                    raise ParseError("division by a non-constant operator",
                                     position=where)
                if not constant:
                    raise ParseError("division by zero", position=where)
                poly = poly_scale(poly, RationalComplex(1) / constant)
            else:
                return poly

    def factor(self) -> dict:
        poly = self.base()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            kind, value, where = self.peek()
            if kind != "number" or not value.isdigit():
                raise ParseError(f"found {value!r}", position=where,
                                 expected="a nonnegative integer exponent")
            self.advance()
            poly = _poly_pow(poly, int(value))
        return poly

    def base(self) -> dict:
        kind, value, where = self.advance()
        if kind == "number":
            return {(0, 0): _number_value(value)} if _number_value(value) else {}
        if kind == "name":
            if value == "Dt":
                return {(1, 0): RationalComplex(1)}
            if value == "Dz":
                return {(0, 1): RationalComplex(1)}
            if value == "i":
                return {(0, 0): RationalComplex(0, 1)}
            raise NonConstantCoefficient(
                f"unknown symbol {value!r}; coefficients must be constant",
                position=where)
        if kind == "op" and value == "(":
            poly = self.expr()
            self.expect_op(")")
            return poly
        raise ParseError(f"found {value!r}", position=where,
                         expected="'Dt', 'Dz', 'i', a number or '('")


def _poly_pow(poly: dict, n: int) -> dict:
    result = {(0, 0): RationalComplex(1)}
    while n:
        if n & 1:
            result = poly_mul(result, poly)
        poly = poly_mul(poly, poly)
        n >>= 1
    return result


def _as_constant(poly: dict):
    if not poly:
        return RationalComplex(0)
    if set(poly) == {(0, 0)}:
        return poly[(0, 0)]
    return None


def parse_operator(text: str) -> Operator:
    """Parse DSL text into a fully expanded, normalized :class:`Operator`."""
    poly = _OperatorParser(text).parse()
    if not poly:
        raise EmptyOperator("all operator terms cancel")
    return Operator(poly)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_value(value: RationalComplex) -> str:
    """Render a Gaussian rational as a complex literal (``1/2+1/3i``)."""
    if not value:
        return "0"
    if value.im == 0:
        return _format_fraction(value.re)
    imag = f"{_format_fraction(abs(value.im))}i"
    if value.re == 0:
        return imag if value.im > 0 else f"-{imag}"
    joiner = "+" if value.im > 0 else "-"
    return f"{_format_fraction(value.re)}{joiner}{imag}"


def _format_monomial(j: int, alpha: int) -> str:
    parts = []
    if j == 1:
        parts.append("Dt")
    elif j > 1:
        parts.append(f"Dt^{j}")
    if alpha == 1:
        parts.append("Dz")
    elif alpha > 1:
        parts.append(f"Dz^{alpha}")
    return "*".join(parts)


def format_operator(op: Operator) -> str:
    """Canonical DSL rendering; term order is (j, alpha) descending."""
    pieces = []
    for j, alpha in sorted(op.terms, reverse=True):
        coeff = op.terms[(j, alpha)]
        mono = _format_monomial(j, alpha)
        if coeff.im == 0:
            sign = "-" if coeff.re < 0 else "+"
            mag = abs(coeff.re)
            if not mono:
                body = _format_fraction(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_format_fraction(mag)}*{mono}"
        elif coeff.re == 0:
            sign = "-" if coeff.im < 0 else "+"
            mag = abs(coeff.im)
            imag = "i" if mag == 1 else f"{_format_fraction(mag)}i"
            body = f"{imag}*{mono}" if mono else imag
        else:
            sign = "+"
            literal = f"({format_value(coeff)})"
            body = f"{literal}*{mono}" if mono else literal
        pieces.append((sign, body))
    sign, body = pieces[0]
    text = body if sign == "+" else f"-{body}"
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


# ---------------------------------------------------------------------------
# series files
# ---------------------------------------------------------------------------

_VALUE_RE = re.compile(
    r"""^(?P<first>[+-]?(?:\d+\.\d+|\d+(?:/\d+)?)i?|[+-]?i)
         (?P<second>[+-](?:(?:\d+\.\d+|\d+(?:/\d+)?)i|i))?$""",
    re.VERBOSE,
)


def parse_complex_literal(text: str) -> RationalComplex:
    text = text.replace(" ", "")
    match = _VALUE_RE.match(text)
    if match is None:
        raise ParseError(f"malformed value {text!r}")
    total = RationalComplex(0)
    for part in (match.group("first"), match.group("second")):
        if part is None:
            continue
        sign = 1
        if part[0] in "+-":
            sign = -1 if part[0] == "-" else 1
            part = part[1:]
        if part == "i":
            total = total + RationalComplex(0, sign)
        else:
            total = total + sign * _number_value(part)
    return total


def _series_statements(text: str):
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0]
        for statement in line.split(";"):
            statement = statement.strip()
            if statement:
                yield lineno, statement


_BI_ENTRY_RE = re.compile(r"^\((\d+)\s*,\s*(\d+)\)\s*=\s*(.+)$")
_UNI_ENTRY_RE = re.compile(r"^\((\d+)\)\s*=\s*(.+)$")


def parse_series(text: str) -> BiSeries:
    """Parse a bivariate series file into a :class:`BiSeries`."""
    statements = list(_series_statements(text))
    if not statements:
        raise ParseError("empty series file", expected="'trunc Kt Kz' header")
    lineno, header = statements[0]
    fields = header.split()
    if len(fields) != 3 or fields[0] != "trunc":
        raise ParseError(f"bad header {header!r} on line {lineno}",
                         expected="'trunc Kt Kz'")
    try:
        trunc_t, trunc_z = int(fields[1]), int(fields[2])
    except ValueError:
        raise ParseError(f"bad truncation in header {header!r} on line {lineno}")
    coeffs = {}
    for lineno, statement in statements[1:]:
        match = _BI_ENTRY_RE.match(statement)
        if match is None:
            raise ParseError(f"malformed entry {statement!r} on line {lineno}",
                             expected="'(k,b)=value'")
        k, beta = int(match.group(1)), int(match.group(2))
        if (k, beta) in coeffs:
            raise DuplicateIndex(f"index ({k},{beta}) repeated on line {lineno}")
        if k > trunc_t or beta > trunc_z:
            raise IndexBeyondTruncation(
                f"index ({k},{beta}) beyond declared truncation "
                f"({trunc_t},{trunc_z}) on line {lineno}")
        coeffs[(k, beta)] = parse_complex_literal(match.group(3))
    return BiSeries(coeffs, trunc_t, trunc_z)


def parse_useries(text: str) -> UniSeries:
    """Parse a univariate series file into a :class:`UniSeries`."""
    statements = list(_series_statements(text))
    if not statements:
        raise ParseError("empty series file", expected="'trunc K' header")
    lineno, header = statements[0]
    fields = header.split()
    if len(fields) != 2 or fields[0] != "trunc":
        raise ParseError(f"bad header {header!r} on line {lineno}",
                         expected="'trunc K'")
    try:
        trunc = int(fields[1])
    except ValueError:
        raise ParseError(f"bad truncation in header {header!r} on line {lineno}")
    coeffs = {}
    for lineno, statement in statements[1:]:
        match = _UNI_ENTRY_RE.match(statement)
        if match is None:
            raise ParseError(f"malformed entry {statement!r} on line {lineno}",
                             expected="'(n)=value'")
        n = int(match.group(1))
        if n in coeffs:
            raise DuplicateIndex(f"index ({n}) repeated on line {lineno}")
        if n > trunc:
            raise IndexBeyondTruncation(
                f"index ({n}) beyond declared truncation ({trunc}) on line {lineno}")
        coeffs[n] = parse_complex_literal(statement.split("=", 1)[1].strip())
    return UniSeries(coeffs, trunc)


def format_series(series: BiSeries) -> str:
    lines = [f"trunc {series.trunc_t} {series.trunc_z}"]
    for (k, beta) in sorted(series.coeffs):
        lines.append(f"({k},{beta})={format_value(series.coeffs[(k, beta)])}")
    return "\n".join(lines) + "\n"


def format_useries(series: UniSeries) -> str:
    lines = [f"trunc {series.trunc}"]
    for n in sorted(series.coeffs):
        lines.append(f"({n})={format_value(series.coeffs[n])}")
    return "\n".join(lines) + "\n"

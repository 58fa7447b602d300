"""Constant-coefficient operators in two variables.

An operator is a finite table mapping a pair of differentiation orders
``(j, alpha)`` (order in t, order in z) to a nonzero Gaussian-rational
coefficient.  The same table read as a polynomial ``P(lam, zeta)`` is the
characteristic polynomial of the operator.
"""

from __future__ import annotations

from .errors import EmptyOperator
from .rational import RationalComplex


class Operator:
    """Finite coefficient table of a constant-coefficient operator.

    Invariants: stored coefficients are nonzero, the table is nonempty, and
    ``t_order`` / ``z_order`` are the maximal differentiation orders present.
    """

    __slots__ = ("terms", "t_order", "z_order")

    def __init__(self, terms):
        clean = {}
        for (j, alpha), coeff in terms.items():
            coeff = RationalComplex.coerce(coeff)
            if not coeff:
                continue
            if j < 0 or alpha < 0:
                raise ValueError("differentiation orders must be nonnegative")
            clean[(int(j), int(alpha))] = coeff
        if not clean:
            raise EmptyOperator("operator has no nonzero terms")
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "t_order", max(j for j, _ in clean))
        object.__setattr__(self, "z_order", max(a for _, a in clean))

    def __setattr__(self, name, value):
        raise AttributeError("Operator is immutable")

    # -- algebra (used by the parser and by test generators) ----------------

    @staticmethod
    def monomial(j: int, alpha: int, coeff=1) -> "Operator":
        return Operator({(j, alpha): RationalComplex.coerce(coeff)})

    def __add__(self, other: "Operator") -> "Operator":
        return Operator(poly_add(self.terms, other.terms))

    def __sub__(self, other: "Operator") -> "Operator":
        return Operator(poly_add(self.terms, poly_scale(other.terms, RationalComplex(-1))))

    def __mul__(self, other) -> "Operator":
        if isinstance(other, Operator):
            return Operator(poly_mul(self.terms, other.terms))
        return Operator(poly_scale(self.terms, RationalComplex.coerce(other)))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Operator":
        if n < 0:
            raise ValueError("negative operator powers are not defined")
        result = {(0, 0): RationalComplex(1)}
        base = self.terms
        while n:
            if n & 1:
                result = poly_mul(result, base)
            base = poly_mul(base, base)
            n >>= 1
        return Operator(result)

    def __eq__(self, other):
        return isinstance(other, Operator) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- characteristic polynomial ------------------------------------------

    def char_eval(self, lam, zeta):
        """Evaluate P(lam, zeta); exact for RationalComplex arguments."""
        total = None
        for (j, alpha), coeff in self.terms.items():
            term = coeff * lam**j * zeta**alpha
            total = term if total is None else total + term
        return total

    def char_eval_mpc(self, lam, zeta):
        """Evaluate P(lam, zeta) in mpmath arithmetic."""
        import mpmath

        total = mpmath.mpc(0)
        for (j, alpha), coeff in self.terms.items():
            total += coeff.to_mpc() * lam**j * zeta**alpha
        return total

    def lam_degrees(self):
        return sorted({j for j, _ in self.terms})

    def coeff(self, j: int, alpha: int) -> RationalComplex:
        return self.terms.get((j, alpha), RationalComplex(0))

    def __repr__(self):
        from .parsing import format_operator

        return f"Operator({format_operator(self)!r})"


# ---------------------------------------------------------------------------
# raw dict polynomial algebra (allows the zero polynomial, unlike Operator)
# ---------------------------------------------------------------------------

def poly_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for key, coeff in b.items():
        acc = out.get(key)
        acc = coeff if acc is None else acc + coeff
        if acc:
            out[key] = acc
        else:
            out.pop(key, None)
    return out


def poly_scale(a: dict, c: RationalComplex) -> dict:
    if not c:
        return {}
    return {key: coeff * c for key, coeff in a.items()}


def poly_mul(a: dict, b: dict) -> dict:
    out = {}
    for (j1, a1), c1 in a.items():
        for (j2, a2), c2 in b.items():
            key = (j1 + j2, a1 + a2)
            acc = out.get(key)
            acc = c1 * c2 if acc is None else acc + c1 * c2
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
    return out

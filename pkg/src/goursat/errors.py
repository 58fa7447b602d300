"""Exception hierarchy shared by all goursat modules.

Every error a caller is expected to handle derives from :class:`GoursatError`,
so the command line front end can map failures onto documented exit codes.
"""


class GoursatError(Exception):
    """Base class for all toolkit errors."""


# ---------------------------------------------------------------------------
# parsing / input files
# ---------------------------------------------------------------------------

class ParseError(GoursatError):
    """Malformed operator or series text.

    Carries the offset into the input and a short description of what was
    expected there.
    """

    def __init__(self, message, position=None, expected=None):
        self.position = position
        self.expected = expected
        if position is not None:
            message = f"{message} (at position {position})"
        if expected is not None:
            message = f"{message}; expected {expected}"
        super().__init__(message)


class NonConstantCoefficient(ParseError):
    """A symbol other than Dt, Dz, i or a numeral appeared in an operator."""


class EmptyOperator(ParseError):
    """All terms of the operator cancelled."""


class DuplicateIndex(ParseError):
    """The same coefficient index occurs twice in a series file."""


class IndexBeyondTruncation(ParseError):
    """A series entry lies outside the declared truncation."""


# ---------------------------------------------------------------------------
# series arithmetic
# ---------------------------------------------------------------------------

class TruncationTooSmall(GoursatError):
    """The stored truncation cannot support the requested operation."""


class NegativeOrder(GoursatError):
    """Borel-type transform order must be nonnegative."""


class NonpositiveIndex(GoursatError):
    """Moment differentiation index must be positive."""


class DegenerateFit(GoursatError):
    """Regression window is empty, constant-zero or too short."""


class IncompatibleData(GoursatError):
    """Corner compatibility of boundary data fails at some index pair."""

    def __init__(self, k, beta, lhs, rhs):
        self.index = (k, beta)
        super().__init__(
            f"incompatible boundary data at (k,beta)=({k},{beta}): {lhs} != {rhs}"
        )


# ---------------------------------------------------------------------------
# polygon / characteristic roots
# ---------------------------------------------------------------------------

class NoContact(GoursatError):
    """(j, alpha) does not lie on the polygon contact set for this index."""


class EmptySymbol(GoursatError):
    """Toeplitz symbol has no terms."""


class DegenerateEdge(GoursatError):
    """Edge polynomial of a polygon edge has no usable coefficients."""


class MultipleBranch(GoursatError):
    """Expansion past the leading term requested for a multiple branch."""


class PrecisionLoss(GoursatError):
    """Working precision exhausted during a numeric series computation."""


class ZeroLeader(GoursatError):
    """Leading coefficient vanishes where a nonzero value is required."""


class NotSimplePole(GoursatError):
    """Series inversion requires a simple pole at infinity."""


# ---------------------------------------------------------------------------
# solvability gate
# ---------------------------------------------------------------------------

class ZeroOnContour(GoursatError):
    """The symbol vanishes (numerically) on the test circle."""


class MethodDisagreement(GoursatError):
    """Independent computations of the same quantity disagree."""


# ---------------------------------------------------------------------------
# solver
# ---------------------------------------------------------------------------

class InconsistentSystem(GoursatError):
    """The truncated linear system admits no solution."""


class WindowNotDetermined(GoursatError):
    """Requested window coefficients depend on free unknowns."""

    def __init__(self, undetermined):
        self.undetermined = sorted(undetermined)
        head = ", ".join(map(str, self.undetermined[:6]))
        more = "..." if len(self.undetermined) > 6 else ""
        super().__init__(
            f"window coefficients not determined at this truncation: {head}{more}"
        )


class NotNormalForm(GoursatError):
    """Top t-order coefficient is not a nonzero constant."""


class EqualModuli(GoursatError):
    """The two characteristic speeds have equal modulus."""


class ResonantTau(GoursatError):
    """A ratio power hits 1 within the truncation (defensive guard)."""


# ---------------------------------------------------------------------------
# summability lab
# ---------------------------------------------------------------------------

class RangeNotCertified(GoursatError):
    """Argument outside the certified evaluation range."""


class PadeBreakdown(GoursatError):
    """A Pade pole obstructs continuation along the requested ray."""

    def __init__(self, message, pole=None):
        self.pole = pole
        super().__init__(message)


class InsufficientSpan(GoursatError):
    """Growth fit needs more samples or a wider radius span."""


class QuadratureNotConverged(GoursatError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class HypothesisViolated(GoursatError):
    """Standing assumptions of the summability criteria fail."""

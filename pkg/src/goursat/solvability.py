"""Solvability gate for truncated boundary problems.

Decides, for a given operator, Gevrey index s and corner (j, alpha), whether
the normalized problem operator acts bijectively on the weighted series
scales: winding-number test of the Toeplitz symbol on circles |z| = w,
finite-section invertibility sweep, the sufficient spectral (dominant corner
coefficient) criterion, and the root-moduli classification.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import mpmath
import numpy as np

from .charroots import root_groups
from .errors import (
    EmptySymbol,
    MethodDisagreement,
    NoContact,
    ZeroOnContour,
)
from .newton import (
    LaurentPoly,
    build_polygon,
    contact_terms,
    principal_part,
    toeplitz_symbol,
)
from .operators import Operator
from .rational import RationalComplex


# ---------------------------------------------------------------------------
# winding numbers
# ---------------------------------------------------------------------------

def _unit_roots(f: LaurentPoly, precision: int):
    """Roots of the unit part g where f = z^e0 * g, g(0) != 0."""
    e0, coeffs = f.unit_part()
    degree = len(coeffs) - 1
    if degree == 0:
        return e0, []
    with mpmath.workprec(2 * precision):
        poly = [c.to_mpc() for c in reversed(coeffs)]
        roots = mpmath.polyroots(poly, maxsteps=200, extraprec=precision)
    return e0, list(roots)


def winding_number(f: LaurentPoly, w: float, samples: int = 4096,
                   precision: int = 128) -> int:
    """Winding of f around the origin along |z| = w, computed two ways.

    (a) exact root count: f = z^e0 g(z) gives winding e0 + #{g-roots inside};
    (b) accumulated argument increments over ``samples`` circle points.
    The two must agree, and the circle must stay clear of zeros.
    """
    if w <= 0:
        raise ValueError("radius must be positive")
    if not f:
        raise EmptySymbol("winding number of the zero symbol is undefined")
    e0, roots = _unit_roots(f, precision)
    inside = 0
    for root in roots:
        modulus = float(abs(root))
        if abs(modulus - w) <= 1e-6 * max(w, 1.0):
            raise ZeroOnContour(f"root of modulus {modulus} on the circle w={w}")
        if modulus < w:
            inside += 1
    exact = e0 + inside

    theta = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
    z = w * np.exp(1j * theta)
    values = np.zeros_like(z)
    for exp, coeff in f.coeffs.items():
        values += coeff.to_complex() * z**exp
    magnitudes = np.abs(values)
    if magnitudes.min() <= 1e-9 * max(magnitudes.max(), 1e-300):
        raise ZeroOnContour("symbol vanishes numerically on the circle")
    args = np.angle(values)
    steps = np.diff(np.concatenate([args, args[:1]]))
    steps = (steps + math.pi) % (2 * math.pi) - math.pi
    total = float(steps.sum()) / (2 * math.pi)
    numeric = round(total)
    if abs(total - numeric) > 0.25 or numeric != exact:
        raise MethodDisagreement(
            f"winding mismatch: exact {exact}, numeric {total:.6f}")
    return exact


# ---------------------------------------------------------------------------
# admissible radii (symbol nonvanishing + zero winding)
# ---------------------------------------------------------------------------

def admissible_radii(op: Operator, s, j: int, alpha: int,
                     precision: int = 128):
    """Open w-intervals on which the index-(s, j, alpha) gate is satisfied.

    The symbol f = z^j f_s must be nonzero on |z| = w with zero winding;
    equivalently the number of symbol zeros inside the circle balances the
    pole order at the origin.  Returned interval endpoints are the root
    moduli at working precision; the second endpoint may be ``math.inf``.
    """
    validate_corner(op, s, j, alpha)
    _, f = toeplitz_symbol(op, s, j)
    e0, roots = _unit_roots(f, precision)
    moduli = sorted(float(abs(r)) for r in roots)
    boundaries = [0.0] + moduli + [math.inf]
    intervals = []
    for lo, hi in zip(boundaries, boundaries[1:]):
        if lo == hi:
            continue
        inside = sum(1 for m in moduli if m <= lo)
        if e0 + inside == 0:
            intervals.append((lo, hi))
    # adjacent intervals with identical winding merge across repeated moduli
    merged = []
    for lo, hi in intervals:
        if merged and merged[-1][1] == lo:
            merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


def validate_corner(op: Operator, s, j: int, alpha: int):
    """Check that (j, alpha) maps onto the closed contact segment for s.

    Integer points whose image (j+alpha, -j) lies on the segment spanned by
    the contact set are accepted; anything else raises :class:`NoContact`.
    """
    contact = contact_terms(op, s)
    images = sorted((jj + aa, -jj) for jj, aa in contact)
    x, y = j + alpha, -j
    (x1, y1), (x2, y2) = images[0], images[-1]
    if (x, y) == (x1, y1) or (x, y) == (x2, y2):
        return
    if x1 == x2:
        on_segment = x == x1 and y1 <= y <= y2
    else:
        on_segment = (x1 <= x <= x2 and
                      Fraction(y - y1) * (x2 - x1) == Fraction(y2 - y1) * (x - x1))
    if not on_segment:
        raise NoContact(
            f"(j,alpha)=({j},{alpha}) is not on the contact segment of index {s}")


# ---------------------------------------------------------------------------
# finite Toeplitz sections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SectionResult:
    size: int                 # N: matrix is (N+1) x (N+1)
    determinant: RationalComplex
    invertible: bool
    condition_estimate: float


@dataclass(frozen=True)
class ToeplitzReport:
    n_max: int
    results: tuple

    @property
    def all_invertible(self) -> bool:
        return all(r.invertible for r in self.results)

    def to_json_dict(self):
        return {
            "nMax": self.n_max,
            "allInvertible": self.all_invertible,
            "results": [
                {
                    "N": r.size,
                    "determinant": str(r.determinant),
                    "detMagnitude": abs(r.determinant),
                    "invertible": r.invertible,
                    "conditionEstimate": r.condition_estimate,
                }
                for r in self.results
            ],
        }


def _exact_determinant(matrix):
    """Exact determinant by rational Gaussian elimination with row swaps."""
    n = len(matrix)
    matrix = [row[:] for row in matrix]
    det = RationalComplex(1)
    for col in range(n):
        pivot_row = None
        for row in range(col, n):
            if matrix[row][col]:
                pivot_row = row
                break
        if pivot_row is None:
            return RationalComplex(0)
        if pivot_row != col:
            matrix[col], matrix[pivot_row] = matrix[pivot_row], matrix[col]
            det = det * RationalComplex(-1)
        pivot = matrix[col][col]
        det = det * pivot
        for row in range(col + 1, n):
            factor = matrix[row][col] / pivot
            if not factor:
                continue
            matrix[row] = [matrix[row][k] - factor * matrix[col][k]
                           for k in range(n)]
    return det


def toeplitz_sections(f: LaurentPoly, n_max: int = 32,
                      precision: int = 128) -> ToeplitzReport:
    """Invertibility sweep of the finite sections T_f(N), N = 0..n_max.

    Entry (row, col) of T_f(N) is the symbol coefficient at exponent
    row - col.  Exact rational elimination decides invertibility; condition
    numbers are estimated in double precision for reporting.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    results = []
    for n in range(n_max + 1):
        matrix = [[f.coeff(row - col) for col in range(n + 1)]
                  for row in range(n + 1)]
        det = _exact_determinant(matrix)
        numeric = np.array([[m.to_complex() for m in row] for row in matrix])
        try:
            cond = float(np.linalg.cond(numeric))
        except np.linalg.LinAlgError:
            cond = math.inf
        if not det:
            cond = math.inf
        results.append(SectionResult(size=n, determinant=det,
                                     invertible=bool(det),
                                     condition_estimate=cond))
    return ToeplitzReport(n_max=n_max, results=tuple(results))


# ---------------------------------------------------------------------------
# spectral (dominant corner) condition
# ---------------------------------------------------------------------------

def spectral_condition(op: Operator, s, j: int, alpha: int):
    """Search for a weight w with |a_{j,alpha}| above the shifted mass.

    Minimizes ``h(w) = sum_{(l,b) != (j,alpha)} |a_{l,b}| w^(j-l)`` over the
    principal part; h is convex in log w, so golden-section on the log axis
    finds the minimum.  Returns a witness w with ``h(w) < |a_{j,alpha}|`` or
    None when the condition fails everywhere.
    """
    part = principal_part(op, s)
    if (j, alpha) not in part.terms:
        raise NoContact(
            f"(j,alpha)=({j},{alpha}) is not a principal term for index {s}")
    corner = math.exp(part.terms[(j, alpha)].log_abs())
    others = [(jj, math.exp(c.log_abs()))
              for (jj, _aa), c in part.terms.items() if (jj, _aa) != (j, alpha)]
    if not others:
        return 1.0

    def h(log_w):
        return sum(mag * math.exp((j - l) * log_w) for l, mag in others)

    lo, hi = math.log(1e-8), math.log(1e8)
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - golden * (b - a)
    x2 = a + golden * (b - a)
    f1, f2 = h(x1), h(x2)
    for _ in range(200):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - golden * (b - a)
            f1 = h(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + golden * (b - a)
            f2 = h(x2)
    best = min((f1, x1), (f2, x2))
    if best[0] < corner:
        return math.exp(best[1])
    return None


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

class VerdictKind(Enum):
    BIJECTIVE_GENERIC = "BijectiveGeneric"
    FREDHOLM_WITH_GAP = "FredholmWithGap"
    NOT_FREDHOLM = "NotFredholm"


@dataclass
class SolvabilityVerdict:
    kind: VerdictKind
    w_interval: tuple | None = None
    gap_pair: tuple | None = None
    toeplitz: ToeplitzReport | None = None
    spectral_w: float | None = None
    notes: list = field(default_factory=list)

    @property
    def bijective_up_to_nmax(self) -> bool:
        if self.kind is VerdictKind.BIJECTIVE_GENERIC:
            return True
        if self.kind is VerdictKind.FREDHOLM_WITH_GAP:
            return self.toeplitz is not None and self.toeplitz.all_invertible
        return False

    def to_json_dict(self):
        return {
            "kind": self.kind.value,
            "wInterval": None if self.w_interval is None else list(self.w_interval),
            "gapPair": None if self.gap_pair is None else list(self.gap_pair),
            "toeplitz": None if self.toeplitz is None else self.toeplitz.to_json_dict(),
            "spectralW": self.spectral_w,
            "bijectiveUpToNmax": self.bijective_up_to_nmax,
            "notes": list(self.notes),
        }


MODULI_COLLISION_TOL = 1e-10


def classify(op: Operator, s, j: int, alpha: int, n_max: int = 32,
             precision: int = 128) -> SolvabilityVerdict:
    """Root-moduli classification of the gate for (op, s, j, alpha).

    If s matches no side carrying characteristic branches the normalized
    operator is a bijection for every weight.  On a matched side, order that
    side's leaders by descending modulus (with multiplicity); the gate holds
    iff the moduli strictly drop across the corner position, and then the
    admissible weights are the inverted-moduli interval.  The finite-section
    sweep qualifies bijectivity up to ``n_max``, and the interval is
    cross-checked against the winding-based computation.
    """
    s = Fraction(s)
    validate_corner(op, s, j, alpha)
    polygon = build_polygon(op)
    side = None
    for candidate in polygon.sides:
        if candidate.gevrey_index == s and candidate.branch_count > 0:
            side = candidate
            break

    notes = []
    spectral_w = None
    try:
        spectral_w = spectral_condition(op, s, j, alpha)
    except NoContact:
        pass

    if side is None:
        # index falls strictly between sides (or on a branchless wall):
        # the symbol is a nonzero constant times a power of z
        return SolvabilityVerdict(kind=VerdictKind.BIJECTIVE_GENERIC,
                                  spectral_w=spectral_w,
                                  notes=["index matches no branch-carrying side"])

    groups = root_groups(op, precision=precision)
    group = next((g for g in groups if g.pole_order == s + 1), None)
    if group is None:
        raise MethodDisagreement(
            f"side of index {s} has no matching root group (pole order {s + 1})")

    ordered = []
    for value, mult in group.leaders:
        ordered.extend([value] * mult)
    ordered.sort(key=lambda v: (-abs(v), cmath.phase(complex(v))))

    # corner position along the side, counted from the high-t-order end
    j_left = -side.endpoints[0][1]
    gap_index = j_left - j  # in 0..branch_count

    moduli = [float(abs(v)) for v in ordered]
    lower = moduli[gap_index - 1] if gap_index >= 1 else math.inf
    upper = moduli[gap_index] if gap_index < len(moduli) else 0.0

    scale = max(moduli)
    if math.isfinite(lower) and upper > 0 and \
            abs(lower - upper) <= MODULI_COLLISION_TOL * max(scale, 1.0):
        notes.append("MODULI_COLLISION: gap endpoints coincide within tolerance")
        return SolvabilityVerdict(kind=VerdictKind.NOT_FREDHOLM,
                                  gap_pair=(lower, upper),
                                  spectral_w=spectral_w, notes=notes)
    if not lower > upper:
        notes.append("no strict modulus gap at the corner position")
        return SolvabilityVerdict(kind=VerdictKind.NOT_FREDHOLM,
                                  gap_pair=(lower, upper),
                                  spectral_w=spectral_w, notes=notes)

    w_lo = 0.0 if math.isinf(lower) else 1.0 / lower
    w_hi = math.inf if upper == 0.0 else 1.0 / upper
    _, f = toeplitz_symbol(op, s, j)
    toeplitz = toeplitz_sections(f, n_max=n_max, precision=precision)
    if not toeplitz.all_invertible:
        notes.append("some finite section is singular: not bijective")
    else:
        notes.append(f"finite sections invertible up to N={n_max} "
                     "(sweep evidence, not a proof for all N)")

    intervals = admissible_radii(op, s, j, alpha, precision=precision)
    tol = 1e-10 * max(1.0, scale)
    matched = any(
        abs(lo - w_lo) <= tol and (math.isinf(hi) and math.isinf(w_hi)
                                   or abs(hi - w_hi) <= tol)
        for lo, hi in intervals
    )
    if not matched:
        raise MethodDisagreement(
            f"gap interval ({w_lo}, {w_hi}) does not match winding intervals "
            f"{intervals}")

    return SolvabilityVerdict(kind=VerdictKind.FREDHOLM_WITH_GAP,
                              w_interval=(w_lo, w_hi),
                              gap_pair=(lower, upper),
                              toeplitz=toeplitz,
                              spectral_w=spectral_w,
                              notes=notes)

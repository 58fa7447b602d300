"""Symbolic-numeric toolkit for boundary problems of constant-coefficient
operators in two variables: exact truncated-series solvers, Newton-polygon
solvability analysis, characteristic-root expansions at infinity, and
Borel-summability diagnostics.
"""

from .errors import GoursatError
from .operators import Operator
from .parsing import (
    format_operator,
    format_series,
    format_useries,
    parse_operator,
    parse_series,
    parse_useries,
)
from .rational import RationalComplex
from .series import (
    BiSeries,
    GevreyEstimate,
    GoursatData,
    UniSeries,
    add,
    apply_operator,
    borel_transform,
    build_goursat_data,
    gevrey_estimate,
    gevrey_norm,
    moment_diff,
    multiply,
    scale,
    subtract,
)
from .newton import (
    LaurentPoly,
    NewtonPolygon,
    build_polygon,
    positive_slopes,
    principal_part,
    toeplitz_symbol,
)
from .charroots import (
    PuiseuxSeries,
    RootGroup,
    compose_simple_pole,
    invert_series,
    puiseux_expand,
    rebranch_simple_pole,
    root_groups,
    slopes_consistency,
)
from .solvability import (
    SolvabilityVerdict,
    ToeplitzReport,
    VerdictKind,
    admissible_radii,
    classify,
    spectral_condition,
    toeplitz_sections,
    winding_number,
)
from .solver import (
    GoursatProblem,
    SolveReport,
    cauchy_recursion,
    residual,
    solve_truncated,
    stabilization_check,
    two_characteristic_oracle,
)
from .borel import (
    BorelProfile,
    DirectionScan,
    GrowthClass,
    SectorSpec,
    SummabilityReport,
    borel_sum_eval,
    growth_order_fit,
    mittag_leffler,
    ml_kernel,
    moment_pseudodiff_numeric,
    moment_pseudodiff_series,
    singular_direction_scan,
    summability_verdict,
    trace_verdict,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

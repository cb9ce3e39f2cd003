"""Exact confidence intervals for the average causal effect on a binary outcome.

Completely randomized experiment, n units, m treated. All effect values,
p-values, and acceptance decisions use exact rational arithmetic.
"""

from .coverage import CoverageReport, exact_coverage_sweep
from .errors import (
    DegenerateArm,
    EmptyAcceptance,
    ExactCIError,
    InvalidLevel,
    ScaleGuard,
    SizeMismatch,
)
from .hypergeom import HyperGeomSpec, ci_count, pmf, tail_ge, tail_le
from .methods import (
    METHOD_IDS,
    MethodResult,
    ci_bonferroni,
    ci_brute_force,
    ci_margin_inversion,
    ci_one_sided,
    ci_two_sided_frontier,
    compute_ci,
    frontier_scan,
)
from .randtest import PValueMode, TestCounter, mc_p, null_dist, p_one_sided, p_two_sided
from .tables import (
    CONTROL_SIDE_MOVES,
    MOVES,
    ObservedTable,
    PotentialTable,
    TableMove,
    attainable_ntau_range,
    enumerate_compatible,
    is_compatible,
)

__version__ = "0.1.0"

__all__ = [
    "ObservedTable",
    "PotentialTable",
    "TableMove",
    "MOVES",
    "CONTROL_SIDE_MOVES",
    "is_compatible",
    "enumerate_compatible",
    "attainable_ntau_range",
    "HyperGeomSpec",
    "pmf",
    "tail_ge",
    "tail_le",
    "ci_count",
    "null_dist",
    "p_one_sided",
    "p_two_sided",
    "mc_p",
    "PValueMode",
    "TestCounter",
    "MethodResult",
    "METHOD_IDS",
    "compute_ci",
    "ci_bonferroni",
    "ci_margin_inversion",
    "ci_two_sided_frontier",
    "ci_one_sided",
    "ci_brute_force",
    "frontier_scan",
    "CoverageReport",
    "exact_coverage_sweep",
    "ExactCIError",
    "DegenerateArm",
    "SizeMismatch",
    "InvalidLevel",
    "ScaleGuard",
    "EmptyAcceptance",
]

"""Saddle points, resolvents and the proximal point algorithm on Hadamard spaces."""

from __future__ import annotations

from .errors import (
    ConfigError,
    GeodesicMinimaxError,
    GridTooLargeError,
    InvalidLambdaError,
    InvalidPointError,
    NoConvergenceError,
)
from .geometry import (
    GeodesicSpace,
    ProductSpace,
    asymptotic_center_estimate,
    check_cn_inequality,
    check_quadrilateral_cs,
    comparison_triangle,
    delta_convergence_probe,
    project_to_segment,
)
from .oracle import MinimaxReport, estimate_lipschitz, grid_minimax, oracle_vs_solver, sion_gap_study
from .ppa import (
    IterateTrace,
    Schedule,
    boundedness_verdict,
    fejer_check,
    picard_iterate,
    residual_series,
    run_ppa,
)
from .problems import SaddleProblem, bifunction, get_problem, library, saddle_residual
from .resolvent import ResolventQuery, ResolventResult, resolve, resolvent
from .spaces import EuclideanSpace, GridSpec, MetricTree, PoincareBall, TreePoint

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "GeodesicMinimaxError", "GridTooLargeError", "InvalidLambdaError",
    "InvalidPointError", "NoConvergenceError",
    "GeodesicSpace", "ProductSpace", "asymptotic_center_estimate", "check_cn_inequality",
    "check_quadrilateral_cs", "comparison_triangle", "delta_convergence_probe", "project_to_segment",
    "MinimaxReport", "estimate_lipschitz", "grid_minimax", "oracle_vs_solver", "sion_gap_study",
    "IterateTrace", "Schedule", "boundedness_verdict", "fejer_check", "picard_iterate",
    "residual_series", "run_ppa",
    "SaddleProblem", "bifunction", "get_problem", "library", "saddle_residual",
    "ResolventQuery", "ResolventResult", "resolve", "resolvent",
    "EuclideanSpace", "GridSpec", "MetricTree", "PoincareBall", "TreePoint",
]

"""Comparison-theorem checkers and their reports."""

from .global_checks import (check_linear_growth, check_myers, euclidean_excess_check, excess_bound,
                            hypersurface_distance_check, linear_growth_constant, myers_bound)
from .mean_curvature import (ode_bound_rhs, check_mc_a, check_mc_appB, check_mc_b, check_mc_basic,
                             check_mc_N, weighted_error_terms)
from .registry import CHECKS, CheckSpec, run_check
from .report import COLUMNS, CheckReport, SampleCollector
from .rigidity import RIGIDITY_MODES, run_rigidity_suite
from .volume import check_vol_a, check_vol_b, check_vol_basic, gaussian_tail_integral

__all__ = [
    "CHECKS", "CheckSpec", "run_check", "COLUMNS", "CheckReport", "SampleCollector",
    "check_mc_basic", "check_mc_a", "check_mc_b", "check_mc_appB", "check_mc_N",
    "check_vol_basic", "check_vol_a", "check_vol_b",
    "check_linear_growth", "check_myers", "euclidean_excess_check", "excess_bound",
    "hypersurface_distance_check", "linear_growth_constant", "myers_bound",
    "ode_bound_rhs", "weighted_error_terms", "gaussian_tail_integral",
    "run_rigidity_suite", "RIGIDITY_MODES",
]

"""Numerical checks of the diameter, Sobolev and covering estimates."""
from .covering import CoveringResult, greedy_cover
from .dichotomy import dichotomy_check, dichotomy_sweep, maximal_function, select_radius, volume_ratio
from .reports import FAIL, NOT_APPLICABLE, PASS, WARN, InequalityReport
from .verify import (
    cmc_bound_check,
    cover_demo,
    simon_global_check,
    simon_local_check,
    sobolev_check,
    verify_all,
    verify_diameter_bound,
)

__all__ = [
    "CoveringResult",
    "greedy_cover",
    "dichotomy_check",
    "dichotomy_sweep",
    "maximal_function",
    "select_radius",
    "volume_ratio",
    "PASS",
    "FAIL",
    "WARN",
    "NOT_APPLICABLE",
    "InequalityReport",
    "cmc_bound_check",
    "cover_demo",
    "simon_global_check",
    "simon_local_check",
    "sobolev_check",
    "verify_all",
    "verify_diameter_bound",
]

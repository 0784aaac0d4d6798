"""Diameter bounds for submanifolds from integrated mean curvature.

Subpackages: :mod:`geometry` (model spaces, meshes, curvature),
:mod:`intrinsic` (geodesic distances and ball profiles) and :mod:`lab`
(inequality checks and reports).
"""
__version__ = "0.1.0"

from .constants import (  # noqa: E402
    AdmissibilityError,
    AdmissibilityInput,
    CurvatureBound,
    check_admissibility,
    constants_bundle,
    diameter_constant,
    optimal_alpha,
    rho0,
    sobolev_constant,
    solve_delta,
    unit_ball_volume,
)
from .surfaces import generate, load_mesh  # noqa: E402

__all__ = [
    "__version__",
    "AdmissibilityError",
    "AdmissibilityInput",
    "CurvatureBound",
    "check_admissibility",
    "constants_bundle",
    "diameter_constant",
    "optimal_alpha",
    "rho0",
    "sobolev_constant",
    "solve_delta",
    "unit_ball_volume",
    "generate",
    "load_mesh",
]

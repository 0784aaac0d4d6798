"""Maximal function, volume ratio, the maximal-function/volume-ratio
dichotomy and radius selection, all evaluated on ball profiles."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..constants import AdmissibilityInput, check_admissibility, solve_delta
from ..intrinsic.distance import DEFAULT_STEINER, intrinsic_diameter
from ..intrinsic.profile import DEFAULT_GRID, ball_volume_profile

__all__ = [
    "MAXIMAL_LARGE",
    "RATIO_LARGE",
    "BOTH",
    "NEITHER",
    "DichotomyReport",
    "RadiusSelection",
    "NoRadiusError",
    "maximal_function",
    "maximal_integrand",
    "volume_ratio",
    "dichotomy_check",
    "dichotomy_sweep",
    "select_radius",
    "admissibility_of",
]

MAXIMAL_LARGE, RATIO_LARGE, BOTH, NEITHER = "MaximalLarge", "RatioLarge", "Both", "NEITHER"


class NoRadiusError(ValueError):
    code = "NO_RADIUS"


def _profile(imm, x, profile, k=DEFAULT_STEINER):
    return profile if profile is not None else ball_volume_profile(imm, x, k)


def _radii_upto(profile, R):
    r = profile.radii[profile.radii <= R]
    if len(r) == 0 or r[-1] < R:
        r = np.append(r, R)
    return r


def maximal_integrand(m, r, V, W):
    with np.errstate(divide="ignore", invalid="ignore"):
        if m == 2:
            val = W / r
        else:
            val = r ** (-1.0 / (m - 1)) * V ** (-(m - 2.0) / (m - 1)) * W
    return np.where(W > 0, val, 0.0)


def maximal_function(imm, x, R, convention="trace", profile=None):
    """``(M(x, R), argmax r)``: sup over the radius grid in ``(0, R]`` of
    ``r^(-1/(m-1)) V^(-(m-2)/(m-1)) ∫_B |H|``."""
    if not R > 0:
        raise ValueError("R must be > 0")
    p = _profile(imm, x, profile)
    r = _radii_upto(p, R)
    vals = p.evaluate(r)
    scale = 1.0 if convention == "trace" else 1.0 / p.m
    f = maximal_integrand(p.m, r, vals[:, 0], vals[:, 1] * scale)
    i = int(np.argmax(f))
    return float(f[i]), float(r[i])


def volume_ratio(imm, x, R, profile=None):
    """``(kappa(x, R), argmin r)``: inf over the radius grid of ``V / r^m``."""
    if not R > 0:
        raise ValueError("R must be > 0")
    p = _profile(imm, x, profile)
    r = _radii_upto(p, R)
    f = p.volume_at(r) / r**p.m
    i = int(np.argmin(f))
    return float(f[i]), float(r[i])


def admissibility_of(imm, alpha, volume=None):
    amb = imm.ambient
    return check_admissibility(
        AdmissibilityInput(imm.m, alpha, amb.curvature_bound(), imm.total_area if volume is None else volume,
                           amb.inj_radius)
    )


@dataclass
class DichotomyReport:
    center: int
    R: float
    delta: float
    maximal: float
    maximal_radius: float
    ratio: float
    ratio_radius: float
    verdict: str
    comparison_holds: bool | None
    admissible: bool
    convention: str
    reproduction: dict = field(default_factory=dict)

    def to_dict(self):
        return dict(self.__dict__)


def dichotomy_check(imm, x, R, alpha, convention="trace", profile=None):
    """Evaluate ``M(x,R) >= delta`` or ``kappa(x,R) > delta``.

    When ``M(x,R) < delta`` the comparison conclusion ``V(r) > delta r^m`` is
    also checked at every grid radius up to ``R``.
    """
    p = _profile(imm, x, profile)
    delta = solve_delta(p.m, alpha)
    M, rM = maximal_function(imm, x, R, convention, p)
    kappa, rk = volume_ratio(imm, x, R, p)
    big_m, big_k = M >= delta, kappa > delta
    verdict = BOTH if big_m and big_k else MAXIMAL_LARGE if big_m else RATIO_LARGE if big_k else NEITHER
    comparison = None
    if not big_m:
        r = _radii_upto(p, R)
        comparison = bool(np.all(p.volume_at(r) > delta * r**p.m))
    report = DichotomyReport(
        center=int(x), R=float(R), delta=delta, maximal=M, maximal_radius=rM, ratio=kappa,
        ratio_radius=rk, verdict=verdict, comparison_holds=comparison,
        admissible=admissibility_of(imm, alpha).admissible, convention=convention,
    )
    if verdict == NEITHER or comparison is False:
        report.reproduction = {
            "surface": imm.metadata(),
            "alpha": alpha,
            "grid_radii": len(p.radii),
            "saturation_radius": p.saturation_radius,
        }
    return report


def dichotomy_sweep(imm, alpha, n_centers=20, n_radii=16, seed=0, convention="trace",
                    k=DEFAULT_STEINER, n_grid=DEFAULT_GRID, d_int=None):
    """Dichotomy reports over random centers and ``R = d_int * i / n_radii``.

    Results are ordered by (center id, R index).
    """
    rng = np.random.default_rng(seed)
    centers = np.sort(rng.choice(imm.n_vertices, size=min(n_centers, imm.n_vertices), replace=False))
    if d_int is None:
        d_int, _ = intrinsic_diameter(imm, k)
    Rs = d_int * np.arange(1, n_radii + 1) / n_radii
    out = []
    for c in centers:
        prof = ball_volume_profile(imm, int(c), k, n_grid)
        out.extend(dichotomy_check(imm, int(c), R, alpha, convention, prof) for R in Rs)
    return out


@dataclass
class RadiusSelection:
    center: int
    radius: float
    lower_neighbor: float | None
    upper_neighbor: float | None
    value: float
    ball_integral: float


def select_radius(imm, z, R, delta, convention="trace", profile=None):
    """Smallest grid radius ``r <= R`` with maximal integrand ``>= delta``.

    Raises :class:`NoRadiusError` when ``M(z, R) < delta``.  On success the
    bound ``r <= delta^(1-m) ∫_{B(z,r)} |H|^(m-1)`` is asserted.
    """
    p = _profile(imm, z, profile)
    r = _radii_upto(p, R)
    vals = p.evaluate(r)
    scale = 1.0 if convention == "trace" else 1.0 / p.m
    W = vals[:, 1] * scale
    f = maximal_integrand(p.m, r, vals[:, 0], W)
    hits = np.flatnonzero(f >= delta)
    if len(hits) == 0:
        raise NoRadiusError(f"NO_RADIUS: maximal function {f.max():.6g} < delta {delta:.6g} at center {z}")
    i = int(hits[0])
    if p.m != 2:
        raise NotImplementedError("the |H|^(m-1) ball integral is only tabulated for surfaces")
    bound = delta ** (1 - p.m) * W[i]
    assert r[i] <= bound * (1 + 1e-12), (r[i], bound)
    return RadiusSelection(
        center=int(z),
        radius=float(r[i]),
        lower_neighbor=float(r[i - 1]) if i > 0 else None,
        upper_neighbor=float(r[i + 1]) if i + 1 < len(r) else None,
        value=float(f[i]),
        ball_integral=float(W[i]),
    )

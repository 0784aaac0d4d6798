"""Inequality verifiers.  Each returns an :class:`InequalityReport`."""
from __future__ import annotations

import math

import numpy as np

from ..constants import (
    AdmissibilityInput,
    check_admissibility,
    diameter_constant,
    sobolev_constant,
    solve_delta,
)
from ..geometry.curvature import extrinsic_ball_integrals, hm1_integral, willmore_energy
from ..intrinsic.distance import DEFAULT_STEINER, extrinsic_diameter, intrinsic_diameter, shortest_geodesic
from ..intrinsic.profile import ball_volume_profile
from .covering import greedy_cover
from .dichotomy import NoRadiusError, admissibility_of, select_radius
from .reports import NOT_APPLICABLE, InequalityReport, decide

__all__ = [
    "verify_diameter_bound",
    "sobolev_check",
    "simon_local_check",
    "simon_global_check",
    "cmc_bound_check",
    "cover_demo",
    "verify_all",
]


def verify_diameter_bound(imm, alpha, convention="trace", d_int=None, k=DEFAULT_STEINER):
    """``d_int <= C(m, alpha) ∫ |H|^(m-1) dμ`` when the volume and
    injectivity-radius conditions hold; NOT_APPLICABLE otherwise."""
    m = imm.m
    adm = admissibility_of(imm, alpha)
    if d_int is None:
        d_int, pair = intrinsic_diameter(imm, k)
    else:
        pair = None
    integral = hm1_integral(imm, m, convention)
    C = diameter_constant(m, alpha)
    rhs = C * integral
    verdict = decide(d_int, rhs) if adm.admissible else NOT_APPLICABLE
    return InequalityReport(
        name="diameter_bound",
        lhs=float(d_int),
        rhs=float(rhs),
        verdict=verdict,
        convention=convention,
        admissibility=adm.to_dict(),
        inputs={"alpha": alpha, "m": m, "C": C, "hm1_integral": integral, "volume": imm.total_area},
        surface=imm.metadata(),
        diagnostics={"extremal_pair": list(pair) if pair else None},
    )


def _cutoff_integrals(profile, r, s, p, n_panels=32, order=8):
    """``∫ h^p dμ`` and ``∫ h |H| dμ`` for the distance cutoff that is 1 on
    ``B(x, r)`` and ramps linearly to 0 over ``[r, r + s]``.

    Layer-cake: ``∫ φ(d) dμ = ∫_r^{r+s} V(ρ) (-φ'(ρ)) dρ``, evaluated with
    composite Gauss-Legendre quadrature.
    """
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(r, r + s, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    rho = (mid[:, None] + half[:, None] * xg[None]).ravel()
    w = (half[:, None] * wg[None]).ravel()
    vals = profile.evaluate(rho)
    t = 1.0 - (rho - r) / s
    hp = np.sum(w * vals[:, 0] * (p / s) * t ** (p - 1))
    h_abs_h = np.sum(w * vals[:, 1] / s)
    return float(hp), float(h_abs_h)


def sobolev_check(imm, x, r, s, alpha, convention="trace", profile=None, k=DEFAULT_STEINER):
    """Sobolev inequality for the cutoff ``h`` (1 on ``B(x,r)``, linear ramp of
    width ``s``) with constant ``c(m, alpha)``::

        (∫ h^(m/(m-1)))^((m-1)/m)  <=  c (∫ |∇h| + ∫ h |H|)

    ``∫ |∇h| = (V(r+s) - V(r)) / s``.
    """
    if not (r > 0 and s > 0):
        raise ValueError("r and s must be > 0")
    m = imm.m
    prof = profile if profile is not None else ball_volume_profile(imm, x, k)
    V_r, V_rs = prof.volume_at(np.array([r, r + s]))
    amb = imm.ambient
    adm = check_admissibility(AdmissibilityInput(m, alpha, amb.curvature_bound(), max(V_rs, 1e-300), amb.inj_radius))
    p = m / (m - 1)
    hp, h_abs_h = _cutoff_integrals(prof, r, s, p)
    if convention == "average":
        h_abs_h /= m
    lhs = hp ** ((m - 1) / m)
    grad = (V_rs - V_r) / s
    c = sobolev_constant(m, alpha)
    rhs = c * (grad + h_abs_h)
    return InequalityReport(
        name="sobolev",
        lhs=lhs,
        rhs=rhs,
        verdict=decide(lhs, rhs) if adm.admissible else NOT_APPLICABLE,
        convention=convention,
        admissibility=adm.to_dict(),
        inputs={"center": int(x), "r": r, "s": s, "alpha": alpha, "c": c},
        surface=imm.metadata(),
        diagnostics={"grad_integral": grad, "h_H_integral": h_abs_h, "support_volume": float(V_rs)},
    )


def simon_local_check(imm, x, r, near_equality_tol=0.0):
    """``pi <= A_ext(x,r)/r^2 + 1/4 ∫_{B_ext(x,r)} |H|^2`` (average convention).

    Closed surfaces in any Euclidean space.
    """
    if not imm.ambient.is_flat:
        raise ValueError("the local area/curvature estimate needs a flat ambient space")
    h = imm.mean_curvature("average").magnitudes
    center = imm.vertices[int(x)]
    area, (w,) = extrinsic_ball_integrals(imm, center, r, densities=[h**2])
    rhs = area / r**2 + 0.25 * w
    return InequalityReport(
        name="simon_local",
        lhs=math.pi,
        rhs=rhs,
        verdict=decide(math.pi, rhs, tol=near_equality_tol),
        convention="average",
        tolerance=near_equality_tol,
        inputs={"center": int(x), "r": r},
        surface=imm.metadata(),
        diagnostics={"area_ratio": area / r**2, "willmore_term": 0.25 * w},
    )


def simon_global_check(imm):
    """``d_ext < (2/pi) sqrt(Area ∫ |H|^2)`` (average convention, strict).

    Closed surfaces in any Euclidean space.
    """
    if not imm.ambient.is_flat:
        raise ValueError("the extrinsic diameter estimate needs a flat ambient space")
    d_ext = extrinsic_diameter(imm)
    W = willmore_energy(imm, "average")
    rhs = 2.0 / math.pi * math.sqrt(imm.total_area * W)
    return InequalityReport(
        name="simon_global",
        lhs=d_ext,
        rhs=rhs,
        verdict=decide(d_ext, rhs, strict=True),
        strict=True,
        convention="average",
        surface=imm.metadata(),
        diagnostics={"area": imm.total_area, "willmore": W},
    )


def cmc_bound_check(imm, constancy_tol=0.02, equality_tol=0.02):
    """``d_ext <= Area |H| / (2 pi)`` for (numerically) constant |H|.

    NOT_APPLICABLE when the relative spread of |H| exceeds ``constancy_tol``.
    Spheres are the equality case, so an excess within ``equality_tol`` is a
    WARN tie rather than a failure.
    """
    if not imm.ambient.is_flat or imm.ambient.n != 3:
        raise ValueError("the constant-mean-curvature bound is for surfaces in R^3")
    h = imm.mean_curvature("average").magnitudes
    mean_h = float(np.sum(h * imm.dual_areas) / imm.total_area)
    spread = float((h.max() - h.min()) / mean_h) if mean_h > 0 else math.inf
    d_ext = extrinsic_diameter(imm)
    rhs = imm.total_area * mean_h / (2.0 * math.pi)
    verdict = decide(d_ext, rhs, tol=equality_tol) if spread <= constancy_tol else NOT_APPLICABLE
    return InequalityReport(
        name="cmc_bound",
        lhs=d_ext,
        rhs=rhs,
        verdict=verdict,
        convention="average",
        tolerance=equality_tol,
        inputs={"constancy_tol": constancy_tol},
        surface=imm.metadata(),
        diagnostics={"mean_H": mean_h, "relative_spread": spread},
    )


def cover_demo(imm, alpha, convention="trace", k=DEFAULT_STEINER, pair=None, max_candidates=None):
    """Run the covering argument along a shortest geodesic between extremal points.

    ``R`` is chosen with ``Vol(M) < delta R^m`` so every center has
    ``M(z, R) >= delta``; each path node gets its selected radius ``r(z)``.
    The greedy Vitali cover covers a fraction ``rho`` of the geodesic by the
    dilated balls ``B(z_i, 3 r_i)``, hence ``rho d_int <= 3 Σ 2 r_i`` and
    ``d_int <= (6 / rho) delta^(1-m) ∫ |H|^(m-1)``.
    """
    m = imm.m
    delta = solve_delta(m, alpha)
    if pair is None:
        _, pair = intrinsic_diameter(imm, k)
    geo = shortest_geodesic(imm, pair[0], pair[1], k)
    R = 1.01 * (imm.total_area / delta) ** (1.0 / m)
    nodes = geo.nodes
    idx = np.arange(len(nodes))
    if max_candidates is not None and len(nodes) > max_candidates:
        idx = np.unique(np.linspace(0, len(nodes) - 1, max_candidates).round().astype(int))
    radii, picks, failures = [], [], []
    for i in idx:
        z = int(nodes[i])
        try:
            sel = select_radius(imm, z, R, delta, convention, ball_volume_profile(imm, z, k))
        except NoRadiusError:
            failures.append(z)
            continue
        picks.append(i)
        radii.append(sel.radius)
    out = {
        "alpha": alpha,
        "delta": delta,
        "R": R,
        "extremal_pair": [int(pair[0]), int(pair[1])],
        "geodesic_length": geo.length,
        "candidates": len(picks),
        "no_radius": failures,
        "cover": None,
    }
    if not picks:
        return out
    cover = greedy_cover(geo.arclength[picks], np.array(radii), length=geo.length)
    rho = cover.covered_fraction
    hm1 = hm1_integral(imm, m, convention)
    out.update(
        cover=cover,
        sum_r=float(np.sum(cover.radii)),
        bound_from_cover=3.0 * cover.sum_diameters / rho if rho > 0 else math.inf,
        bound_final=6.0 / rho * delta ** (1 - m) * hm1 if rho > 0 else math.inf,
    )
    return out


def verify_all(imm, alpha, convention="trace", k=DEFAULT_STEINER, n_sobolev=1, seed=0, d_int=None):
    """Every applicable inequality report for one surface."""
    reports = [verify_diameter_bound(imm, alpha, convention, d_int=d_int, k=k)]
    rng = np.random.default_rng(seed)
    if d_int is None:
        d_int = reports[0].lhs
    centers = rng.choice(imm.n_vertices, size=min(n_sobolev, imm.n_vertices), replace=False)
    for c in sorted(int(c) for c in centers):
        prof = ball_volume_profile(imm, c, k)
        r = float(rng.uniform(0.05, 0.35) * d_int)
        s = float(rng.uniform(0.02, 0.2) * d_int)
        reports.append(sobolev_check(imm, c, r, s, alpha, convention, prof))
    if imm.ambient.is_flat:
        c = int(rng.integers(imm.n_vertices))
        reports.append(simon_local_check(imm, c, float(rng.uniform(0.1, 1.0) * d_int)))
        reports.append(simon_global_check(imm))
        if imm.ambient.n == 3:
            reports.append(cmc_bound_check(imm))
    return reports

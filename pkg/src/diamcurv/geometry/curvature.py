"""Mean curvature fields and the surface integrals built from them."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clipping import disk_triangle_area
from .mesh import MeshError

__all__ = [
    "MeanCurvatureField",
    "FundamentalForms",
    "cotan_mean_curvature_vectors",
    "mean_curvature_mesh",
    "fundamental_forms",
    "fundamental_forms_all",
    "hm1_integral",
    "willmore_energy",
    "total_area",
    "extrinsic_ball_area",
    "extrinsic_ball_integrals",
    "CONVENTIONS",
]

CONVENTIONS = ("trace", "average")


def _check_convention(convention):
    convention = str(convention).lower()
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    return convention


class MeanCurvatureField:
    """Per-sample mean curvature vectors.

    ``trace`` is the sum of principal curvatures, ``average`` the trace
    divided by the dimension ``m``.  Magnitudes of the averaged field are
    the trace magnitudes divided by ``m`` exactly.
    """

    def __init__(self, vectors, convention, m, ambient, magnitudes=None):
        self.vectors = np.asarray(vectors, dtype=float)
        self.convention = _check_convention(convention)
        self.m = m
        self.ambient = ambient
        self.magnitudes = ambient.norm(self.vectors) if magnitudes is None else magnitudes

    def with_convention(self, convention):
        convention = _check_convention(convention)
        if convention == self.convention:
            return self
        factor = 1.0 / self.m if convention == "average" else float(self.m)
        return MeanCurvatureField(
            self.vectors * factor, convention, self.m, self.ambient, self.magnitudes * factor
        )

    def __len__(self):
        return len(self.magnitudes)


def cotan_mean_curvature_vectors(imm):
    """Cotangent Laplacian of the embedding divided by the mixed dual area.

    For a smooth surface this converges to the trace mean curvature vector
    (``(k1 + k2) * unit normal``, pointing to the concave side).
    """
    if not imm.ambient.is_flat:
        raise ValueError("the cotangent discretisation needs a flat ambient space")
    x = imm.vertices
    f = imm.faces
    cot = imm.cotangents
    lap = np.zeros_like(x)
    for k in range(3):
        i, j = f[:, (k + 1) % 3], f[:, (k + 2) % 3]
        w = cot[:, k][:, None] * (x[j] - x[i])
        np.add.at(lap, i, w)
        np.add.at(lap, j, -w)
    return lap / (2.0 * imm.dual_areas[:, None])


def mean_curvature_mesh(imm):
    """Trace-convention mean curvature of a flat-ambient mesh."""
    return MeanCurvatureField(cotan_mean_curvature_vectors(imm), "trace", imm.m, imm.ambient)


@dataclass
class FundamentalForms:
    """Chart derivatives at a batch of nodes.

    ``first`` is (N, 2, 2); ``second`` is (N, 3, D) holding the normal
    (relative to N) second-form vectors for ``uu``, ``uv``, ``vv``.
    """

    points: np.ndarray
    tangents: np.ndarray
    first: np.ndarray
    second: np.ndarray

    def mean_curvature_vectors(self):
        g = self.first
        det = g[:, 0, 0] * g[:, 1, 1] - g[:, 0, 1] ** 2
        II = self.second
        num = g[:, 1, 1, None] * II[:, 0] - 2.0 * g[:, 0, 1, None] * II[:, 1] + g[:, 0, 0, None] * II[:, 2]
        return num / det[:, None]


_W1 = {-2: 1.0, -1: -8.0, 1: 8.0, 2: -1.0}  # fourth-order first derivative, / 12h
_W2 = {-2: -1.0, -1: 16.0, 0: -30.0, 1: 16.0, 2: -1.0}  # fourth-order second derivative, / 12h^2
MAX_FD_STEP = 1e-2


def fundamental_forms_all(imm, nodes=None, step_scale=1.0):
    """First and second fundamental forms of a :class:`ParametricImmersion`.

    Fourth-order central differences with step ``min(cell, 1e-2)`` in each
    chart coordinate (truncation error ~1e-10 for unit-scale charts).
    Second derivatives in the flat (or Minkowski) coordinate space are
    projected onto the tangent space of the model space N, then onto the
    normal space of M in N.
    """
    amb = imm.ambient
    nodes = np.arange(imm.n_vertices) if nodes is None else np.atleast_1d(nodes)
    hs, ht = (min(s, MAX_FD_STEP) * step_scale for s in imm.steps)
    cache = {}

    def X(i, j):
        if (i, j) not in cache:
            cache[i, j] = imm.local_chart(nodes, i * hs, j * ht)
        return cache[i, j]

    x0 = X(0, 0)
    Xs = sum(w * X(i, 0) for i, w in _W1.items()) / (12 * hs)
    Xt = sum(w * X(0, j) for j, w in _W1.items()) / (12 * ht)
    Xss = sum(w * X(i, 0) for i, w in _W2.items()) / (12 * hs**2)
    Xtt = sum(w * X(0, j) for j, w in _W2.items()) / (12 * ht**2)
    Xst = sum(wi * wj * X(i, j) for i, wi in _W1.items() for j, wj in _W1.items()) / (144 * hs * ht)

    Xs = amb.tangent_projection(x0, Xs)
    Xt = amb.tangent_projection(x0, Xt)
    g = np.empty((len(nodes), 2, 2))
    g[:, 0, 0] = amb.inner(Xs, Xs)
    g[:, 0, 1] = g[:, 1, 0] = amb.inner(Xs, Xt)
    g[:, 1, 1] = amb.inner(Xt, Xt)
    det = g[:, 0, 0] * g[:, 1, 1] - g[:, 0, 1] ** 2
    if np.any(det <= 1e-12):
        raise MeshError("SINGULAR_METRIC", f"det(g) <= 1e-12 at {int(np.sum(det <= 1e-12))} nodes")
    ginv = np.stack(
        [np.stack([g[:, 1, 1], -g[:, 0, 1]], -1), np.stack([-g[:, 0, 1], g[:, 0, 0]], -1)], 1
    ) / det[:, None, None]

    def normal_part(w):
        w = amb.tangent_projection(x0, w)
        a = amb.inner(w, Xs)
        b = amb.inner(w, Xt)
        cs = ginv[:, 0, 0] * a + ginv[:, 0, 1] * b
        ct = ginv[:, 1, 0] * a + ginv[:, 1, 1] * b
        return w - cs[:, None] * Xs - ct[:, None] * Xt

    second = np.stack([normal_part(Xss), normal_part(Xst), normal_part(Xtt)], axis=1)
    return FundamentalForms(x0, np.stack([Xs, Xt], axis=1), g, second)


def fundamental_forms(imm, node):
    """First form (2x2) and second-form vectors (3, D) at one chart node."""
    forms = fundamental_forms_all(imm, [node])
    return forms.first[0], forms.second[0]


# ------------------------------------------------------------------ integrals


def hm1_integral(imm, m=None, convention="trace"):
    """``∫_M |H|^(m-1) dμ`` by dual-area quadrature."""
    m = imm.m if m is None else m
    h = imm.mean_curvature(convention).magnitudes
    return float(np.sum(imm.dual_areas * h ** (m - 1)))


def willmore_energy(imm, convention="trace"):
    """``∫_M |H|^2 dμ``."""
    h = imm.mean_curvature(convention).magnitudes
    return float(np.sum(imm.dual_areas * h**2))


def total_area(imm):
    return imm.total_area


def _face_planes(imm):
    v = imm.vertices[imm.faces]
    o = v[:, 0]
    e1 = v[:, 1] - o
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    w = v[:, 2] - o
    e2 = w - np.sum(w * e1, axis=1, keepdims=True) * e1
    e2 /= np.linalg.norm(e2, axis=1, keepdims=True)
    return o, e1, e2


def extrinsic_ball_integrals(imm, center, r, densities=()):
    """Area of ``{p in M : |p - center| < r}`` and integrals of per-vertex
    ``densities`` over it.

    Each triangle is cut exactly by the plane section of the ball (a disk);
    densities are taken constant per face (mean of its vertex values).
    """
    if not imm.ambient.is_flat:
        raise ValueError("extrinsic balls need a flat ambient space")
    if r <= 0:
        return 0.0, [0.0 for _ in densities]
    center = np.asarray(center, dtype=float)
    o, e1, e2 = _face_planes(imm)
    rel = center - o
    cu = np.sum(rel * e1, axis=1)
    cv = np.sum(rel * e2, axis=1)
    dist2 = np.sum(rel * rel, axis=1) - cu**2 - cv**2
    rad2 = r * r - np.maximum(dist2, 0.0)
    hit = rad2 > 0
    v = imm.vertices[imm.faces[hit]]
    tri = np.stack(
        [np.sum((v - o[hit, None]) * e1[hit, None], axis=2), np.sum((v - o[hit, None]) * e2[hit, None], axis=2)],
        axis=2,
    )
    areas = disk_triangle_area(np.stack([cu[hit], cv[hit]], axis=1), np.sqrt(rad2[hit]), tri)
    # clamp round-off in the disk/triangle clip
    planar = 0.5 * np.abs(
        (tri[:, 1, 0] - tri[:, 0, 0]) * (tri[:, 2, 1] - tri[:, 0, 1])
        - (tri[:, 2, 0] - tri[:, 0, 0]) * (tri[:, 1, 1] - tri[:, 0, 1])
    )
    areas = np.minimum(areas, planar)
    out = []
    for dens in densities:
        fd = np.asarray(dens, dtype=float)[imm.faces[hit]].mean(axis=1)
        out.append(float(np.sum(areas * fd)))
    return float(areas.sum()), out


def extrinsic_ball_area(imm, center, r):
    """``A_ext(x, r)``: area of the part of M inside the open ambient ball."""
    return extrinsic_ball_integrals(imm, center, r)[0]

"""Exact area of planar regions cut out of triangles.

Two primitives back every ball/area computation:

* :func:`disk_triangle_area` -- area of a disk intersected with a triangle.
* :class:`SublevelSweep` -- area (optionally weighted) of ``{f < r}`` for a
  function ``f`` that is linear on each triangle, evaluated for many ``r``
  at once via a piecewise-quadratic event sweep.
"""
from __future__ import annotations

import numpy as np

__all__ = ["disk_triangle_area", "SublevelSweep"]


def _segment_disk_area(p, q, r):
    """Signed area of disk(0, r) intersected with triangle (0, p, q).

    ``p``, ``q`` have shape (..., 2); ``r`` broadcasts against ``p[..., 0]``.
    """
    d = q - p
    a = np.sum(d * d, axis=-1)
    b = np.sum(p * d, axis=-1)
    c = np.sum(p * p, axis=-1) - r * r
    disc = b * b - a * c
    sq = np.sqrt(np.maximum(disc, 0.0))
    safe_a = np.where(a > 0, a, 1.0)
    t1 = np.where(disc > 0, (-b - sq) / safe_a, 1.0)
    t2 = np.where(disc > 0, (-b + sq) / safe_a, 1.0)
    s1 = np.clip(t1, 0.0, 1.0)
    s2 = np.clip(t2, 0.0, 1.0)

    def point(s):
        return p + s[..., None] * d

    def tri(u, v):
        return 0.5 * (u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0])

    def sector(u, v):
        cross = u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]
        dot = np.sum(u * v, axis=-1)
        return 0.5 * r * r * np.arctan2(cross, dot)

    A, B = point(s1), point(s2)
    return sector(p, A) + tri(A, B) + sector(B, q)


def disk_triangle_area(center, radius, triangle):
    """Area of ``disk(center, radius) ∩ triangle`` in the plane.

    Parameters
    ----------
    center : (..., 2)
    radius : array broadcastable to the batch shape
    triangle : (..., 3, 2)
    """
    tri = np.asarray(triangle, dtype=float) - np.asarray(center, dtype=float)[..., None, :]
    r = np.asarray(radius, dtype=float)
    total = 0.0
    for i in range(3):
        total = total + _segment_disk_area(tri[..., i, :], tri[..., (i + 1) % 3, :], r)
    return np.abs(total)


class SublevelSweep:
    """Weighted area of ``{y : f(y) < r}`` over a set of triangles on which
    ``f`` is linear, as an exact piecewise-quadratic function of ``r``.

    Parameters
    ----------
    values : (T, 3) array
        ``f`` at the triangle corners.
    areas : (T,) array
    weights : (T, K) array, optional
        Per-triangle densities; the sweep returns one column per density
        (area itself is always column 0).
    """

    def __init__(self, values, areas, weights=None):
        values = np.sort(np.asarray(values, dtype=float), axis=1)
        areas = np.asarray(areas, dtype=float)
        cols = [np.ones_like(areas)]
        if weights is not None:
            w = np.asarray(weights, dtype=float)
            cols.extend(w.T if w.ndim == 2 else [w])
        W = np.stack(cols, axis=1) * areas[:, None]  # (T, K)
        d0, d1, d2 = values[:, 0], values[:, 1], values[:, 2]
        span = d2 - d0
        tiny = 1e-9 * np.maximum(span, 1e-300)
        flat0 = (d1 - d0) <= tiny  # lower piece collapses
        flat1 = (d2 - d1) <= tiny  # upper piece collapses
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            k1 = np.where(flat0, 0.0, 1.0 / ((d1 - d0) * span))
            k2 = np.where(flat1, 0.0, 1.0 / ((d2 - d1) * span))
        k1 = np.where(span <= 0, 0.0, k1)
        k2 = np.where(span <= 0, 0.0, k2)
        # lower piece:  k1 (r - d0)^2          on (d0, d1]
        # upper piece:  1 - k2 (d2 - r)^2      on (d1, d2]
        # then 1 for r > d2
        q1 = np.stack([k1, -2.0 * k1 * d0, k1 * d0 * d0], axis=1)
        q2 = np.stack([-k2, 2.0 * k2 * d2, 1.0 - k2 * d2 * d2], axis=1)
        q2 = np.where(flat1[:, None], 0.0, q2)
        one = np.zeros_like(q1)
        one[:, 2] = 1.0
        times = np.concatenate([d0, d1, d1, d2, d2])
        polys = np.concatenate([q1, -q1, q2, -q2, one])  # (5T, 3)
        Wrep = np.tile(W, (5, 1))  # (5T, K)
        order = np.argsort(times, kind="stable")
        self.times = times[order]
        coef = polys[order][:, :, None] * Wrep[order][:, None, :]  # (5T, 3, K)
        self._cum = np.cumsum(coef, axis=0)
        self.total = W.sum(axis=0)
        self.max_value = float(values[:, 2].max()) if len(values) else 0.0

    def __call__(self, r):
        """Weighted areas at radii ``r``; shape ``r.shape + (K,)``."""
        r = np.asarray(r, dtype=float)
        idx = np.searchsorted(self.times, r.ravel(), side="left")
        out = np.zeros((idx.size, self._cum.shape[2]))
        has = idx > 0
        c = self._cum[idx[has] - 1]  # (n, 3, K)
        rr = r.ravel()[has][:, None]
        out[has] = c[:, 0] * rr * rr + c[:, 1] * rr + c[:, 2]
        full = r.ravel() > self.max_value
        out[full] = self.total
        # round-off guard: the sweep is monotone in r for non-negative weights
        out = np.clip(out, 0.0, self.total)
        return out.reshape(r.shape + (out.shape[1],))

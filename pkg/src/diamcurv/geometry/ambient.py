"""Constant-curvature model spaces realised inside a flat coordinate space.

* ``flat``: R^n with the Euclidean dot product.
* ``sphere``: the round n-sphere of radius ``1/b`` in R^(n+1), curvature ``b**2``.
* ``hyperbolic``: the upper sheet ``<x, x>_L = -1/beta**2, x_0 > 0`` in
  Minkowski space R^(n,1), curvature ``-beta**2``.  The time-like coordinate
  is stored first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..constants import CurvatureBound

__all__ = ["AmbientSpace"]


@dataclass(frozen=True)
class AmbientSpace:
    kind: str
    n: int
    curvature: float = 0.0  # b for sphere, beta for hyperbolic

    def __post_init__(self):
        if self.kind not in ("flat", "sphere", "hyperbolic"):
            raise ValueError(f"unknown ambient kind {self.kind!r}")
        if self.n < 2:
            raise ValueError("ambient dimension must be >= 2")
        if self.kind != "flat" and not self.curvature > 0:
            raise ValueError("curvature parameter must be > 0 for curved model spaces")

    @classmethod
    def flat(cls, n=3):
        return cls("flat", n)

    @classmethod
    def round_sphere(cls, n=3, b=1.0):
        return cls("sphere", n, float(b))

    @classmethod
    def hyperbolic_space(cls, n=3, beta=1.0):
        return cls("hyperbolic", n, float(beta))

    @property
    def embedding_dim(self):
        return self.n if self.kind == "flat" else self.n + 1

    @property
    def is_flat(self):
        return self.kind == "flat"

    @property
    def inj_radius(self):
        """Injectivity radius of the model space (restricted to any subset)."""
        return math.pi / self.curvature if self.kind == "sphere" else math.inf

    def curvature_bound(self):
        if self.kind == "sphere":
            return CurvatureBound.positive(self.curvature)
        if self.kind == "hyperbolic":
            return CurvatureBound.imaginary(self.curvature)
        return CurvatureBound.zero()

    # metric of the coordinate space -----------------------------------------
    def inner(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        prod = a * b
        if self.kind == "hyperbolic":
            return prod[..., 1:].sum(axis=-1) - prod[..., 0]
        return prod.sum(axis=-1)

    def norm(self, v):
        # clamp: chords on the hyperboloid are space-like but can round to -0
        return np.sqrt(np.maximum(self.inner(v, v), 0.0))

    def constraint_residual(self, x):
        """Deviation of points from the model-space equation (0 for flat)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "sphere":
            return self.inner(x, x) - 1.0 / self.curvature**2
        if self.kind == "hyperbolic":
            return self.inner(x, x) + 1.0 / self.curvature**2
        return np.zeros(x.shape[:-1])

    def tangent_projection(self, x, w):
        """Project coordinate vectors ``w`` onto the tangent space of N at ``x``."""
        x = np.asarray(x, dtype=float)
        w = np.asarray(w, dtype=float)
        if self.kind == "flat":
            return w
        k2 = self.curvature**2
        coef = self.inner(w, x) * k2
        if self.kind == "hyperbolic":
            coef = -coef
        return w - coef[..., None] * x

    def distance(self, x, y):
        """Ambient geodesic distance between points of N."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.kind == "flat":
            return np.linalg.norm(x - y, axis=-1)
        k = self.curvature
        if self.kind == "sphere":
            return np.arccos(np.clip(self.inner(x, y) * k * k, -1.0, 1.0)) / k
        return np.arccosh(np.maximum(-self.inner(x, y) * k * k, 1.0)) / k

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "curvature": self.curvature}

"""Discretised closed immersed surfaces.

All intrinsic quantities (areas, angles, dual areas, face layouts) are
computed from edge lengths measured with the ambient metric, so the same
code serves surfaces in Euclidean space, on the round sphere (chords in
R^(n+1)) and on the hyperboloid (Minkowski chords).
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .ambient import AmbientSpace
from .mesh import MeshError, validate_topology

__all__ = ["TriangleMeshImmersion", "ParametricImmersion", "build_mesh"]


class TriangleMeshImmersion:
    """Closed, connected, consistently oriented triangle mesh in an ambient
    model space.

    Parameters
    ----------
    vertices : (N, D) array
        Vertex positions in the ambient coordinate space.
    faces : (F, 3) int array
    ambient : AmbientSpace, optional
        Defaults to flat space of dimension ``D``.
    name : str, optional
        Label echoed in reports.
    """

    m = 2

    def __init__(self, vertices, faces, ambient=None, name="mesh", params=None):
        self.vertices = np.ascontiguousarray(vertices, dtype=float)
        self.faces = np.ascontiguousarray(faces, dtype=np.int64)
        if self.vertices.ndim != 2:
            raise MeshError("BAD_INDEX", "vertices must be an (N, D) array")
        if ambient is None:
            ambient = AmbientSpace.flat(self.vertices.shape[1])
        if ambient.embedding_dim != self.vertices.shape[1]:
            raise ValueError(
                f"ambient {ambient.kind} expects {ambient.embedding_dim} coordinates, "
                f"got {self.vertices.shape[1]}"
            )
        self.ambient = ambient
        self.name = name
        self.params = dict(params or {})
        self.edges, self.face_edges = validate_topology(len(self.vertices), self.faces)
        areas = self.face_areas
        if np.any(areas < 1e-14 * areas.mean()):
            raise MeshError("DEGENERATE_TRIANGLE", f"{int(np.sum(areas < 1e-14 * areas.mean()))} faces")
        self._fields = {}

    def __repr__(self):
        return (
            f"{type(self).__name__}(name={self.name!r}, n_vertices={self.n_vertices}, "
            f"n_faces={len(self.faces)}, ambient={self.ambient.kind})"
        )

    @property
    def n_vertices(self):
        return len(self.vertices)

    # ------------------------------------------------------------ metric data
    @cached_property
    def edge_lengths(self):
        v = self.vertices
        return self.ambient.norm(v[self.edges[:, 1]] - v[self.edges[:, 0]])

    @cached_property
    def lengths(self):
        """(F, 3) lengths; column k is the side opposite local vertex k."""
        return self.edge_lengths[self.face_edges]

    @cached_property
    def face_areas(self):
        # Kahan's cancellation-safe Heron formula
        s = np.sort(self.lengths, axis=1)[:, ::-1]
        a, b, c = s[:, 0], s[:, 1], s[:, 2]
        prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
        return 0.25 * np.sqrt(np.maximum(prod, 0.0))

    @cached_property
    def cotangents(self):
        """(F, 3) cotangent of the interior angle at each local vertex."""
        L2 = self.lengths**2
        num = L2[:, [1, 2, 0]] + L2[:, [2, 0, 1]] - L2
        return num / (4.0 * self.face_areas[:, None])

    @cached_property
    def face_layout(self):
        """(F, 3, 2) isometric planar layout of every face."""
        L = self.lengths
        x = (L[:, 1] ** 2 + L[:, 2] ** 2 - L[:, 0] ** 2) / (2.0 * L[:, 2])
        y = 2.0 * self.face_areas / L[:, 2]
        out = np.zeros((len(self.faces), 3, 2))
        out[:, 1, 0] = L[:, 2]
        out[:, 2, 0] = x
        out[:, 2, 1] = y
        return out

    @cached_property
    def dual_areas(self):
        """Mixed Voronoi vertex areas (Meyer et al.), safe for obtuse faces."""
        L2 = self.lengths**2
        cot = self.cotangents
        A = self.face_areas
        vor = np.empty_like(L2)
        for k in range(3):
            j, l = (k + 1) % 3, (k + 2) % 3
            vor[:, k] = (L2[:, j] * cot[:, j] + L2[:, l] * cot[:, l]) / 8.0
        obtuse = cot < 0.0
        any_obtuse = obtuse.any(axis=1)
        vor[any_obtuse] = (A[any_obtuse] / 4.0)[:, None]
        vor[obtuse] = np.repeat(A[:, None], 3, axis=1)[obtuse] / 2.0
        out = np.zeros(self.n_vertices)
        np.add.at(out, self.faces.ravel(), vor.ravel())
        return out

    @cached_property
    def total_area(self):
        return float(self.face_areas.sum())

    @cached_property
    def vertex_neighbors(self):
        """CSR-style (indptr, indices) vertex adjacency."""
        e = self.edges
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        indptr = np.searchsorted(rows, np.arange(self.n_vertices + 1))
        return indptr, cols

    # ------------------------------------------------------------ curvature
    def _trace_mean_curvature_vectors(self):
        from .curvature import cotan_mean_curvature_vectors

        return cotan_mean_curvature_vectors(self)

    def mean_curvature(self, convention="trace"):
        """Per-vertex mean curvature field (cached)."""
        from .curvature import MeanCurvatureField

        if "trace" not in self._fields:
            self._fields["trace"] = MeanCurvatureField(
                self._trace_mean_curvature_vectors(), "trace", self.m, self.ambient
            )
        return self._fields["trace"].with_convention(convention)

    # ------------------------------------------------------------ transforms
    def scaled(self, factor):
        """Copy with all coordinates multiplied by ``factor`` (flat ambient only)."""
        if not self.ambient.is_flat:
            raise ValueError("scaling is only defined for flat ambient spaces")
        params = dict(self.params, scale=self.params.get("scale", 1.0) * factor)
        return TriangleMeshImmersion(self.vertices * factor, self.faces, self.ambient, self.name, params)

    def metadata(self):
        return {
            "name": self.name,
            "params": self.params,
            "ambient": self.ambient.to_dict(),
            "n_vertices": int(self.n_vertices),
            "n_faces": int(len(self.faces)),
        }


class ParametricImmersion(TriangleMeshImmersion):
    """Surface given by a smooth chart map, sampled on a tessellated domain.

    The domain is either the flat torus (``domain="torus"``: parameters
    ``(u, v)`` on a periodic grid with cell sizes ``steps``) or the unit
    2-sphere (``domain="sphere"``: parameters are unit 3-vectors, local
    charts ``(s, t) -> normalize(p + s e1 + t e2)``).  The mean curvature is
    taken from finite-difference fundamental forms of the chart, not from the
    mesh.

    Parameters
    ----------
    chart : callable
        Vectorised map ``(..., P) -> (..., D)`` into ambient coordinates.
    domain_points : (N, P) array
        Parameter of every vertex.
    faces : (F, 3) int array
    ambient : AmbientSpace
    domain : {"torus", "sphere"}
    steps : tuple of float
        Finite-difference steps of the two local chart coordinates.
    """

    def __init__(self, chart, domain_points, faces, ambient, domain, steps, name="parametric", params=None):
        if domain not in ("torus", "sphere"):
            raise ValueError(f"unknown parameter domain {domain!r}")
        self.chart = chart
        self.domain = domain
        self.domain_points = np.asarray(domain_points, dtype=float)
        self.steps = tuple(float(s) for s in steps)
        super().__init__(chart(self.domain_points), faces, ambient, name, params)

    def local_chart(self, nodes, s, t):
        """Evaluate the local chart around ``nodes`` at offsets ``(s, t)``."""
        p = self.domain_points[nodes]
        if self.domain == "torus":
            q = p + np.stack([np.broadcast_to(s, p.shape[:-1]), np.broadcast_to(t, p.shape[:-1])], axis=-1)
            return self.chart(q)
        e1, e2 = self._sphere_frames[0][nodes], self._sphere_frames[1][nodes]
        q = p + np.asarray(s)[..., None] * e1 + np.asarray(t)[..., None] * e2
        q /= np.linalg.norm(q, axis=-1, keepdims=True)
        return self.chart(q)

    @cached_property
    def _sphere_frames(self):
        p = self.domain_points
        helper = np.where(np.abs(p[:, [0]]) < 0.9, [[1.0, 0.0, 0.0]], [[0.0, 1.0, 0.0]])
        e1 = helper - np.sum(helper * p, axis=1, keepdims=True) * p
        e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
        e2 = np.cross(p, e1)
        return e1, e2

    def _trace_mean_curvature_vectors(self):
        from .curvature import fundamental_forms_all

        forms = fundamental_forms_all(self)
        return forms.mean_curvature_vectors()

    def scaled(self, factor):
        if not self.ambient.is_flat:
            raise ValueError("scaling is only defined for flat ambient spaces")
        chart = self.chart
        params = dict(self.params, scale=self.params.get("scale", 1.0) * factor)
        return ParametricImmersion(
            lambda q: factor * chart(q), self.domain_points, self.faces, self.ambient,
            self.domain, self.steps, self.name, params,
        )


def build_mesh(positions, triangles, ambient=None, name="mesh"):
    """Validate and wrap a triangle mesh (raises :class:`MeshError`)."""
    return TriangleMeshImmersion(positions, triangles, ambient=ambient, name=name)

"""Steiner-augmented edge graph of a triangle mesh.

Every mesh edge carries ``k`` equally spaced Steiner points; inside each
face all boundary points (3 corners + 3k Steiner points) are joined by
straight segments measured in the face's planar layout.  The same points,
together with the interior nodes of the order-(k+1) barycentric lattice,
subdivide every face into ``(k+1)**2`` congruent sub-triangles on which the
distance function is interpolated linearly.
"""
from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix

__all__ = ["SteinerGraph", "steiner_graph"]


def _lattice(n):
    """Barycentric lattice of order n: (i, j) pairs and sub-triangle triples."""
    pts = [(i, j) for i in range(n + 1) for j in range(n + 1 - i)]
    index = {p: a for a, p in enumerate(pts)}
    tris = []
    for i in range(n):
        for j in range(n - i):
            tris.append((index[i, j], index[i + 1, j], index[i, j + 1]))
            if i + j < n - 1:
                tris.append((index[i + 1, j], index[i + 1, j + 1], index[i, j + 1]))
    return np.array(pts, dtype=float), np.array(tris, dtype=np.int64)


class SteinerGraph:
    def __init__(self, imm, k=3):
        if k < 0:
            raise ValueError("number of Steiner points must be >= 0")
        self.k = k
        n = k + 1
        self.order = n
        N, E, F = imm.n_vertices, len(imm.edges), len(imm.faces)
        self.n_vertices = N
        self.n_nodes = N + E * k
        faces, edges = imm.faces, imm.edges
        layout = imm.face_layout  # (F, 3, 2)

        lat_ij, self.sub_tris = _lattice(n)
        self.lattice_bary = np.stack([1.0 - (lat_ij[:, 0] + lat_ij[:, 1]) / n, lat_ij[:, 0] / n, lat_ij[:, 1] / n], 1)
        n_lat = len(lat_ij)
        # planar position of every lattice point in each face: P0 + i/n (P1-P0) + j/n (P2-P0)
        P0, P1, P2 = layout[:, 0], layout[:, 1], layout[:, 2]
        self.lattice_xy = (
            P0[:, None] + (lat_ij[None, :, 0:1] / n) * (P1 - P0)[:, None] + (lat_ij[None, :, 1:2] / n) * (P2 - P0)[:, None]
        )

        # global id of each lattice point; -1 for face-interior points
        gid = np.full((F, n_lat), -1, dtype=np.int64)
        corner = {(0, 0): 0, (n, 0): 1, (0, n): 2}
        for a, (i, j) in enumerate(lat_ij.astype(int)):
            if (i, j) in corner:
                gid[:, a] = faces[:, corner[i, j]]
                continue
            # which local side and the position along it, from local corner u to w
            if j == 0:  # side P0 -> P1, opposite local vertex 2
                side, u, t = 2, 0, i / n
            elif i == 0:  # side P0 -> P2, opposite local vertex 1
                side, u, t = 1, 0, j / n
            elif i + j == n:  # side P1 -> P2, opposite local vertex 0
                side, u, t = 0, 1, j / n
            else:
                continue
            e = imm.face_edges[:, side]
            forward = edges[e, 0] == faces[:, u]
            s = np.where(forward, t, 1.0 - t)
            step = np.rint(s * n).astype(np.int64)  # 1..k along the stored edge direction
            gid[:, a] = N + e * k + (step - 1)
        self.lattice_gid = gid
        self.boundary_mask = gid[0] >= 0
        bd = np.flatnonzero(self.boundary_mask)
        interior = np.flatnonzero(~self.boundary_mask)
        self.boundary_local = bd
        self.interior_local = interior

        # graph edges: all pairs of boundary points inside each face
        ia, ib = np.triu_indices(len(bd), k=1)
        a_loc, b_loc = bd[ia], bd[ib]
        ga = gid[:, a_loc].ravel()
        gb = gid[:, b_loc].ravel()
        w = np.linalg.norm(self.lattice_xy[:, a_loc] - self.lattice_xy[:, b_loc], axis=2).ravel()
        lo, hi = np.minimum(ga, gb), np.maximum(ga, gb)
        key = lo * self.n_nodes + hi
        order = np.lexsort((w, key))
        key, w, lo, hi = key[order], w[order], lo[order], hi[order]
        first = np.ones(len(key), dtype=bool)
        first[1:] = key[1:] != key[:-1]
        lo, hi, w = lo[first], hi[first], w[first]
        self.graph = csr_matrix(
            (np.concatenate([w, w]), (np.concatenate([lo, hi]), np.concatenate([hi, lo]))),
            shape=(self.n_nodes, self.n_nodes),
        )
        # interior lattice point -> boundary point planar distances, (F, n_int, n_bd)
        if len(interior):
            self.interior_to_boundary = np.linalg.norm(
                self.lattice_xy[:, interior, None, :] - self.lattice_xy[:, None, bd, :], axis=3
            )
        else:
            self.interior_to_boundary = np.zeros((F, 0, len(bd)))

        # ambient positions of graph nodes (Steiner points on chords)
        v = imm.vertices
        t = (np.arange(1, k + 1) / n)[None, :, None]
        steiner = v[edges[:, 0]][:, None] * (1 - t) + v[edges[:, 1]][:, None] * t
        self.node_positions = np.vstack([v, steiner.reshape(-1, v.shape[1])])
        self.max_segment = float(imm.edge_lengths.max() / n)

    def lattice_values(self, node_values):
        """Extend node values (e.g. distances) to all lattice points, (F, n_lat).

        Interior points take ``min_b d(b) + |y - b|`` over the face boundary.
        """
        out = np.empty(self.lattice_gid.shape)
        bd_vals = node_values[self.lattice_gid[:, self.boundary_local]]
        out[:, self.boundary_local] = bd_vals
        if len(self.interior_local):
            out[:, self.interior_local] = np.min(bd_vals[:, None, :] + self.interior_to_boundary, axis=2)
        return out

    def lattice_interpolate(self, vertex_values, faces):
        """Barycentric interpolation of per-vertex values to lattice points."""
        vals = vertex_values[faces]  # (F, 3)
        return vals @ self.lattice_bary.T


def steiner_graph(imm, k=3):
    """Cached :class:`SteinerGraph` for ``imm``."""
    cache = imm.__dict__.setdefault("_steiner_cache", {})
    if k not in cache:
        cache[k] = SteinerGraph(imm, k)
    return cache[k]

"""Intrinsic distances, diameters and shortest geodesics on meshes."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import ConvexHull

from .graph import steiner_graph

__all__ = [
    "DistanceField",
    "Geodesic",
    "distance_field",
    "intrinsic_diameter",
    "shortest_geodesic",
    "extrinsic_diameter",
    "thread_count",
]

DEFAULT_STEINER = 3


def thread_count():
    """Worker threads, from ``DIAMCURV_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("DIAMCURV_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class DistanceField:
    """Graph distances from ``source`` to every node of the Steiner graph.

    ``distances[:n_vertices]`` are the mesh vertices.  ``rel_error`` is the
    estimated relative overestimate of the graph metric over the polyhedral
    metric: a geodesic crossing an edge is snapped to the nearest Steiner
    point, costing at most a second-order ``(spacing / 2)^2``-type detour per
    crossing, which we bound by ``1 / (2 (k+1)^2)``.
    """

    source: int
    distances: np.ndarray
    n_vertices: int
    steiner: int
    rel_error: float
    predecessors: np.ndarray | None = None

    @property
    def vertex_distances(self):
        return self.distances[: self.n_vertices]

    def __getitem__(self, idx):
        return self.distances[idx]


def distance_field(imm, source, k=DEFAULT_STEINER, predecessors=False):
    """Distances from graph node ``source`` (vertex or Steiner point) to all nodes."""
    g = steiner_graph(imm, k)
    source = int(source)
    if not 0 <= source < g.n_nodes:
        raise IndexError(f"source {source} out of range")
    if predecessors:
        d, pred = dijkstra(g.graph, directed=False, indices=source, return_predecessors=True)
    else:
        d, pred = dijkstra(g.graph, directed=False, indices=source), None
    return DistanceField(source, d, imm.n_vertices, k, 0.5 / (k + 1) ** 2, pred)


TIE_RTOL = 1e-9


def _first_near_max(a):
    """Lowest index whose value is within ``TIE_RTOL`` of the row maximum.

    Ties are resolved relative to the maximum so that the choice does not
    depend on the overall length scale (rounding of scaled sums).
    """
    a = np.atleast_2d(a)
    top = a.max(axis=1, keepdims=True)
    return np.argmax(a >= top * (1.0 - TIE_RTOL), axis=1)


def _eccentricities(imm, sources, k):
    """Farthest vertex and its distance for every source."""
    g = steiner_graph(imm, k)
    N = imm.n_vertices
    sources = np.asarray(sources, dtype=np.int64)
    chunks = [sources[i : i + 64] for i in range(0, len(sources), 64)]

    def run(chunk):
        d = dijkstra(g.graph, directed=False, indices=chunk)[:, :N]
        j = _first_near_max(d)
        return j, d[np.arange(len(chunk)), j]

    workers = thread_count()
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    far = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0, np.int64)
    ecc = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0)
    return far, ecc


def _best_pair(sources, far, ecc):
    # near-ties (relative TIE_RTOL) go to the lowest source id, then partner id
    best = np.max(ecc)
    cand = [(int(s), int(f), float(e)) for s, f, e in zip(sources, far, ecc) if e >= best * (1.0 - TIE_RTOL)]
    a, b, e = min(cand)
    return e, (a, b)


def intrinsic_diameter(imm, k=DEFAULT_STEINER, mode="fast", n_starts=16):
    """``(d_int, (x1, x2))`` maximised over mesh vertices.

    ``mode="exhaustive"`` runs one Dijkstra per vertex.  ``mode="fast"``
    repeats farthest-point sweeps from ``n_starts`` farthest-point-sampled
    seeds until the eccentricity stops growing; it returns a lower bound
    that is exact on most meshes.  Near-ties are broken by relative
    tolerance and lowest index, so the result is scale-covariant.
    """
    N = imm.n_vertices
    if mode == "exhaustive":
        sources = np.arange(N)
        far, ecc = _eccentricities(imm, sources, k)
        return _best_pair(sources, far, ecc)
    if mode != "fast":
        raise ValueError("mode must be 'fast' or 'exhaustive'")
    g = steiner_graph(imm, k)
    seeds = [0]
    dmin = dijkstra(g.graph, directed=False, indices=0)[:N]
    while len(seeds) < min(n_starts, N):
        nxt = int(_first_near_max(dmin)[0])
        seeds.append(nxt)
        dmin = np.minimum(dmin, dijkstra(g.graph, directed=False, indices=nxt)[:N])
    best, pair = -1.0, (0, 0)
    visited = set()
    frontier = sorted(set(seeds))
    while frontier:
        far, ecc = _eccentricities(imm, frontier, k)
        visited.update(frontier)
        val, p = _best_pair(frontier, far, ecc)
        if val > best * (1.0 + TIE_RTOL) or (val >= best * (1.0 - TIE_RTOL) and p < pair):
            best, pair = val, p
        # continue sweeping from every endpoint that attained a new record
        frontier = sorted({int(f) for f, e in zip(far, ecc) if e >= best * (1 - TIE_RTOL)} - visited)
    a, b = pair
    return best, (min(a, b), max(a, b))


@dataclass
class Geodesic:
    """Polyline through Steiner-graph nodes with arclength parameter."""

    nodes: np.ndarray
    points: np.ndarray
    arclength: np.ndarray

    @property
    def length(self):
        return float(self.arclength[-1])


def shortest_geodesic(imm, x, y, k=DEFAULT_STEINER):
    """Backtracked shortest path from vertex ``x`` to vertex ``y``."""
    field = distance_field(imm, x, k, predecessors=True)
    g = steiner_graph(imm, k)
    path = [int(y)]
    while path[-1] != int(x):
        p = field.predecessors[path[-1]]
        if p < 0:
            raise RuntimeError("target not reachable")
        path.append(int(p))
    nodes = np.array(path[::-1], dtype=np.int64)
    return Geodesic(nodes, g.node_positions[nodes], field.distances[nodes].copy())


def extrinsic_diameter(imm):
    """Largest Euclidean distance between vertices (over convex hull vertices)."""
    if not imm.ambient.is_flat:
        raise ValueError("extrinsic diameter needs a flat ambient space")
    x = imm.vertices
    try:
        pts = x[ConvexHull(x).vertices]
    except Exception:  # degenerate hull (e.g. planar data): fall back to all vertices
        pts = x
    best = 0.0
    for i in range(0, len(pts), 512):
        d = np.linalg.norm(pts[i : i + 512, None] - pts[None], axis=2)
        best = max(best, float(d.max()))
    return best

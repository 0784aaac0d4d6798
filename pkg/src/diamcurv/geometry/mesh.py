"""Triangle mesh primitives: validation, OFF/OBJ ingestion and export, and
the two tessellations every built-in surface is derived from."""
from __future__ import annotations

import os
import tempfile

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

__all__ = [
    "MeshError",
    "MeshFormatError",
    "edge_topology",
    "validate_topology",
    "icosphere",
    "periodic_grid",
    "read_off",
    "read_obj",
    "read_mesh",
    "write_off",
    "write_obj",
]


class MeshError(ValueError):
    """Invalid mesh; ``code`` is one of OPEN_BOUNDARY, NON_MANIFOLD_EDGE,
    NON_ORIENTABLE, DISCONNECTED, DEGENERATE_TRIANGLE, BAD_INDEX,
    SINGULAR_METRIC."""

    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code


class MeshFormatError(ValueError):
    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


def edge_topology(faces):
    """Unique undirected edges and the face/edge incidence.

    Returns ``(edges, face_edges, counts)`` where ``face_edges[f, k]`` is the
    edge opposite local vertex ``k`` (joining ``faces[f, k+1]`` and
    ``faces[f, k+2]``) and ``counts[e]`` the number of incident faces.
    """
    faces = np.asarray(faces, dtype=np.int64)
    a = faces[:, [1, 2, 0]].ravel()
    b = faces[:, [2, 0, 1]].ravel()
    und = np.sort(np.stack([a, b], axis=1), axis=1)
    edges, inverse, counts = np.unique(und, axis=0, return_inverse=True, return_counts=True)
    return edges, inverse.reshape(-1, 3), counts


def validate_topology(n_vertices, faces):
    faces = np.asarray(faces, dtype=np.int64)
    if faces.ndim != 2 or faces.shape[1] != 3 or len(faces) == 0:
        raise MeshError("BAD_INDEX", "faces must be a non-empty (F, 3) integer array")
    if faces.min() < 0 or faces.max() >= n_vertices:
        raise MeshError("BAD_INDEX", "face index out of range")
    if np.any(faces[:, 0] == faces[:, 1]) or np.any(faces[:, 1] == faces[:, 2]) or np.any(
        faces[:, 0] == faces[:, 2]
    ):
        raise MeshError("DEGENERATE_TRIANGLE", "face with repeated vertex")
    edges, face_edges, counts = edge_topology(faces)
    if np.any(counts == 1):
        raise MeshError("OPEN_BOUNDARY", f"{int(np.sum(counts == 1))} boundary edges")
    if np.any(counts > 2):
        raise MeshError("NON_MANIFOLD_EDGE", f"{int(np.sum(counts > 2))} edges shared by > 2 faces")
    directed = np.stack([faces[:, [1, 2, 0]].ravel(), faces[:, [2, 0, 1]].ravel()], axis=1)
    if len(np.unique(directed, axis=0)) != len(directed):
        raise MeshError("NON_ORIENTABLE", "faces are not consistently oriented")
    used = np.unique(faces)
    if len(used) != n_vertices:
        raise MeshError("DISCONNECTED", f"{n_vertices - len(used)} isolated vertices")
    adj = coo_matrix(
        (np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n_vertices, n_vertices)
    )
    n_comp, _ = connected_components(adj, directed=False)
    if n_comp != 1:
        raise MeshError("DISCONNECTED", f"mesh has {n_comp} connected components")
    return edges, face_edges


def icosphere(level):
    """Unit icosphere: an icosahedron subdivided ``level`` times (1-to-4 split
    with projection onto the sphere).  Level k has ``10 * 4**k + 2`` vertices."""
    t = (1.0 + 5.0**0.5) / 2.0
    verts = [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    v = np.array(verts, dtype=float)
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    f = np.array(faces, dtype=np.int64)
    for _ in range(level):
        edges, face_edges, _ = edge_topology(f)
        mid = v[edges[:, 0]] + v[edges[:, 1]]
        mid /= np.linalg.norm(mid, axis=1, keepdims=True)
        nv = len(v)
        v = np.vstack([v, mid])
        # face_edges[:, k] is opposite vertex k
        m0, m1, m2 = (face_edges[:, k] + nv for k in range(3))
        a, b, c = f[:, 0], f[:, 1], f[:, 2]
        f = np.concatenate(
            [
                np.stack([a, m2, m1], axis=1),
                np.stack([b, m0, m2], axis=1),
                np.stack([c, m1, m0], axis=1),
                np.stack([m0, m1, m2], axis=1),
            ]
        )
    return v, f


def periodic_grid(nu, nv):
    """Parameters and faces of an ``nu x nv`` grid on the torus
    ``[0, 2pi) x [0, 2pi)``; each cell is split along its main diagonal."""
    if nu < 3 or nv < 3:
        raise ValueError("periodic grid needs at least 3 cells in each direction")
    u = 2.0 * np.pi * np.arange(nu) / nu
    v = 2.0 * np.pi * np.arange(nv) / nv
    uu, vv = np.meshgrid(u, v, indexing="ij")
    params = np.stack([uu.ravel(), vv.ravel()], axis=1)
    i, j = np.meshgrid(np.arange(nu), np.arange(nv), indexing="ij")
    i, j = i.ravel(), j.ravel()
    ip, jp = (i + 1) % nu, (j + 1) % nv
    idx = lambda a, b: a * nv + b  # noqa: E731
    faces = np.concatenate(
        [
            np.stack([idx(i, j), idx(ip, j), idx(ip, jp)], axis=1),
            np.stack([idx(i, j), idx(ip, jp), idx(i, jp)], axis=1),
        ]
    )
    return params, faces


# ---------------------------------------------------------------- file I/O


def _data_lines(path):
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line


def _parse_floats(path, lineno, tokens, count):
    try:
        vals = [float(t) for t in tokens[:count]]
    except ValueError:
        raise MeshFormatError(path, lineno, "expected numeric coordinates") from None
    if len(vals) != count:
        raise MeshFormatError(path, lineno, f"expected {count} coordinates")
    return vals


def read_off(path):
    """Read vertices and triangles from an OFF file."""
    lines = _data_lines(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise MeshFormatError(path, 0, "empty file") from None
    tokens = header.split()
    if tokens[0] != "OFF":
        raise MeshFormatError(path, lineno, f"expected 'OFF' header, got {tokens[0]!r}")
    tokens = tokens[1:]
    if not tokens:
        try:
            lineno, header = next(lines)
        except StopIteration:
            raise MeshFormatError(path, lineno, "missing element counts") from None
        tokens = header.split()
    try:
        nv, nf = int(tokens[0]), int(tokens[1])
    except (ValueError, IndexError):
        raise MeshFormatError(path, lineno, "bad element counts") from None
    verts, faces = [], []
    for _ in range(nv):
        try:
            lineno, line = next(lines)
        except StopIteration:
            raise MeshFormatError(path, lineno, "unexpected end of file in vertex block") from None
        verts.append(_parse_floats(path, lineno, line.split(), 3))
    for _ in range(nf):
        try:
            lineno, line = next(lines)
        except StopIteration:
            raise MeshFormatError(path, lineno, "unexpected end of file in face block") from None
        tok = line.split()
        try:
            k = int(tok[0])
            idx = [int(t) for t in tok[1 : 1 + k]]
        except ValueError:
            raise MeshFormatError(path, lineno, "bad face record") from None
        if k != 3 or len(idx) != 3:
            raise MeshFormatError(path, lineno, f"only triangles are supported, got {k}-gon")
        faces.append(idx)
    for lineno, _ in lines:
        raise MeshFormatError(path, lineno, "trailing data after face block")
    return np.array(verts, dtype=float), np.array(faces, dtype=np.int64)


def read_obj(path):
    """Read ``v`` and triangular ``f`` records from an OBJ file.

    Any other record type is rejected with a line diagnostic.
    """
    verts, faces = [], []
    for lineno, line in _data_lines(path):
        tok = line.split()
        if tok[0] == "v":
            verts.append(_parse_floats(path, lineno, tok[1:], 3))
        elif tok[0] == "f":
            if len(tok) != 4:
                raise MeshFormatError(path, lineno, "only triangular faces are supported")
            try:
                idx = [int(t.split("/")[0]) for t in tok[1:]]
            except ValueError:
                raise MeshFormatError(path, lineno, "bad face index") from None
            nvert = len(verts)
            faces.append([i - 1 if i > 0 else nvert + i for i in idx])
        else:
            raise MeshFormatError(path, lineno, f"unsupported OBJ record {tok[0]!r}")
    if not verts or not faces:
        raise MeshFormatError(path, 0, "no vertices or faces")
    return np.array(verts, dtype=float), np.array(faces, dtype=np.int64)


def read_mesh(path):
    ext = os.path.splitext(path)[1].lower()
    if ext == ".off":
        return read_off(path)
    if ext == ".obj":
        return read_obj(path)
    raise MeshFormatError(path, 0, f"unknown mesh extension {ext!r} (use .off or .obj)")


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_off(path, vertices, faces):
    out = ["OFF", f"{len(vertices)} {len(faces)} 0"]
    out += [" ".join(f"{x:.17g}" for x in v) for v in vertices]
    out += ["3 " + " ".join(str(int(i)) for i in f) for f in faces]
    _atomic_write(path, "\n".join(out) + "\n")


def write_obj(path, vertices, faces):
    out = ["v " + " ".join(f"{x:.17g}" for x in v) for v in vertices]
    out += ["f " + " ".join(str(int(i) + 1) for i in f) for f in faces]
    _atomic_write(path, "\n".join(out) + "\n")

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diamcurv import surfaces
from diamcurv.geometry.ambient import AmbientSpace
from diamcurv.geometry.clipping import SublevelSweep, disk_triangle_area
from diamcurv.geometry.curvature import (
    extrinsic_ball_area,
    fundamental_forms,
    fundamental_forms_all,
    hm1_integral,
    willmore_energy,
)
from diamcurv.geometry.immersion import TriangleMeshImmersion, build_mesh
from diamcurv.geometry.mesh import MeshError, icosphere, periodic_grid


# ------------------------------------------------------------- polygon oracles


def _clip(poly, inside, cross):
    """Sutherland-Hodgman clip of ``poly`` against one convex constraint."""
    out = []
    for i in range(len(poly)):
        p, q = poly[i], poly[(i + 1) % len(poly)]
        ip, iq = inside(p), inside(q)
        if ip:
            out.append(p)
        if ip != iq:
            out.append(cross(p, q))
    return out


def _shoelace(poly):
    if len(poly) < 3:
        return 0.0
    x = np.array([p[0] for p in poly])
    y = np.array([p[1] for p in poly])
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _cross2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _disk_triangle_oracle(center, r, tri, n=4000):
    # disk as a fine polygon (radius stretched so its area is exactly pi r^2)
    # clipped by the three triangle half-planes
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    rr = r * math.sqrt(math.pi / (0.5 * n * math.sin(2 * math.pi / n)))
    poly = list(np.asarray(center) + rr * np.stack([np.cos(t), np.sin(t)], axis=1))
    tri = np.asarray(tri, float)
    orient = np.sign(_cross2(tri[1] - tri[0], tri[2] - tri[0]))
    for i in range(3):
        a, b = tri[i], tri[(i + 1) % 3]

        def side(p, a=a, b=b):
            return orient * _cross2(b - a, p - a)

        def cross(p, q, side=side):
            sp, sq = side(p), side(q)
            return p + (q - p) * sp / (sp - sq)

        poly = _clip(poly, lambda p, side=side: side(p) >= 0, cross)
    return _shoelace(poly)


def _sublevel_oracle(xy, f, r):
    """Area of {f < r} on a triangle with linear f, by half-plane clipping."""
    f = np.asarray(f, float)
    poly = [np.asarray(p, float) for p in xy]
    pts = [np.append(p, v) for p, v in zip(poly, f)]

    def inside(p):
        return p[2] < r

    def cross(p, q):
        s = (r - p[2]) / (q[2] - p[2])
        return p + s * (q - p)

    return _shoelace([p[:2] for p in _clip(pts, inside, cross)])


# ------------------------------------------------------------- ambient spaces


def test_model_space_constraints():
    gs = surfaces.geodesic_sphere(0.5, 1.0, level=3)
    assert np.max(np.abs(gs.ambient.constraint_residual(gs.vertices))) <= 1e-10
    ss = surfaces.small_sphere(0.1, 2.0, level=3)
    assert np.max(np.abs(ss.ambient.constraint_residual(ss.vertices))) <= 1e-10
    assert ss.ambient.inj_radius == pytest.approx(math.pi / 2)
    assert AmbientSpace.flat(3).inj_radius == math.inf


def test_ambient_tangent_projection_and_distance():
    H = AmbientSpace.hyperbolic_space(3, 2.0)
    x = np.array([math.cosh(0.3), math.sinh(0.3), 0.0, 0.0]) / 2.0
    y = np.array([math.cosh(0.8), 0.0, math.sinh(0.8), 0.0]) / 2.0
    w = np.array([0.3, -1.0, 2.0, 0.5])
    assert H.inner(H.tangent_projection(x, w), x) == pytest.approx(0.0, abs=1e-12)
    # both points lie at distance 0.3/2 and 0.8/2 from the base point along orthogonal rays
    d = H.distance(x, y)
    c = math.cosh(0.3) * math.cosh(0.8)
    assert d == pytest.approx(math.acosh(c) / 2, rel=1e-12)
    S = AmbientSpace.round_sphere(3, 1.0)
    p = np.array([1.0, 0, 0, 0])
    q = np.array([0.0, 1.0, 0, 0])
    assert S.distance(p, q) == pytest.approx(math.pi / 2)
    assert S.inner(S.tangent_projection(p, w), p) == pytest.approx(0.0, abs=1e-14)


# ------------------------------------------------------------- meshes


@pytest.mark.parametrize("level", [1, 2, 3])
def test_icosphere_counts(level):
    v, f = icosphere(level)
    assert len(v) == 10 * 4**level + 2
    assert len(f) == 20 * 4**level
    assert np.allclose(np.linalg.norm(v, axis=1), 1.0)


def test_sphere_generator_level4():
    s = surfaces.sphere(1.0)
    assert s.n_vertices == 2562
    assert s.total_area == pytest.approx(4 * math.pi, rel=2e-3)


def _tetra():
    v = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], float)
    f = np.array([[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]])
    return v, f


def test_tetrahedron_is_valid():
    v, f = _tetra()
    m = build_mesh(v, f)
    assert m.total_area == pytest.approx(1.5 + math.sqrt(3) / 2)


@pytest.mark.parametrize(
    "mutate, code",
    [
        (lambda v, f: (v, f[:3]), "OPEN_BOUNDARY"),
        (lambda v, f: (v, np.vstack([f[:3], f[3][::-1]])), "NON_ORIENTABLE"),
        (lambda v, f: (v, np.vstack([f, f + 0])), "NON_MANIFOLD_EDGE"),
        (lambda v, f: (np.vstack([v, v + 5]), np.vstack([f, f + 4])), "DISCONNECTED"),
        (lambda v, f: (v, np.where(f == 3, 7, f)), "BAD_INDEX"),
        (lambda v, f: (np.vstack([v[:3], v[1] * 0.5 + v[2] * 0.5]), f), "DEGENERATE_TRIANGLE"),
    ],
)
def test_mesh_validation_errors(mutate, code):
    v, f = mutate(*_tetra())
    with pytest.raises(MeshError) as e:
        build_mesh(v, f)
    assert e.value.code == code


def test_periodic_grid_is_closed_torus():
    p, f = periodic_grid(12, 8)
    m = TriangleMeshImmersion(
        np.stack([(2 + np.cos(p[:, 1])) * np.cos(p[:, 0]), (2 + np.cos(p[:, 1])) * np.sin(p[:, 0]), np.sin(p[:, 1])], 1),
        f,
    )
    # Euler characteristic of the torus
    assert m.n_vertices - len(m.edge_lengths) + len(f) == 0


# ------------------------------------------------------------- curvature


def test_sphere_mean_curvature_and_conventions():
    s = surfaces.sphere(2.0, level=3)
    tr = s.mean_curvature("trace").magnitudes
    av = s.mean_curvature("average").magnitudes
    assert np.max(np.abs(tr - 1.0)) < 1e-3
    assert np.allclose(av, tr / 2)
    assert hm1_integral(s, convention="trace") == pytest.approx(8 * math.pi * 2, rel=5e-3)
    assert willmore_energy(s, "average") == pytest.approx(4 * math.pi, rel=5e-3)


def test_mean_curvature_refinement_converges():
    errs = [np.max(np.abs(surfaces.sphere(1.0, level=k).mean_curvature().magnitudes - 2)) for k in (2, 3, 4)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[1] / errs[2] > 3.0


def test_area_refinement_monotone():
    areas = [surfaces.sphere(1.0, level=k).total_area for k in (1, 2, 3, 4)]
    assert all(a < b for a, b in zip(areas, areas[1:]))
    assert all(a < 4 * math.pi for a in areas)


def test_torus_mean_curvature_closed_form():
    t = surfaces.torus(2.0, 1.0, n=96)
    v = t.vertices
    rho = np.hypot(v[:, 0], v[:, 1])
    cos_t = (rho - 2.0) / 1.0
    expected = np.abs((2.0 + 2 * 1.0 * cos_t) / (1.0 * (2.0 + cos_t)))
    assert np.max(np.abs(t.mean_curvature().magnitudes - expected)) < 0.02


def test_flat_torus_metric_is_flat():
    ft = surfaces.flat_torus_4d(1.0, 1.0, n=256)
    for node in (0, 1000, 40000):
        g, _ = fundamental_forms(ft, node)
        assert np.allclose(g, np.eye(2), atol=1e-8)
    ft2 = surfaces.flat_torus_4d(1.0, 2.0, n=64)
    g, _ = fundamental_forms(ft2, 5)
    assert np.allclose(g, np.diag([1.0, 4.0]), atol=1e-8)


def test_flat_torus_mean_curvature():
    ft = surfaces.flat_torus_4d(1.0, 2.0, n=64)
    # |H|^2 = 1/r1^2 + 1/r2^2 in the trace convention
    assert np.allclose(ft.mean_curvature().magnitudes, math.sqrt(1 + 0.25), rtol=1e-3)


def test_parametric_mean_curvature_is_normal():
    for imm in (surfaces.flat_torus_4d(1.0, 1.5, n=48), surfaces.geodesic_sphere(0.5, 1.0, level=2),
                surfaces.small_sphere(0.3, 1.0, level=2)):
        forms = fundamental_forms_all(imm)
        H = forms.mean_curvature_vectors()
        amb = imm.ambient
        scale = np.max(np.linalg.norm(H, axis=1))
        for j in range(2):
            assert np.max(np.abs(amb.inner(H, forms.tangents[:, j]))) < 1e-6 * scale
        if not amb.is_flat:
            assert np.max(np.abs(amb.inner(H, imm.vertices))) < 1e-6 * scale


def test_model_space_sphere_curvatures():
    gs = surfaces.geodesic_sphere(0.5, 1.0, level=3)
    assert np.allclose(gs.mean_curvature().magnitudes, 2 / math.tanh(0.5), rtol=5e-3)
    ss = surfaces.small_sphere(0.1, 1.0, level=3)
    assert np.allclose(ss.mean_curvature().magnitudes, 2 / math.tan(0.1), rtol=5e-3)
    eq = surfaces.equator(1.0, level=3)
    assert np.max(eq.mean_curvature().magnitudes) < 1e-8


def test_scaling_covariance_of_curvature():
    s = surfaces.ellipsoid(2, 1, 1, level=3)
    for lam in (0.1, 10.0):
        t = s.scaled(lam)
        assert np.allclose(t.mean_curvature().magnitudes, s.mean_curvature().magnitudes / lam, rtol=1e-10)
        assert t.total_area == pytest.approx(lam**2 * s.total_area, rel=1e-12)
        assert hm1_integral(t) == pytest.approx(lam * hm1_integral(s), rel=1e-10)


# ------------------------------------------------------------- clipping


def test_disk_triangle_special_cases():
    tri = np.array([[-10, -10], [10, -10], [0, 10]], float)
    assert disk_triangle_area([0, 0], 1.0, tri) == pytest.approx(math.pi)
    small = np.array([[0, 0], [0.1, 0], [0, 0.1]])
    assert disk_triangle_area([0, 0], 1.0, small) == pytest.approx(0.005)
    # corner sector: right angle at the center
    right = np.array([[0, 0], [5, 0], [0, 5]], float)
    assert disk_triangle_area([0, 0], 1.0, right) == pytest.approx(math.pi / 4)
    assert disk_triangle_area([20, 20], 1.0, right) == pytest.approx(0.0, abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(
    pts=st.lists(st.tuples(st.floats(-2, 2), st.floats(-2, 2)), min_size=3, max_size=3),
    cx=st.floats(-1.5, 1.5),
    cy=st.floats(-1.5, 1.5),
    r=st.floats(0.05, 3.0),
)
def test_disk_triangle_matches_polygon_clip(pts, cx, cy, r):
    tri = np.array(pts)
    area = 0.5 * abs(_cross2(tri[1] - tri[0], tri[2] - tri[0]))
    if area < 1e-3:
        return
    got = disk_triangle_area([cx, cy], r, tri)
    ref = _disk_triangle_oracle((cx, cy), r, tri)
    assert got == pytest.approx(ref, abs=1e-6 * max(r * r, 1.0))


@settings(max_examples=40, deadline=None)
@given(
    f=st.lists(st.floats(0.0, 3.0), min_size=3, max_size=3),
    rs=st.lists(st.floats(-0.5, 3.5), min_size=1, max_size=8),
)
def test_sublevel_sweep_matches_bruteforce(f, rs):
    xy = np.array([[0.0, 0.0], [1.3, 0.2], [0.4, 1.1]])
    area = 0.5 * abs(_cross2(xy[1] - xy[0], xy[2] - xy[0]))
    sweep = SublevelSweep(np.array([f]), np.array([area]), np.array([[2.0]]))
    got = sweep(np.array(rs))
    for r, row in zip(rs, got):
        ref = _sublevel_oracle(xy, f, r)
        assert row[0] == pytest.approx(ref, abs=1e-9)
        assert row[1] == pytest.approx(2.0 * ref, abs=2e-9)


def test_sublevel_sweep_many_triangles_monotone():
    rng = np.random.default_rng(3)
    vals = rng.uniform(0, 5, size=(200, 3))
    areas = rng.uniform(0.1, 1.0, size=200)
    sweep = SublevelSweep(vals, areas)
    r = np.linspace(-1, 6, 500)
    a = sweep(r)[:, 0]
    assert np.all(np.diff(a) >= -1e-12)
    assert a[0] == 0.0 and a[-1] == pytest.approx(areas.sum())


def test_extrinsic_ball_area_on_sphere():
    # Archimedes: the part of the unit sphere within chord distance r of a point has area pi r^2
    s = surfaces.sphere(1.0, level=4)
    for r in (0.3, 1.0, 1.7):
        assert extrinsic_ball_area(s, s.vertices[0], r) == pytest.approx(math.pi * r * r, rel=5e-3)


# ------------------------------------------------------------- generators


def test_surface_spec_parsing():
    assert surfaces.parse_surface_spec("torus(2, 1)") == ("torus", [2.0, 1.0])
    assert surfaces.parse_surface_spec("equator") == ("equator", [])
    with pytest.raises(surfaces.SurfaceSpecError) as e:
        surfaces.parse_surface_spec("klein-bottle(1)")
    assert e.value.code == "UNKNOWN_GENERATOR"
    for bad in ("sphere(-1)", "torus(1,2)", "sphere(x)", "sphere(1,2)"):
        with pytest.raises(surfaces.SurfaceSpecError) as e:
            surfaces.generate(bad)
        assert e.value.code == "PARAMETER_RANGE"
    with pytest.raises(surfaces.SurfaceSpecError):
        surfaces.generate("sphere(1)", resolution=7)
    with pytest.raises(surfaces.SurfaceSpecError):
        surfaces.generate("torus(2,1)", resolution=2000)


def test_generate_all_builtins():
    for spec, res in [("sphere(1)", 2), ("ellipsoid(2,1,1)", 2), ("torus(2,1)", 32), ("bumpy-sphere(1,0.1,3,7)", 2),
                      ("flat-torus-4d(1,1)", 16), ("small-sphere(0.1)", 2), ("equator", 2),
                      ("geodesic-sphere(0.5)", 2)]:
        imm = surfaces.generate(spec, resolution=res)
        assert imm.total_area > 0
        assert np.all(np.isfinite(imm.mean_curvature().magnitudes))
    assert surfaces.generate("small-sphere(0.1)", resolution=2, curvature=2.0).ambient.curvature == 2.0


def test_bumpy_sphere_is_seeded():
    a = surfaces.bumpy_sphere(1.0, 0.1, 3.0, seed=4, level=2)
    b = surfaces.bumpy_sphere(1.0, 0.1, 3.0, seed=4, level=2)
    c = surfaces.bumpy_sphere(1.0, 0.1, 3.0, seed=5, level=2)
    assert np.array_equal(a.vertices, b.vertices)
    assert not np.array_equal(a.vertices, c.vertices)

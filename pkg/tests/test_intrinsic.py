import math

import numpy as np
import pytest

from diamcurv import surfaces
from diamcurv.intrinsic.distance import distance_field, extrinsic_diameter, intrinsic_diameter, shortest_geodesic
from diamcurv.intrinsic.graph import steiner_graph
from diamcurv.intrinsic.profile import ball_volume_profile

ELLIPSE_HALF_PERIMETER_2_1 = 4.844224110273838


@pytest.fixture(scope="module")
def sphere3():
    return surfaces.sphere(1.0, level=3)


def test_distances_symmetric(sphere3):
    ids = [0, 17, 233, 500]
    d = np.array([distance_field(sphere3, i).vertex_distances[ids] for i in ids])
    assert np.allclose(d, d.T, rtol=0, atol=1e-12)
    assert np.all(np.diag(d) == 0)


def test_steiner_refinement_never_increases_distances(sphere3):
    # the points at k=1 are a subset of those at k=3 and k=7 (dyadic positions)
    d1 = distance_field(sphere3, 5, k=1).vertex_distances
    d3 = distance_field(sphere3, 5, k=3).vertex_distances
    d7 = distance_field(sphere3, 5, k=7).vertex_distances
    assert np.all(d3 <= d1 + 1e-12)
    assert np.all(d7 <= d3 + 1e-12)


def test_distances_bounded_below_by_chords(sphere3):
    d = distance_field(sphere3, 11).vertex_distances
    chord = np.linalg.norm(sphere3.vertices - sphere3.vertices[11], axis=1)
    assert np.all(d >= chord - 1e-12)
    # on the unit sphere the great-circle distance is 2 arcsin(chord/2)
    arc = 2 * np.arcsin(np.clip(chord / 2, 0, 1))
    assert np.max(np.abs(d - arc)) < 0.02


def test_sphere_intrinsic_diameter():
    s = surfaces.sphere(1.0, level=4)
    d, (a, b) = intrinsic_diameter(s)
    assert d == pytest.approx(math.pi, rel=0.01)
    assert a < b
    assert extrinsic_diameter(s) == pytest.approx(2.0, rel=1e-12)


def test_fast_matches_exhaustive():
    s = surfaces.ellipsoid(2, 1, 1, level=2)
    fast = intrinsic_diameter(s, mode="fast")
    full = intrinsic_diameter(s, mode="exhaustive")
    assert fast[0] == pytest.approx(full[0], rel=1e-12)


def test_ellipsoid_diameter_is_half_perimeter():
    s = surfaces.ellipsoid(2, 1, 1, level=4)
    d, _ = intrinsic_diameter(s)
    assert d == pytest.approx(ELLIPSE_HALF_PERIMETER_2_1, rel=0.01)


def test_flat_torus_diameter():
    ft = surfaces.flat_torus_4d(1.0, 1.0, n=48)
    d, _ = intrinsic_diameter(ft)
    assert d == pytest.approx(math.pi * math.sqrt(2), rel=0.01)


def test_hyperbolic_sphere_uses_minkowski_lengths():
    gs = surfaces.geodesic_sphere(0.5, 1.0, level=3)
    # intrinsic radius of the geodesic sphere is sinh(0.5)
    d, _ = intrinsic_diameter(gs)
    assert d == pytest.approx(math.pi * math.sinh(0.5), rel=0.01)
    assert gs.total_area == pytest.approx(4 * math.pi * math.sinh(0.5) ** 2, rel=5e-3)


def test_shortest_geodesic(sphere3):
    d, (a, b) = intrinsic_diameter(sphere3)
    geo = shortest_geodesic(sphere3, a, b)
    assert geo.nodes[0] == a and geo.nodes[-1] == b
    assert geo.length == pytest.approx(d, rel=1e-12)
    assert np.all(np.diff(geo.arclength) > 0)
    seg = np.linalg.norm(np.diff(geo.points, axis=0), axis=1)
    assert np.allclose(np.diff(geo.arclength), seg, rtol=1e-9)


def test_steiner_graph_cache(sphere3):
    assert steiner_graph(sphere3, 3) is steiner_graph(sphere3, 3)
    g = steiner_graph(sphere3, 3)
    assert g.n_nodes == sphere3.n_vertices + 3 * len(sphere3.edge_lengths)


def test_profile_basic_properties(sphere3):
    p = ball_volume_profile(sphere3, 0)
    # monotone up to round-off of the cumulative sweep
    assert np.all(np.diff(p.volume) >= -1e-10 * p.total_volume)
    assert p.volume[-1] == pytest.approx(sphere3.total_area, rel=1e-12)
    assert p.volume_at(np.array([0.0]))[0] == 0.0
    # first breakpoint: Euclidean small-ball limit
    r0 = p.radii[0]
    assert p.volume[0] / (math.pi * r0 * r0) == pytest.approx(1.0, rel=0.15)
    # integrals of |H| and |H|^2 saturate at the full integrals
    h = sphere3.mean_curvature().magnitudes
    assert p.h_integral[-1] == pytest.approx(np.sum(h * sphere3.dual_areas), rel=2e-3)
    assert p.h_integral_at(np.array([1.0]), "average")[0] == pytest.approx(0.5 * p.h_integral_at(np.array([1.0]))[0])


def test_profile_matches_spherical_caps():
    s = surfaces.sphere(1.0, level=4)
    p = ball_volume_profile(s, 7)
    rel = distance_field(s, 7).rel_error
    for r in (0.2, 0.8, math.pi / 2, 2.5):
        # graph distances overestimate by at most rel_error, so V(r) >= V_exact(r / (1 + rel))
        exact = 2 * math.pi * (1 - math.cos(r))
        assert p.volume_at(np.array([r]))[0] == pytest.approx(exact, rel=2 * rel)
        assert p.volume_at(np.array([r]))[0] >= 2 * math.pi * (1 - math.cos(r / (1 + rel))) * 0.995


def test_profile_at_steiner_center(sphere3):
    g = steiner_graph(sphere3, 3)
    node = sphere3.n_vertices + 10
    p = ball_volume_profile(sphere3, node)
    assert p.center == node
    r = np.array([0.05, 0.5])
    assert np.allclose(p.volume_at(r), 2 * math.pi * (1 - np.cos(r)), rtol=0.05)
    assert g.node_positions.shape[0] == g.n_nodes


def test_profile_csv(tmp_path, sphere3):
    p = ball_volume_profile(sphere3, 3, n_grid=16)
    path = tmp_path / "v.csv"
    p.to_csv(path)
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "r,V"
    assert len(rows) == len(p.radii) + 1

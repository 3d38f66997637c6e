import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from distlab.geodesics import (
    build_steiner_graph,
    cone_lateral_distance,
    cone_surface_distance,
    graph_geodesic,
    multi_source,
    ridge_unfold_distance,
    single_source,
    sphere_distance,
    two_ray_distortion,
    two_ray_sampled,
)
from distlab.surfaces import mesh_cone, mesh_simplex_boundary, mesh_sphere, refine_triangles

angles = st.floats(0.0, 2 * math.pi)
slants = st.floats(0.05, 1.0)


def cone_pt(r, s, t):
    h = math.sqrt(1 - r * r)
    return np.array([s * r * math.cos(t), s * r * math.sin(t), s * h])


# --- Steiner graph structure -----------------------------------------------


def test_graph_counts_k1():
    m = mesh_sphere(1, 2)
    g = build_steiner_graph(m, 1)
    E = len(m.edges())
    assert g.n_nodes == m.n_vertices + E
    # per triangle: 15 pairs minus 3 non-adjacent collinear ones; shared sides counted once
    assert g.n_arcs == 12 * m.n_faces - 2 * E


def test_graph_k0_is_edge_graph():
    m = mesh_sphere(1, 2)
    g = build_steiner_graph(m, 0)
    assert g.n_arcs == len(m.edges())


def test_graph_symmetric_positive():
    g = build_steiner_graph(mesh_cone(0.3, 16), 2)
    mat = g.matrix
    assert (mat != mat.T).nnz == 0
    assert mat.data.min() > 0


def test_edge_nodes_are_collinear():
    m = mesh_sphere(1, 1)
    g = build_steiner_graph(m, 3)
    for e in (0, 7, 50):
        pts = g.positions[g.edge_nodes(e)]
        d = np.diff(pts, axis=0)
        assert np.allclose(np.linalg.norm(d, axis=1), np.linalg.norm(d[0]))


def test_per_edge_counts():
    m = mesh_sphere(1, 1)
    e = m.edges()
    g = build_steiner_graph(m, 3, {tuple(e[0]): 7})
    assert g.edge_k[0] == 7 and len(g.edge_nodes(0)) == 9
    assert g.n_nodes == m.n_vertices + 3 * len(e) + 4


def test_negative_k_rejected():
    with pytest.raises(ValueError):
        build_steiner_graph(mesh_sphere(1, 1), -1)


def test_path_length_matches_distance():
    g = build_steiner_graph(mesh_sphere(1, 2), 3)
    res = graph_geodesic(g, 0, 100)
    assert res.path_length == pytest.approx(res.distance, rel=1e-12)
    assert not res.exact


def test_multi_source_matches_single():
    g = build_steiner_graph(mesh_sphere(1, 1), 2)
    rows = multi_source(g, [0, 5], targets=np.arange(10))
    assert np.allclose(rows[1], single_source(g, 5)[:10])


# --- graph against exact oracles -------------------------------------------


def test_graph_dominates_sphere_chord_path():
    m = mesh_sphere(1, 3)
    g = build_steiner_graph(m, 3)
    d = single_source(g, 0)[: m.n_vertices]
    exact = np.array([sphere_distance(1, m.vertices[0], p).distance for p in m.vertices])
    # graph paths live on the inscribed polyhedron: slightly shorter is possible, longer by O(h)
    assert np.all(d >= exact * (1 - 0.01))
    assert np.all(d <= exact * 1.03 + 1e-12)


def test_graph_on_flat_facets_dominates_unfolding():
    m = mesh_simplex_boundary(2, 2)
    g = build_steiner_graph(m, 3)
    v = m.vertices
    # facet interiors only, so the shortest path must cross the common ridge
    inner = (v[:, 2] > 1e-12) & (v[:, 3] > 1e-12)
    on0 = np.flatnonzero((np.abs(v[:, 0]) < 1e-12) & (v[:, 1] > 1e-12) & inner)
    on1 = np.flatnonzero((np.abs(v[:, 1]) < 1e-12) & (v[:, 0] > 1e-12) & inner)
    assert len(on0) and len(on1)
    for a in on0[:4]:
        d = single_source(g, int(a))
        for b in on1[:4]:
            exact = ridge_unfold_distance(2, v[a], v[b], 0, 1).distance
            assert d[b] >= exact - 1e-12


def test_halving_h_and_doubling_k_never_increases():
    # flat facets, plain midpoints: old Steiner positions are kept, so the new graph
    # contains a path at least as short as every old one
    m = mesh_simplex_boundary(2, 1)
    k = 1
    g = build_steiner_graph(m, k)
    fine, *_ = refine_triangles(m, np.arange(m.n_faces))
    g2 = build_steiner_graph(fine, 2 * k + 1)
    V = m.n_vertices
    for s in range(V):
        assert np.all(single_source(g2, s)[:V] <= single_source(g, s)[:V] + 1e-12)


def test_graph_converges_to_cone_oracle():
    r = 0.3
    p, q = cone_pt(r, 0.9, 0.0), cone_pt(r, 0.9, math.pi)
    exact = cone_surface_distance(r, p, q).distance
    errs = []
    for res, k in ((16, 1), (32, 3)):
        m = mesh_cone(r, res)
        i = int(np.argmin(np.linalg.norm(m.vertices - p, axis=1)))
        j = int(np.argmin(np.linalg.norm(m.vertices - q, axis=1)))
        d = single_source(build_steiner_graph(m, k), i)[j]
        ex = cone_surface_distance(r, m.vertices[i], m.vertices[j]).distance
        errs.append(abs(d / ex - 1))
    assert errs[1] < errs[0]
    assert errs[1] < 0.02
    assert exact > 0


# --- cone oracle -------------------------------------------------------------


def test_cone_lateral_opposite_points():
    r = 0.2
    res = cone_lateral_distance(r, 1.0, 0.0, 1.0, math.pi)
    assert res.distance == pytest.approx(2 * math.sin(math.pi * r / 2))


def test_cone_lateral_unrolled_law_of_cosines():
    r = 0.9
    res = cone_lateral_distance(r, 0.5, 0.0, 0.7, math.pi)
    assert res.distance == pytest.approx(math.sqrt(0.74 - 0.7 * math.cos(math.pi * r)), rel=1e-12)


@given(r=st.floats(0.05, 0.95), s1=slants, t1=angles, s2=slants, t2=angles)
def test_cone_lateral_metric_properties(r, s1, t1, s2, t2):
    a = cone_lateral_distance(r, s1, t1, s2, t2).distance
    b = cone_lateral_distance(r, s2, t2, s1, t1).distance
    assert a == pytest.approx(b, abs=1e-12)
    assert a >= np.linalg.norm(cone_pt(r, s1, t1) - cone_pt(r, s2, t2)) - 1e-12


@given(r=st.floats(0.05, 0.95), s1=slants, t1=angles, s2=slants, t2=angles)
def test_cone_lateral_path_length(r, s1, t1, s2, t2):
    res = cone_lateral_distance(r, s1, t1, s2, t2)
    assert res.path_length <= res.distance * (1 + 1e-9) + 1e-12
    assert res.path_length >= res.distance * (1 - 5e-3) - 1e-12


def test_cone_rim_witness_ratio():
    # lateral point a distance r below the rim against the disc center
    r = 0.169
    h = math.sqrt(1 - r * r)
    p = cone_pt(r, 1 - r, 0.0)
    q = np.array([0.0, 0.0, h])
    d = cone_surface_distance(r, p, q).distance
    assert d == pytest.approx(2 * r, rel=1e-9)
    assert d / np.linalg.norm(p - q) == pytest.approx(math.sqrt(2) / math.sqrt(1 - r), rel=1e-9)
    # the segment from the rim point to p has the derived length r*sqrt(2-2r)
    assert np.linalg.norm(p - q) == pytest.approx(r * math.sqrt(2 - 2 * r), rel=1e-12)


@given(r=st.floats(0.05, 0.9), s1=slants, t1=angles, s2=slants, t2=angles)
def test_cone_surface_not_longer_than_lateral(r, s1, t1, s2, t2):
    p, q = cone_pt(r, s1, t1), cone_pt(r, s2, t2)
    full = cone_surface_distance(r, p, q).distance
    lateral = cone_lateral_distance(r, s1, t1, s2, t2).distance
    assert full <= lateral + 1e-9
    assert full >= np.linalg.norm(p - q) - 1e-12


# --- sphere, two rays, ridge ---------------------------------------------


def test_sphere_antipodal():
    res = sphere_distance(2.0, [0, 0, 2], [0, 0, -2])
    assert res.distance == pytest.approx(2 * math.pi)
    assert res.path_length == pytest.approx(2 * math.pi, rel=1e-3)


def test_sphere_off_surface_rejected():
    with pytest.raises(ValueError):
        sphere_distance(1.0, [0, 0, 1.1], [1, 0, 0])


@pytest.mark.parametrize("alpha,expected", [(math.pi / 3, 2.0), (math.pi, 1.0), (math.pi / 2, math.sqrt(2))])
def test_two_ray_values(alpha, expected):
    assert two_ray_distortion(alpha) == pytest.approx(expected, rel=1e-14)


def test_two_ray_sampled_converges():
    assert abs(two_ray_sampled(math.pi / 3) - 2.0) <= 1e-3


@given(alpha=st.floats(0.2, math.pi))
def test_two_ray_sampling_matches_formula(alpha):
    assert two_ray_sampled(alpha) == pytest.approx(two_ray_distortion(alpha), rel=1e-6)


def test_two_ray_range():
    with pytest.raises(ValueError):
        two_ray_distortion(0.0)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_ridge_unfold_facet_centers(n):
    dim = n + 2
    p = np.full(dim, 1 / (n + 1))
    p[0] = 0
    q = np.full(dim, 1 / (n + 1))
    q[1] = 0
    d = ridge_unfold_distance(n, p, q).distance
    assert d == pytest.approx(2 / math.sqrt(n * (n + 1)), rel=1e-9)


@given(
    n=st.integers(1, 6),
    a=st.lists(st.floats(0.01, 1), min_size=8, max_size=8),
    b=st.lists(st.floats(0.01, 1), min_size=8, max_size=8),
)
def test_ridge_unfold_bounds(n, a, b):
    dim = n + 2
    p = np.array(a[:dim])
    p[0] = 0
    p /= p.sum()
    q = np.array(b[:dim])
    q[1] = 0
    q /= q.sum()
    assume(np.linalg.norm(p - q) > 1e-6)
    res = ridge_unfold_distance(n, p, q)
    assert res.distance >= np.linalg.norm(p - q) - 1e-12
    # a path through any ridge point is an upper bound
    y = np.zeros(dim)
    y[2:] = 1.0 / n
    assert res.distance <= np.linalg.norm(p - y) + np.linalg.norm(y - q) + 1e-9
    assert res.path_length == pytest.approx(res.distance, rel=1e-9, abs=1e-12)


def test_cone_antipodal_rim_points_against_graph():
    r = 0.3
    m = mesh_cone(r, 48)
    h = math.sqrt(1 - r * r)
    rim = np.flatnonzero(np.isclose(m.vertices[:, 2], h) & np.isclose(np.hypot(m.vertices[:, 0], m.vertices[:, 1]), r))
    a = rim[0]
    b = rim[np.argmin(np.linalg.norm(m.vertices[rim] + m.vertices[a] * [1, 1, -1] - [0, 0, 2 * h], axis=1))]
    exact = cone_surface_distance(r, m.vertices[a], m.vertices[b]).distance
    # across the flat disc: the diameter 2r beats going around (2 sin(0.15 pi))
    assert exact == pytest.approx(min(2 * r, 2 * math.sin(0.15 * math.pi)), rel=1e-9)
    d = single_source(build_steiner_graph(m, 3), int(a))[b]
    assert abs(d / exact - 1) < 0.01

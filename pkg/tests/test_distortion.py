import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.sparse.csgraph import dijkstra

from distlab.analytic import BOUND_BOUNDED_COMPLEMENT, BOUND_SYSTOLE, HALF_PI
from distlab.distortion import (
    DisconnectedMeshError,
    _all_rows,
    _row_maxima,
    estimate_distortion,
    verify_lower_bounds,
)
from distlab.geodesics import build_steiner_graph
from distlab.surfaces import TriMesh, mesh_cone, mesh_sphere, mesh_torus


@pytest.fixture(scope="module")
def sphere_est():
    return estimate_distortion(mesh_sphere(1, 2), 3, 1)


def test_value_is_ratio_of_reported_lengths(sphere_est):
    e = sphere_est
    assert e.value == pytest.approx(e.intrinsic / e.euclidean, rel=1e-15)
    assert e.euclidean == pytest.approx(np.linalg.norm(e.witness_p - e.witness_q), rel=1e-12)
    assert len(e.refinement_history) == 2
    assert e.witness_h <= e.h_max + 1e-15


def test_value_is_global_brute_force_max():
    m = mesh_cone(0.3, 16)
    est = estimate_distortion(m, 2, 0)
    g = build_steiner_graph(m, 2)
    d = dijkstra(g.matrix, indices=np.arange(m.n_vertices))[:, : m.n_vertices]
    e = np.linalg.norm(m.vertices[:, None] - m.vertices[None], axis=2)
    mask = e > 1e-6 * m.diameter()
    assert est.value == pytest.approx((d[mask] / e[mask]).max(), rel=1e-12)


def test_sphere_estimate_near_half_pi(sphere_est):
    assert abs(sphere_est.value / HALF_PI - 1) < 0.02
    # witnesses are close to antipodal
    assert np.linalg.norm(sphere_est.witness_p + sphere_est.witness_q) < 3 * sphere_est.h_max


@pytest.mark.parametrize("mesh", [mesh_cone(0.2, 24), mesh_cone(0.6, 40), mesh_torus(0.3, 24, 8)])
def test_symmetry_reduction_matches_all_sources(mesh):
    assert mesh.symmetry is not None
    g = build_steiner_graph(mesh, 2)
    lim = 1e-6 * mesh.diameter()
    fast = _all_rows(g, lim)
    slow = _row_maxima(g, np.arange(mesh.n_vertices), lim)
    assert np.allclose(fast[0], slow[0], rtol=1e-12)
    assert np.allclose(fast[2], slow[2], rtol=1e-12)


@settings(max_examples=8)
@given(
    scale=st.floats(0.05, 20.0),
    shift=st.lists(st.floats(-10, 10), min_size=3, max_size=3),
)
def test_similarity_invariance(scale, shift):
    m = mesh_cone(0.3, 16)
    base = estimate_distortion(m, 2, 1).value
    moved = estimate_distortion(m.scaled(scale, np.array(shift)), 2, 1).value
    assert moved == pytest.approx(base, rel=1e-9)


def test_disconnected_mesh_rejected():
    t = mesh_torus(0.3, 12, 8)
    v = np.vstack([t.vertices, t.vertices + [5.0, 0, 0]])
    f = np.vstack([t.triangles, t.triangles + t.n_vertices])
    # two tori: chi = 0 matches genus 1, so only connectivity fails
    with pytest.raises(DisconnectedMeshError):
        estimate_distortion(TriMesh(v, f, expected_genus=1), 1, 0)


def test_negative_budget_rejected():
    with pytest.raises(ValueError):
        estimate_distortion(mesh_sphere(1, 1), 1, -1)


def test_refinement_keeps_value_stable():
    est = estimate_distortion(mesh_cone(0.3, 24), 3, 2)
    values = [v for _, v in est.refinement_history]
    assert max(values) / min(values) - 1 < 0.01
    hs = [h for h, _ in est.refinement_history]
    assert hs[-1] < hs[0]


def test_lower_bound_checks():
    rep = verify_lower_bounds(1.6, True, 0)
    assert [c.name for c in rep.checks] == ["bounded_complement"]
    assert rep.passed and rep.checks[0].bound == pytest.approx(math.pi / (2 * math.sqrt(2)))
    rep = verify_lower_bounds(1.5, True, 1)
    assert not rep.passed
    assert rep.checks[1].bound == BOUND_SYSTOLE and rep.checks[1].margin == pytest.approx(1.5 - HALF_PI)
    assert verify_lower_bounds(1.5, True, 1, mesh_tol=0.08).passed
    assert verify_lower_bounds(0.5, False, 0).checks == []
    assert BOUND_BOUNDED_COMPLEMENT < BOUND_SYSTOLE


def test_lower_bounds_hold_for_meshes():
    for m in (mesh_cone(0.4, 24), mesh_sphere(1, 2)):
        est = estimate_distortion(m, 3, 0)
        assert verify_lower_bounds(est, True, 0).passed
    t = estimate_distortion(mesh_torus(0.2, 80, 16), 3, 0)
    assert verify_lower_bounds(t, True, 1, 0.02 * HALF_PI).passed

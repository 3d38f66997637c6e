import math

import numpy as np
import pytest

from distlab.config import torus_res_u
from distlab.surfaces import mesh_sphere, mesh_torus
from distlab.systole import loop_distance_pairs, node_params, systole_torus


@pytest.fixture(scope="module")
def thin():
    eps = 0.1
    return eps, systole_torus(mesh_torus(eps, torus_res_u(eps, 16), 16), 3)


def test_systole_is_meridian(thin):
    eps, res = thin
    assert res.winding == (0, 1)
    assert abs(res.length / (2 * math.pi * eps) - 1) <= 0.02
    # inscribed polygon: never longer than the smooth meridian by more than the mesh error
    assert res.length <= 2 * math.pi * eps * 1.001


def test_loop_is_closed_polyline(thin):
    _, res = thin
    assert np.allclose(res.loop[0], res.loop[-1])
    assert res.polyline_length() == pytest.approx(res.length, rel=1e-9)


def test_loop_is_locally_geodesic(thin):
    _, res = thin
    for chk in loop_distance_pairs(res, 8, seed=0):
        assert chk.full_mesh <= chk.along_loop * (1 + 1e-9)
        assert chk.rel_gap <= 0.02


def test_fat_torus_systole_is_meridian_too():
    eps = 0.4
    res = systole_torus(mesh_torus(eps, torus_res_u(eps, 16), 16), 2)
    assert res.winding == (0, 1)
    assert res.length == pytest.approx(2 * math.pi * eps, rel=0.03)


def test_node_params_interpolate_across_seam():
    m = mesh_torus(0.3, 16, 8)
    from distlab.geodesics import build_steiner_graph

    g = build_steiner_graph(m, 1)
    p = node_params(g)
    assert p.shape == (g.n_nodes, 2)
    assert (p >= 0).all() and (p < 2 * math.pi).all()
    # every Steiner node is the midpoint of its edge, in angle space
    x = (1 + 0.3 * np.cos(p[:, 1])) * np.cos(p[:, 0])
    y = (1 + 0.3 * np.cos(p[:, 1])) * np.sin(p[:, 0])
    assert np.allclose(np.arctan2(y, x) % (2 * math.pi), p[:, 0] % (2 * math.pi))
    chord = g.positions[m.n_vertices:]
    assert np.abs(np.hypot(x, y)[m.n_vertices:] - np.hypot(chord[:, 0], chord[:, 1])).max() < 0.05


def test_requires_torus_parameters():
    with pytest.raises(ValueError):
        systole_torus(mesh_sphere(1, 1))

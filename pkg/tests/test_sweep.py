import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from distlab.analytic import HALF_PI
from distlab.sweep import fit_linear_coefficient, sweep, sweep_cone, sweep_simplex, sweep_torus


def test_cone_sweep_thirty_points_within_two_percent():
    res = sweep_cone(0.02, 0.9, 30)
    assert len(res.rows) == 30
    assert res.max_rel_err <= 0.02
    svg = ET.fromstring(res.svg)
    assert len([e for e in svg.iter() if e.tag.endswith("circle")]) == 30
    assert "r0=0.1699" in res.svg and "pi/2" in res.svg


def test_simplex_sweep():
    res = sweep_simplex(1, 10)
    assert [r[0] for r in res.rows] == list(range(1, 11))
    assert res.summary["crossover_n"] == 5
    assert res.rows[4][2] < HALF_PI < res.rows[3][2]


def test_torus_sweep_small():
    res = sweep_torus(0.3, 0.15, 2, budget=0)
    assert res.summary["deviation_shrinks_with_eps"]
    assert res.summary["C"] > 0
    ET.fromstring(res.svg)


def test_fit_through_origin():
    eps = np.array([0.1, 0.2, 0.3])
    assert fit_linear_coefficient(eps, 0.7 * eps) == pytest.approx(0.7)


def test_dispatch():
    assert sweep("simplex", 2, 4).rows[0][0] == 2
    with pytest.raises(ValueError):
        sweep("klein", 0, 1, 2)

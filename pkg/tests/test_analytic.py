import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from distlab.analytic import (
    HALF_PI,
    BracketError,
    bisect,
    cone_antipodal_ratio,
    cone_branch_gap,
    cone_distortion_analytic,
    cone_rim_ratio,
    cone_threshold,
    dihedral_angle,
    find_r0,
    simplex_crossover,
    simplex_distortion_analytic,
    simplex_witnesses,
    threshold_by_bisection,
    two_ray_at_dihedral,
)

# independent 30-digit evaluations (mpmath findroot); see scripts/oracle_r0.py
R0 = 0.16990751499346892873
DELTA0 = 1.55221457395713113120
THRESHOLD = 0.18943053086129782845


def test_r0_matches_high_precision_oracle():
    res = find_r0(1e-12)
    assert res.r0 == pytest.approx(R0, abs=1e-10)
    assert res.delta0 == pytest.approx(DELTA0, abs=1e-10)
    assert res.bracket_width <= 1e-12


def test_r0_within_stated_rounding():
    res = find_r0()
    assert abs(res.r0 - 0.1699) <= 5e-4
    assert abs(res.delta0 - 1.5522) <= 5e-4


def test_threshold_closed_form_and_bisection():
    assert cone_threshold() == pytest.approx(THRESHOLD, abs=1e-15)
    assert threshold_by_bisection() == pytest.approx(cone_threshold(), abs=1e-9)
    assert cone_rim_ratio(cone_threshold()) == pytest.approx(HALF_PI, rel=1e-14)


def test_branch_gap_signs():
    assert cone_branch_gap(0.01) == pytest.approx(0.14939, abs=1e-5)
    assert cone_branch_gap(0.5) == pytest.approx(-0.58579, abs=1e-5)


@given(st.floats(0.001, 0.99), st.floats(0.001, 0.99))
def test_branches_are_monotone(a, b):
    lo, hi = min(a, b), max(a, b)
    assert cone_antipodal_ratio(lo) >= cone_antipodal_ratio(hi) - 1e-15
    assert cone_rim_ratio(lo) <= cone_rim_ratio(hi) + 1e-15
    assert cone_branch_gap(lo) >= cone_branch_gap(hi) - 1e-15


@given(st.floats(0.001, 0.99))
def test_cone_distortion_at_least_minimum(r):
    assert cone_distortion_analytic(r) >= DELTA0 - 1e-12


def test_cone_values():
    assert cone_antipodal_ratio(0.5) == pytest.approx(math.sqrt(2))
    assert cone_rim_ratio(0.5) == pytest.approx(2.0)
    assert cone_distortion_analytic(1 / math.sqrt(10)) == pytest.approx(1.71024869, abs=1e-8)


@pytest.mark.parametrize("r", [0.0, 1.0, -0.1, 1.5])
def test_cone_range(r):
    with pytest.raises(ValueError):
        cone_distortion_analytic(r)


def test_bisect_errors_and_exact_roots():
    with pytest.raises(BracketError):
        bisect(lambda x: x * x + 1, -1, 1, 1e-9)
    assert bisect(lambda x: x, 0.0, 1.0, 1e-9)[:2] == (0.0, 0.0)
    lo, hi, _ = bisect(lambda x: x - 0.3, 0.0, 1.0, 1e-12)
    assert lo <= 0.3 <= hi and hi - lo <= 1e-12
    with pytest.raises(ValueError):
        find_r0(0.0)


@pytest.mark.parametrize("n", range(1, 12))
def test_simplex_witness_ratio_equals_closed_form(n):
    w = simplex_witnesses(n)
    assert abs(w.ratio - simplex_distortion_analytic(n)) <= 1e-12
    assert np.isclose(w.p.sum(), 1) and np.isclose(w.q.sum(), 1) and np.isclose(w.r.sum(), 1)


def test_simplex_examples():
    assert simplex_distortion_analytic(1) == 2.0
    assert simplex_distortion_analytic(2) == pytest.approx(math.sqrt(3))
    assert simplex_crossover() == 5
    assert simplex_distortion_analytic(4) > HALF_PI > simplex_distortion_analytic(5)
    with pytest.raises(ValueError):
        simplex_distortion_analytic(0)


def test_dihedral_and_two_ray():
    assert dihedral_angle(1) == pytest.approx(math.pi / 3)
    assert two_ray_at_dihedral(1) == pytest.approx(2.0)
    # the two-ray value is 1/sin(theta/2) and stays below the facet-center witness ratio
    for n in range(1, 10):
        assert two_ray_at_dihedral(n) == pytest.approx(1 / math.sin(dihedral_angle(n) / 2))
        assert two_ray_at_dihedral(n) <= simplex_distortion_analytic(n) + 1e-12

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from distlab.lipschitz import _cylinder, lipschitz_check, radial_projection


@pytest.mark.parametrize("r", [0.01, 1 / (6 * math.pi)])
def test_bound_holds(r):
    rep = lipschitz_check(r, 100_000, seed=0)
    assert rep.passed
    assert rep.bound == pytest.approx(1 + 6 * math.pi * r)
    assert rep.pairs + rep.skipped == 100_000
    # the local stretch near x = pi r is at least 1/(1 - pi r)
    assert rep.observed >= 1 / (1 - math.pi * r) * 0.95


def test_seed_reproducible():
    a = lipschitz_check(0.02, 20_000, seed=3)
    b = lipschitz_check(0.02, 20_000, seed=3)
    assert a == b


def test_argument_checks():
    with pytest.raises(ValueError):
        lipschitz_check(0.06)
    with pytest.raises(ValueError):
        lipschitz_check(0.01, samples=100)
    with pytest.raises(ValueError):
        radial_projection([1.0, 0, 0])


def test_projection_examples():
    assert np.allclose(radial_projection([0.5, 1.0, 2.0]), [0, 2.0, 4.0])
    assert np.allclose(radial_projection([[0, 1, 1], [-1, 2, 0]]), [[0, 1, 1], [0, 1, 0]])


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0.001, 0.05))
def test_cylinder_samples_inside(a, b, c, r):
    p = _cylinder(np.array([[a, b, c]]), r)[0]
    assert 0 <= p[0] <= math.pi * r + 1e-15
    assert math.hypot(p[1], p[2]) <= r + 1e-15

"""Closed-form distortion values for cones, simplex boundaries and ray pairs."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geodesics import two_ray_distortion

HALF_PI = math.pi / 2.0
# lower bounds for closed sets: bounded complement component / systole present
BOUND_BOUNDED_COMPLEMENT = math.pi / (2.0 * math.sqrt(2.0))
BOUND_SYSTOLE = math.pi / 2.0


def _check_r(r):
    if not 0.0 < r < 1.0:
        raise ValueError(f"cone parameter r must lie in (0, 1), got {r}")


def cone_antipodal_ratio(r: float) -> float:
    """Ratio for opposite points on one lateral circle: sin(pi r / 2) / r."""
    _check_r(r)
    return math.sin(math.pi * r / 2.0) / r


def cone_rim_ratio(r: float) -> float:
    """Ratio for a lateral point at distance r below the rim vs. the disc center."""
    _check_r(r)
    return math.sqrt(2.0) / math.sqrt(1.0 - r)


def cone_distortion_analytic(r: float) -> float:
    """Distortion of the closed cone S(r): the larger of the two branch ratios."""
    return max(cone_antipodal_ratio(r), cone_rim_ratio(r))


def cone_threshold() -> float:
    """Largest r for which the rim branch stays below pi/2: (pi^2 - 8) / pi^2."""
    return (math.pi**2 - 8.0) / math.pi**2


@dataclass(frozen=True)
class RootResult:
    r0: float
    delta0: float
    bracket_width: float
    iterations: int = 0


class BracketError(ValueError):
    pass


def bisect(f, lo: float, hi: float, tol: float, max_iter: int = 200):
    """Plain bisection on a sign-changing bracket; returns ``(lo, hi, iterations)``."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo, lo, 0
    if fhi == 0.0:
        return hi, hi, 0
    if (flo > 0) == (fhi > 0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f = {flo:.3g}, {fhi:.3g}")
    it = 0
    while hi - lo > tol and it < max_iter:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid, mid, it + 1
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        it += 1
    return lo, hi, it


def cone_branch_gap(r: float) -> float:
    """Antipodal branch minus rim branch; decreasing on (0, 1)."""
    return cone_antipodal_ratio(r) - cone_rim_ratio(r)


def find_r0(tol: float = 1e-10, lo: float = 0.01, hi: float = 0.5) -> RootResult:
    """Locate the cone minimiser where both branch ratios coincide."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b, it = bisect(cone_branch_gap, lo, hi, tol)
    r0 = 0.5 * (a + b)
    return RootResult(r0=r0, delta0=cone_distortion_analytic(r0), bracket_width=b - a, iterations=it)


def threshold_by_bisection(tol: float = 1e-12) -> float:
    """Where the analytic cone distortion crosses pi/2, found numerically."""
    a, b, _ = bisect(lambda r: cone_distortion_analytic(r) - HALF_PI, 0.01, 0.5, tol)
    return 0.5 * (a + b)


def simplex_distortion_analytic(n: int) -> float:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.sqrt(2.0 + 2.0 / n)


@dataclass(frozen=True)
class SimplexWitnesses:
    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    d_intrinsic: float
    d_euclid: float

    @property
    def ratio(self) -> float:
        return self.d_intrinsic / self.d_euclid


def simplex_witnesses(n: int) -> SimplexWitnesses:
    """Facet midpoints p, q of the regular (n+1)-simplex and their ridge midpoint r.

    The simplex is the standard one in R^(n+2); p and q are the centers of
    the facets x_1 = 0 and x_2 = 0, r the center of the ridge x_1 = x_2 = 0.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    dim = n + 2
    p = np.full(dim, 1.0 / (n + 1))
    p[0] = 0.0
    q = np.full(dim, 1.0 / (n + 1))
    q[1] = 0.0
    r = np.full(dim, 1.0 / n)
    r[:2] = 0.0
    pr = float(np.linalg.norm(p - r))
    pq = float(np.linalg.norm(p - q))
    assert abs(pr - 1.0 / math.sqrt(n * (n + 1))) < 1e-12
    assert abs(pq - math.sqrt(2.0) / (n + 1)) < 1e-12
    return SimplexWitnesses(p, q, r, 2.0 * pr, pq)


def dihedral_angle(n: int) -> float:
    """Angle between two n-facets of the regular (n+1)-simplex."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.acos(1.0 / (n + 1))


def simplex_crossover(n_max: int = 50) -> int:
    """First n whose simplex boundary beats the round sphere."""
    for n in range(1, n_max + 1):
        if simplex_distortion_analytic(n) < HALF_PI:
            return n
    raise ValueError("no crossover found")


def two_ray_at_dihedral(n: int) -> float:
    return two_ray_distortion(dihedral_angle(n))

"""Circumradius, inradius and eccentricity of convex meshes in R^3."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull

from .surfaces import MeshError, TriMesh


class NonConvexError(MeshError):
    pass


class LPError(ValueError):
    pass


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float


@dataclass(frozen=True)
class EccentricityResult:
    circumradius: float
    inradius: float
    circumcenter: np.ndarray
    incenter: np.ndarray

    @property
    def ratio(self) -> float:
        return self.circumradius / self.inradius


# ---------------------------------------------------------------------------
# minimal enclosing ball
# ---------------------------------------------------------------------------


def _ball_through(pts: np.ndarray) -> Ball:
    """Smallest ball with all of ``pts`` (at most 4) on its boundary."""
    p0 = pts[0]
    if len(pts) == 1:
        return Ball(p0.copy(), 0.0)
    d = pts[1:] - p0
    # center = p0 + d^T lam with 2 (d d^T) lam = |d|^2
    gram = d @ d.T
    rhs = 0.5 * (d * d).sum(axis=1)
    lam = np.linalg.lstsq(gram, rhs, rcond=None)[0]
    c = p0 + lam @ d
    return Ball(c, float(np.linalg.norm(pts - c, axis=1).max()))


def _contains(ball: Ball, p, slack: float) -> bool:
    return np.linalg.norm(p - ball.center) <= ball.radius + slack


def _welzl(points: np.ndarray, support: list, slack: float) -> Ball:
    """Move-to-front Welzl recursion; recursion depth is bounded by 4."""
    ball = _ball_through(np.array(support)) if support else Ball(points[0].copy(), 0.0)
    if len(support) == 4:
        return ball
    for i in range(len(points)):
        p = points[i]
        if support or i > 0:
            if _contains(ball, p, slack):
                continue
        ball = _welzl(points[:i], support + [p], slack)
    return ball


def minimal_enclosing_ball(points: np.ndarray, seed: int = 0) -> Ball:
    """Exact smallest enclosing ball in R^3 (Welzl, randomised order)."""
    pts = np.asarray(points, float)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) == 0:
        raise ValueError("need a non-empty (N, 3) point array")
    pts = np.unique(pts, axis=0)
    pts = pts[np.random.default_rng(seed).permutation(len(pts))]
    scale = float(np.abs(pts).max()) or 1.0
    return _welzl(pts, [], 1e-12 * scale)


# ---------------------------------------------------------------------------
# Chebyshev center by a dense two-phase simplex
# ---------------------------------------------------------------------------


def simplex_solve(A: np.ndarray, b: np.ndarray, c: np.ndarray, max_iter: int = 10_000):
    """Minimise ``c @ y`` subject to ``A @ y = b``, ``y >= 0``.

    Dense tableau simplex with Bland's rule and a phase with one artificial
    variable per row.  Returns ``(y, duals)`` where ``duals`` solves
    ``A^T duals <= c`` with ``b @ duals`` equal to the optimum.
    """
    A = np.array(A, float)
    b = np.array(b, float)
    c = np.array(c, float)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    # tableau columns: y (n), artificials (m), rhs
    T = np.hstack([A, np.eye(m), b[:, None]])
    basis = list(range(n, n + m))
    tol = 1e-11 * max(1.0, float(np.abs(A).max()))

    def pivot(r, col):
        T[r] /= T[r, col]
        for i in range(m):
            if i != r and T[i, col] != 0.0:
                T[i] -= T[i, col] * T[r]
        basis[r] = col

    def run(cost, allowed):
        for _ in range(max_iter):
            cb = cost[basis]
            reduced = cost[:-1] - cb @ T[:, :-1]
            cand = [j for j in allowed if reduced[j] < -tol]
            if not cand:
                return
            col = cand[0]
            colv = T[:, col]
            rows = [i for i in range(m) if colv[i] > tol]
            if not rows:
                raise LPError("linear program is unbounded")
            ratios = [(T[i, -1] / colv[i], basis[i], i) for i in rows]
            _, _, r = min(ratios)
            pivot(r, col)
        raise LPError("simplex iteration limit reached")

    phase1 = np.concatenate([np.zeros(n), np.ones(m), [0.0]])
    run(phase1, range(n + m))
    if phase1[basis] @ T[:, -1] > 1e-9 * max(1.0, float(np.abs(b).max())):
        raise LPError("linear program is infeasible")
    # drive remaining artificials out of the basis where possible
    for r in range(m):
        if basis[r] >= n:
            nz = [j for j in range(n) if abs(T[r, j]) > tol]
            if nz:
                pivot(r, nz[0])
    cost = np.concatenate([c, np.zeros(m), [0.0]])
    run(cost, range(n))
    y = np.zeros(n + m)
    y[basis] = T[:, -1]
    # duals from the artificial columns, whose original block was the identity
    duals = (cost[basis] @ T[:, n : n + m]) * np.where(neg, -1.0, 1.0)
    return y[:n], duals


def chebyshev_center(normals: np.ndarray, offsets: np.ndarray):
    """Largest ball in ``{x : normals @ x <= offsets}``.

    Solves the dual ``min offsets @ y`` over ``y >= 0`` with
    ``normals^T y = 0`` and ``|normals|^T y = 1``; the optimal simplex
    multipliers are the center and radius.
    """
    a = np.asarray(normals, float)
    bvec = np.asarray(offsets, float)
    norms = np.linalg.norm(a, axis=1)
    A = np.vstack([a.T, norms[None, :]])
    rhs = np.zeros(a.shape[1] + 1)
    rhs[-1] = 1.0
    _, duals = simplex_solve(A, rhs, bvec)
    return duals[:-1], float(duals[-1])


# ---------------------------------------------------------------------------


def _check_convex(mesh: TriMesh, hull: ConvexHull, tol: float) -> None:
    eq = hull.equations
    worst = np.inf
    for chunk in np.array_split(mesh.vertices, max(1, len(mesh.vertices) // 2000)):
        sd = chunk @ eq[:, :3].T + eq[:, 3]
        worst = min(worst, float(sd.max(axis=1).min()))
    if worst < -tol:
        raise NonConvexError(
            f"mesh is not convex: a vertex lies {-worst:.3g} inside its convex hull"
        )


def eccentricity(mesh: TriMesh, convex: bool = True, tol: float = 1e-6) -> EccentricityResult:
    """Circumradius / inradius of a convex closed mesh in R^3.

    The circumradius is that of the minimal enclosing ball of the vertices;
    the inradius is that of the Chebyshev center of the hull facets.  Every
    vertex must lie on the hull boundary within ``tol * diameter``.
    """
    if not convex:
        raise ValueError("eccentricity is defined here for convex meshes only")
    if mesh.dim != 3:
        raise ValueError("eccentricity needs vertices in R^3")
    hull = ConvexHull(mesh.vertices)
    _check_convex(mesh, hull, tol * mesh.diameter())
    ball = minimal_enclosing_ball(mesh.vertices)
    eq = _merge_coplanar(hull.equations)
    center, rho = chebyshev_center(eq[:, :3], -eq[:, 3])
    return EccentricityResult(ball.radius, rho, ball.center, center)


def _merge_coplanar(eq: np.ndarray) -> np.ndarray:
    # qhull splits flat facets into triangles with identical planes
    return np.unique(np.round(eq, 12), axis=0)

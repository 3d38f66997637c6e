"""Intrinsic distances on triangulated surfaces.

Two routes are provided.  :class:`SteinerGraph` approximates geodesics on
any closed mesh by shortest paths through edge-subdivision nodes; it only
ever over-estimates.  The remaining functions are exact closed forms or
unfolding constructions for the developable pieces (cone lateral surface,
adjacent simplex facets), the round sphere and a pair of rays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import dijkstra

from .surfaces import TriMesh, unique_edges

ON_SURFACE_TOL = 1e-9


@dataclass(frozen=True)
class GeodesicResult:
    distance: float
    path: np.ndarray
    exact: bool = True

    @property
    def path_length(self) -> float:
        return float(np.linalg.norm(np.diff(self.path, axis=0), axis=1).sum())


# ---------------------------------------------------------------------------
# Steiner graph
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SteinerGraph:
    """Edge-subdivided shortest-path graph of a triangle mesh.

    Node ``i < V`` is mesh vertex ``i``.  Edge ``e`` carries ``edge_k[e]``
    evenly spaced interior points, numbered from ``V + offsets[e]`` and
    counted from the lower-indexed endpoint.  Within every triangle all
    boundary nodes are linked by straight arcs, except collinear nodes of
    one side that are not neighbours.
    """

    mesh: TriMesh
    k: int
    positions: np.ndarray
    edges: np.ndarray
    matrix: sparse.csr_matrix
    edge_k: np.ndarray = field(repr=False)
    offsets: np.ndarray = field(repr=False)

    @property
    def n_nodes(self) -> int:
        return self.positions.shape[0]

    @property
    def n_arcs(self) -> int:
        return self.matrix.nnz // 2

    def edge_nodes(self, e: int) -> np.ndarray:
        """Nodes along edge ``e`` ordered from ``edges[e, 0]`` to ``edges[e, 1]``."""
        a, b = self.edges[e]
        inner = self.mesh.n_vertices + self.offsets[e] + np.arange(self.edge_k[e])
        return np.concatenate([[a], inner, [b]])


def _triangle_arcs(triangles, inverse, edges, offsets, counts, n_vertices):
    """Node pairs linked inside triangles whose sides carry ``counts`` points."""
    k0, k1, k2 = counts
    sizes = (k0, k1, k2)
    m = 3 + k0 + k1 + k2
    table = np.empty((len(triangles), m), dtype=np.int64)
    side = np.empty(m, dtype=np.int64)
    pos = np.empty(m, dtype=np.int64)
    col = 0
    for local, kk in enumerate(sizes):
        a = triangles[:, local]
        e = inverse[:, local]
        table[:, col] = a
        side[col], pos[col] = local, 0
        if kk:
            inner = n_vertices + offsets[e][:, None] + np.arange(kk)[None, :]
            forward = edges[e, 0] == a
            inner = np.where(forward[:, None], inner, inner[:, ::-1])
            table[:, col + 1 : col + 1 + kk] = inner
            side[col + 1 : col + 1 + kk] = local
            pos[col + 1 : col + 1 + kk] = np.arange(1, kk + 1)
        col += kk + 1
    length = np.array(sizes) + 1
    ii, jj = np.triu_indices(m, 1)

    # a corner (pos 0) also ends the previous side at position k+1
    def prev(s_):
        return (s_ - 1) % 3

    def along(idx, other):
        p = pos[idx].copy()
        wrap = (pos[idx] == 0) & (side[other] == prev(side[idx]))
        p[wrap] = length[side[other][wrap]]
        return p

    same_side = (
        (side[ii] == side[jj])
        | ((pos[jj] == 0) & (prev(side[jj]) == side[ii]))
        | ((pos[ii] == 0) & (prev(side[ii]) == side[jj]))
    )
    gap = np.abs(along(ii, jj) - along(jj, ii))
    keep = ~same_side | (gap == 1)
    ii, jj = ii[keep], jj[keep]
    return table[:, ii].ravel(), table[:, jj].ravel()


def build_steiner_graph(mesh: TriMesh, k: int = 3, edge_k=None) -> SteinerGraph:
    """Build the Steiner graph of ``mesh`` with ``k`` points per edge.

    ``edge_k`` optionally maps sorted vertex pairs ``(i, j)`` to their own
    point count, overriding ``k`` on those edges.  Only edge lengths of the
    arcs enter, so this works in any ambient dimension.
    """
    if int(k) != k or k < 0:
        raise ValueError(f"k must be a non-negative integer, got {k}")
    k = int(k)
    V = mesh.n_vertices
    tris = mesh.triangles
    edges, inverse, _ = unique_edges(tris)
    E = len(edges)
    counts = np.full(E, k, dtype=np.int64)
    if edge_k:
        keys = edges[:, 0].astype(np.int64) * V + edges[:, 1]
        lookup = {int(i) * V + int(j): int(c) for (i, j), c in edge_k.items()}
        for e in np.flatnonzero(np.isin(keys, np.fromiter(lookup, np.int64, len(lookup)))):
            counts[e] = lookup[int(keys[e])]
    offsets = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(np.int64)

    owner = np.repeat(np.arange(E), counts)
    step = np.arange(len(owner)) - offsets[owner] + 1
    t = (step / (counts[owner] + 1))[:, None]
    pa = mesh.vertices[edges[owner, 0]]
    pb = mesh.vertices[edges[owner, 1]]
    positions = np.vstack([mesh.vertices, pa + t * (pb - pa)])
    n = positions.shape[0]

    tri_counts = counts[inverse]
    groups = np.unique(tri_counts, axis=0, return_inverse=True)[1].ravel()
    src, dst = [], []
    for g in np.unique(groups):
        sel = groups == g
        s_, d_ = _triangle_arcs(tris[sel], inverse[sel], edges, offsets, tuple(tri_counts[sel][0]), V)
        src.append(s_)
        dst.append(d_)
    src, dst = np.concatenate(src), np.concatenate(dst)
    lo, hi = np.minimum(src, dst), np.maximum(src, dst)
    key = np.unique(lo * n + hi)
    lo, hi = key // n, key % n
    w = np.linalg.norm(positions[lo] - positions[hi], axis=1)
    if np.any(w <= 0):
        raise ValueError("zero-length arc: coincident graph nodes")
    mat = sparse.csr_matrix(
        (np.concatenate([w, w]), (np.concatenate([lo, hi]), np.concatenate([hi, lo]))),
        shape=(n, n),
    )
    positions.setflags(write=False)
    return SteinerGraph(mesh, k, positions, edges, mat, counts, offsets)


def single_source(graph: SteinerGraph, src: int, return_predecessors: bool = False):
    """Graph distances from node ``src`` to every node (``inf`` if unreachable)."""
    if not 0 <= src < graph.n_nodes:
        raise IndexError(f"node {src} not in graph")
    return dijkstra(
        graph.matrix, directed=True, indices=int(src), return_predecessors=return_predecessors
    )


def multi_source(graph: SteinerGraph, sources: Sequence[int], targets=None) -> np.ndarray:
    """Distance rows for many sources, optionally restricted to ``targets`` columns."""
    d = dijkstra(graph.matrix, directed=True, indices=np.asarray(sources, dtype=np.int64))
    d = np.atleast_2d(d)
    return d if targets is None else d[:, targets]


def trace_path(predecessors: np.ndarray, src: int, dst: int) -> list:
    path = [dst]
    while path[-1] != src:
        nxt = predecessors[path[-1]]
        if nxt < 0:
            raise ValueError(f"node {dst} is unreachable from {src}")
        path.append(int(nxt))
    return path[::-1]


def graph_geodesic(graph: SteinerGraph, src: int, dst: int) -> GeodesicResult:
    dist, pred = single_source(graph, src, return_predecessors=True)
    nodes = trace_path(pred, src, dst)
    return GeodesicResult(float(dist[dst]), graph.positions[nodes], exact=False)


# ---------------------------------------------------------------------------
# exact oracles
# ---------------------------------------------------------------------------


def _check_cone(r):
    if not 0.0 < r < 1.0:
        raise ValueError(f"cone parameter r must lie in (0, 1), got {r}")


def _cone_point(r, s, theta):
    h = math.sqrt(1.0 - r * r)
    return np.array([s * r * math.cos(theta), s * r * math.sin(theta), s * h])


def _unrolled_angle(r, theta1, theta2):
    d = abs(theta1 - theta2) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d) * r


def _lateral_length(r, s1, t1, s2, t2):
    phi = _unrolled_angle(r, t1, t2)
    if phi <= math.pi:
        return math.sqrt(max(s1 * s1 + s2 * s2 - 2.0 * s1 * s2 * math.cos(phi), 0.0)), phi
    return s1 + s2, phi


def _lateral_path(r, s1, t1, s2, t2, samples=33):
    """Polyline of the lateral geodesic, traced in the unrolled sector."""
    length, phi = _lateral_length(r, s1, t1, s2, t2)
    if phi > math.pi:
        return np.array([_cone_point(r, s1, t1), np.zeros(3), _cone_point(r, s2, t2)])
    # direction of travel around the axis
    d = (t2 - t1) % (2.0 * math.pi)
    sign = 1.0 if d <= math.pi else -1.0
    a = np.array([s1, 0.0])
    b = np.array([s2 * math.cos(phi), s2 * math.sin(phi)])
    pts = []
    for lam in np.linspace(0.0, 1.0, samples):
        q = a + lam * (b - a)
        rho = float(np.hypot(*q))
        ang = math.atan2(q[1], q[0])
        pts.append(_cone_point(r, rho, t1 + sign * ang / r))
    return np.array(pts)


def cone_lateral_distance(r: float, s1: float, theta1: float, s2: float, theta2: float) -> GeodesicResult:
    """Geodesic on the lateral surface of S(r) between two slant/angle points.

    The lateral surface unrolls to a planar sector of angle ``2*pi*r``.  If
    the unrolled angle between the points is at most ``pi`` the geodesic is
    the chord, otherwise it runs through the apex.
    """
    _check_cone(r)
    for s in (s1, s2):
        if not 0.0 <= s <= 1.0 + ON_SURFACE_TOL:
            raise ValueError(f"slant distance must lie in [0, 1], got {s}")
    length, _ = _lateral_length(r, s1, theta1, s2, theta2)
    return GeodesicResult(length, _lateral_path(r, s1, theta1, s2, theta2), exact=True)


def _golden_min(f, a, b, tol=1e-12, max_iter=200):
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) < tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _periodic_min(f, seeds=64, tol=1e-11):
    """Global minimum of a 2*pi-periodic function by bracketing on a seed grid."""
    grid = 2.0 * math.pi * np.arange(seeds) / seeds
    vals = np.array([f(t) for t in grid])
    best_x, best_f = grid[int(vals.argmin())], float(vals.min())
    step = 2.0 * math.pi / seeds
    for i in range(seeds):
        if vals[i] <= vals[i - 1] and vals[i] <= vals[(i + 1) % seeds]:
            x, fx = _golden_min(f, grid[i] - step, grid[i] + step, tol)
            if fx < best_f:
                best_x, best_f = x, fx
    return best_x % (2.0 * math.pi), best_f


def _classify_cone_point(r, p):
    p = np.asarray(p, float)
    h = math.sqrt(1.0 - r * r)
    rho = math.hypot(p[0], p[1])
    theta = math.atan2(p[1], p[0])
    on_disc = abs(p[2] - h) <= ON_SURFACE_TOL and rho <= r + ON_SURFACE_TOL
    s = math.sqrt(rho * rho + p[2] * p[2])
    on_lateral = (
        -ON_SURFACE_TOL <= p[2] <= h + ON_SURFACE_TOL
        and abs(rho * h - r * p[2]) <= ON_SURFACE_TOL
    )
    if not (on_disc or on_lateral):
        raise ValueError(f"point {p.tolist()} is not on the cone S({r})")
    return on_disc, on_lateral, min(s, 1.0), theta, p


def cone_surface_distance(r: float, pA, pB) -> GeodesicResult:
    """Exact intrinsic distance on the closed cone S(r).

    Minimises over the path classes: lateral only, disc only, one rim
    crossing (1-D search over the crossing angle) and two rim crossings
    (coordinate descent over both angles, disc chord in between).
    """
    _check_cone(r)
    discA, latA, sA, tA, pA = _classify_cone_point(r, pA)
    discB, latB, sB, tB, pB = _classify_cone_point(r, pB)
    h = math.sqrt(1.0 - r * r)
    candidates = []

    def rim(theta):
        return np.array([r * math.cos(theta), r * math.sin(theta), h])

    if latA and latB:
        d = cone_lateral_distance(r, sA, tA, sB, tB)
        candidates.append((d.distance, d.path))
    if discA and discB:
        candidates.append((float(np.linalg.norm(pA - pB)), np.array([pA, pB])))

    def one_crossing(lat_s, lat_t, disc_p):
        f = lambda th: _lateral_length(r, lat_s, lat_t, 1.0, th)[0] + float(np.linalg.norm(rim(th) - disc_p))
        th, val = _periodic_min(f)
        return th, val

    if latA and discB:
        th, val = one_crossing(sA, tA, pB)
        path = np.vstack([_lateral_path(r, sA, tA, 1.0, th), [pB]])
        candidates.append((val, path))
    if discA and latB:
        th, val = one_crossing(sB, tB, pA)
        path = np.vstack([[pA], _lateral_path(r, 1.0, th, sB, tB)])
        candidates.append((val, path))
    if latA and latB:
        def two(t1, t2):
            return (
                _lateral_length(r, sA, tA, 1.0, t1)[0]
                + 2.0 * r * abs(math.sin(0.5 * (t1 - t2)))
                + _lateral_length(r, 1.0, t2, sB, tB)[0]
            )

        best = None
        for t2_seed in 2.0 * math.pi * np.arange(16) / 16:
            t1, t2 = tA, t2_seed
            prev = math.inf
            for _ in range(60):
                t1, _v = _periodic_min(lambda x: two(x, t2), seeds=16)
                t2, val = _periodic_min(lambda x: two(t1, x), seeds=16)
                if prev - val < 1e-13:
                    break
                prev = val
            if best is None or val < best[0]:
                best = (val, t1, t2)
        val, t1, t2 = best
        path = np.vstack([_lateral_path(r, sA, tA, 1.0, t1), _lateral_path(r, 1.0, t2, sB, tB)])
        candidates.append((val, path))

    dist, path = min(candidates, key=lambda c: c[0])
    return GeodesicResult(float(dist), path, exact=True)


def sphere_distance(radius: float, p, q) -> GeodesicResult:
    """Great-circle distance on the sphere of the given radius about the origin."""
    p, q = np.asarray(p, float), np.asarray(q, float)
    for x in (p, q):
        if abs(np.linalg.norm(x) - radius) > ON_SURFACE_TOL * max(1.0, radius):
            raise ValueError(f"point {x.tolist()} is not on the sphere of radius {radius}")
    c = float(np.clip(np.dot(p, q) / radius**2, -1.0, 1.0))
    angle = math.acos(c)
    if angle < 1e-15:
        return GeodesicResult(0.0, np.array([p, q]), exact=True)
    # slerp polyline; for antipodal points any great half-circle works
    if math.pi - angle < 1e-12:
        helper = np.eye(3)[int(np.argmin(np.abs(p)))]
        axis = np.cross(p, helper)
        axis /= np.linalg.norm(axis)
        mid = np.cross(axis, p)
        ts = np.linspace(0.0, math.pi, 129)
        path = np.outer(np.cos(ts), p) + np.outer(np.sin(ts), mid)
    else:
        ts = np.linspace(0.0, 1.0, 129)
        s = math.sin(angle)
        path = (np.outer(np.sin((1 - ts) * angle), p) + np.outer(np.sin(ts * angle), q)) / s
    return GeodesicResult(radius * angle, path, exact=True)


def two_ray_distortion(alpha: float) -> float:
    """Distortion of two rays meeting at angle ``alpha``: ``1/sin(alpha/2)``."""
    if not 0.0 < alpha <= math.pi:
        raise ValueError(f"ray angle must lie in (0, pi], got {alpha}")
    return 1.0 / math.sin(alpha / 2.0)


def two_ray_sampled(alpha: float, samples: int = 401) -> float:
    """Brute-force sup of (t + s)/|t e1 - s e2| over a grid on two unit segments."""
    if not 0.0 < alpha <= math.pi:
        raise ValueError(f"ray angle must lie in (0, pi], got {alpha}")
    t = np.linspace(0.0, 1.0, samples)[1:]
    T, S = np.meshgrid(t, t, indexing="ij")
    chord = np.sqrt(T * T + S * S - 2.0 * T * S * math.cos(alpha))
    return float(((T + S) / chord).max())


# ---------------------------------------------------------------------------
# simplex facets
# ---------------------------------------------------------------------------


def simplex_facet_frame(n: int):
    """Unit normal data for the standard simplex in R^(n+2).

    Returns the vertices ``e_1..e_(n+2)`` as rows.
    """
    return np.eye(n + 2)


def _facet_of(point, tol=1e-9):
    zeros = np.flatnonzero(np.abs(point) <= tol)
    return set(zeros.tolist())


def ridge_unfold_distance(n: int, pA, pB, facet_a: Optional[int] = None, facet_b: Optional[int] = None) -> GeodesicResult:
    """Shortest path between points on two adjacent facets of the simplex boundary.

    The simplex is ``{x in R^(n+2): sum x = 1, x >= 0}``; facet ``i`` is
    where ``x_i = 0``.  Facet B is rotated about the common ridge into the
    hyperplane of facet A; if the straight segment between the unfolded
    points meets the ridge inside the simplex its length is returned,
    otherwise the best broken path through a ridge point.
    """
    pA, pB = np.asarray(pA, float), np.asarray(pB, float)
    dim = n + 2
    if pA.shape != (dim,) or pB.shape != (dim,):
        raise ValueError(f"points must lie in R^{dim}")
    for p in (pA, pB):
        if abs(p.sum() - 1.0) > 1e-9 or p.min() < -1e-9:
            raise ValueError(f"point {p.tolist()} is not on the simplex")
    za, zb = _facet_of(pA), _facet_of(pB)
    if facet_a is None or facet_b is None:
        pairs = [(i, j) for i in za for j in zb if i != j]
        if not pairs:
            if za & zb:
                return GeodesicResult(float(np.linalg.norm(pA - pB)), np.array([pA, pB]))
            raise ValueError("points do not lie on the simplex boundary")
        facet_a, facet_b = pairs[0]
    if facet_a == facet_b:
        raise ValueError("facets must be distinct (adjacent) facets")
    if facet_a not in za or facet_b not in zb:
        raise ValueError("points are not on the requested facets")

    # coordinates inside the ridge x_a = x_b = 0
    centroid = np.full(dim, 1.0 / (dim - 2))
    centroid[[facet_a, facet_b]] = 0.0

    def inward(i, j):
        # unit vector inside facet i (x_i = 0), orthogonal to the ridge, pointing into it
        u = np.full(dim, -1.0 / (dim - 2))
        u[i] = 0.0
        u[j] = 1.0
        # remove any component along the ridge's affine span (sum-zero, x_i = x_j = 0)
        return u / np.linalg.norm(u)

    ua, ub = inward(facet_a, facet_b), inward(facet_b, facet_a)

    def split(p, u):
        rel = p - centroid
        height = float(np.dot(rel, u))
        along = rel - height * u
        return height, along

    ha, ra = split(pA, ua)
    hb, rb = split(pB, ub)
    # after unfolding, A sits at +ha and B at -hb on the normal line, ridge components unchanged
    lam = ha / (ha + hb) if ha + hb > 0 else 0.5
    cross = centroid + ra + lam * (rb - ra)
    if cross.min() >= -1e-12:
        length = math.sqrt((ha + hb) ** 2 + float(np.dot(rb - ra, rb - ra)))
        return GeodesicResult(length, np.array([pA, cross, pB]))

    # the unfolded segment leaves the ridge: minimise |pA - x| + |x - pB| over the ridge simplex
    ridge_idx = [i for i in range(dim) if i not in (facet_a, facet_b)]
    x = _ridge_minimise(pA, pB, ridge_idx, dim)
    length = float(np.linalg.norm(pA - x) + np.linalg.norm(x - pB))
    return GeodesicResult(length, np.array([pA, x, pB]))


def _ridge_minimise(pA, pB, ridge_idx, dim, tol=1e-10):
    """Frank-Wolfe with exact line search over the ridge simplex (convex objective)."""
    verts = np.eye(dim)[ridge_idx]
    x = verts.mean(axis=0)

    def f(y):
        return np.linalg.norm(pA - y) + np.linalg.norm(y - pB)

    for _ in range(2000):
        ga = (x - pA) / max(np.linalg.norm(x - pA), 1e-300)
        gb = (x - pB) / max(np.linalg.norm(x - pB), 1e-300)
        g = ga + gb
        s = verts[int(np.argmin(verts @ g))]
        d = s - x
        gap = -float(np.dot(g, d))
        if gap < tol:
            break
        t, _ = _golden_min(lambda a: f(x + a * d), 0.0, 1.0, tol=1e-14)
        x = x + t * d
    return x

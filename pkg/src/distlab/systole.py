"""Shortest non-contractible loops on parametrised tori."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import dijkstra

from .geodesics import SteinerGraph, build_steiner_graph
from .surfaces import MeshError, TriMesh, symmetry_orbits

TWO_PI = 2.0 * math.pi
CLASSES = [c for c in itertools.product((-1, 0, 1), repeat=2) if c != (0, 0)]


@dataclass
class SystoleResult:
    """Shortest loop found, as a closed polyline of graph-node positions."""

    length: float
    loop: np.ndarray
    winding: tuple
    node_ids: np.ndarray = None
    graph: SteinerGraph = None

    def polyline_length(self) -> float:
        return float(np.linalg.norm(np.diff(self.loop, axis=0), axis=1).sum())


def _wrap(d):
    return (d + math.pi) % TWO_PI - math.pi


def node_params(graph: SteinerGraph) -> np.ndarray:
    """``(u, v)`` in ``[0, 2 pi)`` for every graph node."""
    pc = graph.mesh.param_coords
    e = graph.edges
    owner = np.repeat(np.arange(len(e)), graph.edge_k)
    step = np.arange(len(owner)) - graph.offsets[owner] + 1
    t = (step / (graph.edge_k[owner] + 1))[:, None]
    pa = pc[e[owner, 0]]
    inner = (pa + t * _wrap(pc[e[owner, 1]] - pa)) % TWO_PI
    return np.vstack([pc, inner])


def cover_matrix(graph: SteinerGraph, params: np.ndarray):
    """Arcs of the 3x3 cover; node ``(n, cell)`` has index ``cell * N + n``.

    Cells are numbered ``3 * (a + 1) + (b + 1)`` for lattice shift ``(a, b)``.
    Arcs leaving the 3x3 window are dropped.
    """
    N = graph.n_nodes
    coo = sparse.triu(graph.matrix).tocoo()
    i, j, w = coo.row, coo.col, coo.data
    # lattice jump of each arc, from the unwrapped parameter difference
    raw = params[j] - params[i]
    jump = np.rint((raw - _wrap(raw)) / TWO_PI).astype(int)
    rows, cols, vals = [], [], []
    for a, b in itertools.product((-1, 0, 1), repeat=2):
        ta, tb = a + jump[:, 0], b + jump[:, 1]
        ok = (np.abs(ta) <= 1) & (np.abs(tb) <= 1)
        src = (3 * (a + 1) + (b + 1)) * N + i[ok]
        dst = (3 * (ta[ok] + 1) + (tb[ok] + 1)) * N + j[ok]
        rows += [src, dst]
        cols += [dst, src]
        vals += [w[ok], w[ok]]
    n = 9 * N
    return sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )


def _cell(a, b):
    return 3 * (a + 1) + (b + 1)


def systole_torus(mesh: TriMesh, k: int = 3) -> SystoleResult:
    """Shortest loop with nonzero winding ``(a, b)``, ``|a|, |b| <= 1``.

    For every base vertex (one per symmetry orbit when the mesh carries a
    symmetry, since the shift maps loops to loops of equal length and
    class), the distance from its copy in the central cell to its copy in
    cell ``(a, b)`` of the parameter cover is the length of the shortest
    graph loop through it in that class.
    """
    if mesh.param_coords is None:
        raise MeshError("systole search needs (u, v) parameter coordinates")
    if mesh.expected_genus != 1 or mesh.euler_characteristic() != 0:
        raise MeshError("systole search needs a genus-1 mesh")
    graph = build_steiner_graph(mesh, k)
    params = node_params(graph)
    cover = cover_matrix(graph, params)
    N = graph.n_nodes
    if mesh.symmetry is not None:
        sources = np.array([o[0] for o in symmetry_orbits(mesh.symmetry)])
    else:
        sources = np.arange(mesh.n_vertices)

    best = (math.inf, None, None)
    for s in sources:
        dist, pred = dijkstra(cover, directed=True, indices=_cell(0, 0) * N + s, return_predecessors=True)
        for a, b in CLASSES:
            d = dist[_cell(a, b) * N + s]
            if d < best[0] - 1e-12:
                best = (d, (a, b), (s, pred))
    length, winding, (s, pred) = best
    if not math.isfinite(length):
        raise MeshError("no non-contractible loop found in the cover")
    a, b = winding
    path = [_cell(a, b) * N + s]
    start = _cell(0, 0) * N + s
    while path[-1] != start:
        path.append(int(pred[path[-1]]))
    ids = np.array(path[::-1]) % N
    loop = graph.positions[ids]
    return SystoleResult(float(length), loop, _canonical(winding), ids, graph)


def _canonical(w):
    a, b = w
    if a < 0 or (a == 0 and b < 0):
        return (-a, -b)
    return (a, b)


@dataclass
class LoopPairCheck:
    along_loop: float
    full_mesh: float

    @property
    def rel_gap(self) -> float:
        return abs(self.along_loop - self.full_mesh) / self.along_loop


def loop_distance_pairs(result: SystoleResult, pairs: int = 8, seed: int = 0) -> list:
    """Compare along-loop and full-graph distances for sampled loop node pairs."""
    ids = result.node_ids[:-1]
    seg = np.linalg.norm(np.diff(result.loop, axis=0), axis=1)
    arc = np.concatenate([[0.0], np.cumsum(seg)])[:-1]
    L = result.length
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(ids), size=(pairs, 2), replace=len(ids) < 2 * pairs)
    out = []
    for i, j in picks:
        if i == j:
            j = (i + len(ids) // 2) % len(ids)
        along = abs(arc[i] - arc[j])
        along = min(along, L - along)
        full = float(dijkstra(result.graph.matrix, directed=True, indices=int(ids[i]))[ids[j]])
        out.append(LoopPairCheck(float(along), full))
    return out

"""Mesh estimate of the distortion sup d(p, q) / |p - q|.

The estimate is the largest ratio of Steiner-graph distance to Euclidean
distance over all vertex pairs, followed by rounds of local refinement
around the current witness pair.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components, dijkstra

from .analytic import BOUND_BOUNDED_COMPLEMENT, BOUND_SYSTOLE
from .geodesics import SteinerGraph, build_steiner_graph
from .surfaces import (
    MeshError,
    TriMesh,
    refine_triangles,
    symmetry_orbits,
    unique_edges,
    validate_mesh,
    vertex_rings,
)

log = logging.getLogger(__name__)

PAIR_EXCLUSION = 1e-6
WORK_ELEMENTS = 2e7  # floats per Dijkstra batch


class DisconnectedMeshError(MeshError):
    pass


@dataclass
class DistortionEstimate:
    """Largest intrinsic/Euclidean ratio found, with its witness pair.

    ``h_max`` is the longest edge of the final mesh, ``witness_h`` the
    longest edge touching either witness (the local resolution at which the
    sup was resolved).  ``refinement_history`` holds ``(witness_h, value)``
    per round, starting with the unrefined mesh.
    """

    value: float
    witness_p: np.ndarray
    witness_q: np.ndarray
    intrinsic: float
    euclidean: float
    h_max: float
    witness_h: float
    refinement_history: list = field(default_factory=list)
    k: int = 3
    witness_ids: tuple = (0, 0)
    mesh: TriMesh = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "witness_p": [float(x) for x in self.witness_p],
            "witness_q": [float(x) for x in self.witness_q],
            "intrinsic": self.intrinsic,
            "euclidean": self.euclidean,
            "h_max": self.h_max,
            "witness_h": self.witness_h,
            "history": [[float(h), float(v)] for h, v in self.refinement_history],
        }


def worker_count() -> int:
    env = os.environ.get("DISTLAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _row_maxima(graph: SteinerGraph, sources: np.ndarray, min_euclid: float):
    """Per-source maximum ratio over all mesh-vertex targets."""
    X = graph.mesh.vertices
    V = len(X)
    targets = np.arange(V)
    batch = max(1, int(WORK_ELEMENTS // graph.n_nodes))
    chunks = [sources[i : i + batch] for i in range(0, len(sources), batch)]

    def run(src):
        d = np.atleast_2d(dijkstra(graph.matrix, directed=True, indices=src))[:, :V]
        e = np.linalg.norm(X[src][:, None, :] - X[None, :, :], axis=2)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(e >= min_euclid, d / e, -np.inf)
        arg = ratio.argmax(axis=1)
        return ratio[np.arange(len(src)), arg], arg, d[np.arange(len(src)), arg]

    workers = min(worker_count(), len(chunks))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    if not parts:
        return np.empty(0), np.empty(0, int), np.empty(0)
    return tuple(np.concatenate(x) for x in zip(*parts))


def _all_rows(graph: SteinerGraph, min_euclid: float):
    """Row maxima for every vertex, using the mesh symmetry when present.

    Rows of a vertex orbit under the symmetry are images of one another, so
    only one representative per orbit is run.
    """
    mesh = graph.mesh
    V = mesh.n_vertices
    if mesh.symmetry is None:
        return _row_maxima(graph, np.arange(V), min_euclid)
    sigma = mesh.symmetry
    orbits = symmetry_orbits(sigma)
    reps = np.array([o[0] for o in orbits])
    m, g, d = _row_maxima(graph, reps, min_euclid)
    row_max, row_arg, row_dist = np.empty(V), np.empty(V, np.int64), np.empty(V)
    lengths = np.array([len(o) for o in orbits])
    cur = g.copy()
    for j in range(int(lengths.max())):
        live = np.flatnonzero(lengths > j)
        members = np.array([orbits[i][j] for i in live])
        row_max[members], row_arg[members], row_dist[members] = m[live], cur[live], d[live]
        cur = sigma[cur]
    return row_max, row_arg, row_dist


def _witness_h(mesh: TriMesh, ids) -> float:
    t = mesh.triangles
    tri = t[np.isin(t, ids).any(axis=1)]
    p = mesh.vertices[tri]
    lengths = np.linalg.norm(p - np.roll(p, 1, axis=1), axis=2)
    return float(lengths.max())


def estimate_distortion(mesh: TriMesh, k: int = 3, budget: int = 2) -> DistortionEstimate:
    """Estimate the distortion of a closed mesh.

    All vertex pairs closer than ``1e-6 * diameter`` are ignored.  Each of
    the ``budget`` refinement rounds splits the triangles within two rings
    of both witnesses (new vertices placed on the underlying surface when
    the mesh knows it), doubles the point count on the new edges, rebuilds
    the graph and recomputes the rows of every source that lies in, or last
    peaked in, the refined patch.
    """
    validate_mesh(mesh)
    if budget < 0:
        raise ValueError("budget must be >= 0")
    n_comp, _ = connected_components(
        _vertex_adjacency(mesh), directed=False, return_labels=True
    )
    if n_comp != 1:
        raise DisconnectedMeshError(f"mesh has {n_comp} connected components")

    min_euclid = PAIR_EXCLUSION * mesh.diameter()
    edge_k: dict = {}
    graph = build_steiner_graph(mesh, k)
    row_max, row_arg, row_dist = _all_rows(graph, min_euclid)

    def current():
        i = int(np.argmax(row_max))
        return i, int(row_arg[i])

    history = []
    a, b = current()
    history.append((_witness_h(mesh, [a, b]), float(row_max[a])))
    log.info("initial estimate %.6f (V=%d, k=%d)", row_max[a], mesh.n_vertices, k)

    for rnd in range(budget):
        region = vertex_rings(mesh, [a, b], rings=2)
        old_edges = {tuple(e) for e in mesh.edges().tolist()}
        mesh, changed, _, _ = refine_triangles(mesh, region)
        # edges born this round carry doubled point counts
        fine = (k + 1) * 2 ** (rnd + 1) - 1
        for e in unique_edges(mesh.triangles[changed])[0].tolist():
            if tuple(e) not in old_edges:
                edge_k[tuple(e)] = fine
        graph = build_steiner_graph(mesh, k, edge_k)
        touched = np.unique(mesh.triangles[changed])
        V_old = len(row_max)
        grow = mesh.n_vertices - V_old
        row_max = np.concatenate([row_max, np.full(grow, -np.inf)])
        row_arg = np.concatenate([row_arg, np.zeros(grow, int)])
        row_dist = np.concatenate([row_dist, np.zeros(grow)])
        stale = np.flatnonzero(np.isin(row_arg, touched))
        redo = np.union1d(touched, stale)
        m, g, d = _row_maxima(graph, redo, min_euclid)
        row_max[redo], row_arg[redo], row_dist[redo] = m, g, d
        a, b = current()
        history.append((_witness_h(mesh, [a, b]), float(row_max[a])))
        log.info("round %d: %.6f (V=%d, redo=%d)", rnd + 1, row_max[a], mesh.n_vertices, len(redo))

    X = mesh.vertices
    euclid = float(np.linalg.norm(X[a] - X[b]))
    intrinsic = float(row_dist[a])
    edges = mesh.edges()
    h_max = float(np.linalg.norm(X[edges[:, 0]] - X[edges[:, 1]], axis=1).max())
    return DistortionEstimate(
        value=intrinsic / euclid,
        witness_p=X[a].copy(),
        witness_q=X[b].copy(),
        intrinsic=intrinsic,
        euclidean=euclid,
        h_max=h_max,
        witness_h=_witness_h(mesh, [a, b]),
        refinement_history=history,
        k=k,
        witness_ids=(a, b),
        mesh=mesh,
    )


def _vertex_adjacency(mesh: TriMesh):
    from scipy import sparse

    e = mesh.edges()
    n = mesh.n_vertices
    return sparse.coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))


@dataclass(frozen=True)
class BoundCheck:
    name: str
    bound: float
    value: float
    tolerance: float

    @property
    def margin(self) -> float:
        return self.value - self.bound

    @property
    def passed(self) -> bool:
        return self.value >= self.bound - self.tolerance


@dataclass
class BoundReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def verify_lower_bounds(
    estimate, has_bounded_complement: bool, genus: int, mesh_tol: float = 0.0
) -> BoundReport:
    """Compare an estimate with the lower bounds that apply to its surface.

    A bounded complementary component forces ``pi / (2 sqrt 2)``; positive
    genus (hence a systole) forces ``pi / 2``.  ``mesh_tol`` is an absolute
    allowance for discretisation error.  Failures are reported, not raised.
    """
    value = estimate.value if hasattr(estimate, "value") else float(estimate)
    checks = []
    if has_bounded_complement:
        checks.append(BoundCheck("bounded_complement", BOUND_BOUNDED_COMPLEMENT, value, mesh_tol))
    if genus >= 1:
        checks.append(BoundCheck("systole", BOUND_SYSTOLE, value, mesh_tol))
    return BoundReport(checks)

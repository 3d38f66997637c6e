"""Triangulated embeddings of the surface families studied here.

Every generator returns an immutable :class:`TriMesh` that has already been
run through :func:`validate_mesh`.  Coordinates are plain ``numpy`` arrays;
the simplex boundary lives in R^4, everything else in R^3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np

DEGENERACY_FLOOR = 1e-14


class MeshError(ValueError):
    """Raised when a mesh violates a closed-manifold invariant."""


# ---------------------------------------------------------------------------
# surface specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cone:
    """Closed cone S(r): lateral surface of slant length 1 plus its top disc."""

    r: float

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise ValueError(f"cone parameter r must lie in (0, 1), got {self.r}")

    @property
    def height(self) -> float:
        return math.sqrt(1.0 - self.r**2)


@dataclass(frozen=True)
class Sphere:
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError(f"sphere radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Ellipsoid:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a >= self.b >= self.c > 0.0):
            raise ValueError(
                f"ellipsoid semi-axes must satisfy a >= b >= c > 0, got {(self.a, self.b, self.c)}"
            )


@dataclass(frozen=True)
class Torus:
    """Boundary of the eps-tube around the unit circle in the xy-plane."""

    eps: float

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"torus tube radius eps must lie in (0, 1), got {self.eps}")


@dataclass(frozen=True)
class SimplexBoundary:
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"simplex dimension n must be an integer >= 1, got {self.n}")


@dataclass(frozen=True)
class TwoRays:
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= math.pi:
            raise ValueError(f"ray angle alpha must lie in (0, pi], got {self.alpha}")


SurfaceSpec = Union[Cone, Sphere, Ellipsoid, Torus, SimplexBoundary, TwoRays]


# ---------------------------------------------------------------------------
# mesh container
# ---------------------------------------------------------------------------


def _frozen(a, dtype) -> np.ndarray:
    out = np.array(a, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class TriMesh:
    """Closed oriented triangle mesh embedded in R^d.

    ``vertices`` is ``(V, d)``, ``triangles`` is ``(F, 3)``.  ``param_coords``
    optionally stores per-vertex parameter-domain coordinates, e.g. the torus
    angles ``(u, v)``.  ``midpoint_rule(pa, pb)`` maps edge endpoints to the
    point of the underlying smooth surface used when an edge is split; without
    it the plain midpoint is used, so refinement keeps the polyhedron.
    ``symmetry`` optionally holds a vertex permutation induced by an isometry
    that maps the mesh onto itself (see :func:`check_symmetry`).
    """

    vertices: np.ndarray
    triangles: np.ndarray
    expected_genus: int = 0
    param_coords: Optional[np.ndarray] = None
    name: str = "mesh"
    midpoint_rule: Optional[Callable] = field(default=None, repr=False)
    symmetry: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", _frozen(self.vertices, float))
        object.__setattr__(self, "triangles", _frozen(self.triangles, np.int64))
        if self.param_coords is not None:
            object.__setattr__(self, "param_coords", _frozen(self.param_coords, float))
        if self.symmetry is not None:
            object.__setattr__(self, "symmetry", _frozen(self.symmetry, np.int64))
        if self.vertices.ndim != 2 or self.triangles.ndim != 2 or self.triangles.shape[1] != 3:
            raise MeshError("vertices must be (V, d) and triangles (F, 3)")

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_faces(self) -> int:
        return self.triangles.shape[0]

    def edges(self) -> np.ndarray:
        """Unique undirected edges as sorted ``(E, 2)`` index pairs."""
        return unique_edges(self.triangles)[0]

    def edge_lengths(self) -> np.ndarray:
        e = self.edges()
        return np.linalg.norm(self.vertices[e[:, 0]] - self.vertices[e[:, 1]], axis=1)

    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.edges()) + self.n_faces

    def diameter(self) -> float:
        from scipy.spatial import ConvexHull
        from scipy.spatial.distance import pdist

        v = self.vertices
        try:
            v = v[ConvexHull(v).vertices]
        except Exception:  # flat or tiny point sets: use all vertices
            pass
        return float(pdist(v).max())

    def scaled(self, factor: float, shift=None) -> "TriMesh":
        shift = np.zeros(self.dim) if shift is None else np.asarray(shift, float)
        rule = None
        if self.midpoint_rule is not None:
            base = self.midpoint_rule

            def rule(pa, pb):
                return base((pa - shift) / factor, (pb - shift) / factor) * factor + shift

        return TriMesh(
            self.vertices * factor + shift,
            self.triangles,
            self.expected_genus,
            self.param_coords,
            self.name,
            rule,
            self.symmetry,
        )

    def split_points(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        pa, pb = self.vertices[a], self.vertices[b]
        if self.midpoint_rule is None:
            return 0.5 * (pa + pb)
        return self.midpoint_rule(pa, pb)


@dataclass(frozen=True)
class MeshQuality:
    h_max: float
    triangle_count: int
    min_angle: float
    euler_characteristic: int = 2
    vertex_count: int = 0


def check_symmetry(mesh: "TriMesh", tol: float = 1e-9) -> None:
    """Raise :class:`MeshError` unless ``mesh.symmetry`` is a mesh isometry.

    The permutation must map the triangle set onto itself, and some
    orthogonal map plus translation must carry every vertex to its image.
    """
    sigma = mesh.symmetry
    V = mesh.n_vertices
    if sigma is None:
        return
    if sigma.shape != (V,) or not np.array_equal(np.sort(sigma), np.arange(V)):
        raise MeshError("symmetry is not a vertex permutation")
    t = mesh.triangles
    image = sigma[t]
    key = lambda a: np.sort(np.sort(a, axis=1) @ np.array([V * V, V, 1]))
    if not np.array_equal(key(t), key(image)):
        raise MeshError("symmetry does not map triangles to triangles")
    x = mesh.vertices - mesh.vertices.mean(axis=0)
    y = mesh.vertices[sigma] - mesh.vertices[sigma].mean(axis=0)
    u, _, vt = np.linalg.svd(x.T @ y)
    rot = u @ vt
    scale = max(1.0, float(np.abs(x).max()))
    if np.abs(x @ rot - y).max() > tol * scale:
        raise MeshError("symmetry is not induced by an isometry")


def symmetry_orbits(sigma: np.ndarray) -> list:
    """Cycles of a permutation, each starting at its smallest element."""
    seen = np.zeros(len(sigma), bool)
    orbits = []
    for start in range(len(sigma)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        nxt = int(sigma[start])
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = int(sigma[nxt])
        orbits.append(np.array(cyc))
    return orbits


def unique_edges(triangles: np.ndarray):
    """Return ``(edges, inverse, counts)`` for the half-edges of ``triangles``.

    ``inverse`` maps the ``3F`` half-edges (ordered (0,1), (1,2), (2,0) per
    triangle) onto rows of ``edges``.
    """
    t = np.asarray(triangles)
    he = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    he_sorted = np.sort(he, axis=1)
    edges, inverse, counts = np.unique(he_sorted, axis=0, return_inverse=True, return_counts=True)
    inverse = inverse.reshape(3, -1).T  # (F, 3): edge index of local edge 0-1, 1-2, 2-0
    return edges, inverse, counts


def triangle_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    a = vertices[triangles[:, 1]] - vertices[triangles[:, 0]]
    b = vertices[triangles[:, 2]] - vertices[triangles[:, 0]]
    # Gram determinant works in any ambient dimension
    aa = np.einsum("ij,ij->i", a, a)
    bb = np.einsum("ij,ij->i", b, b)
    ab = np.einsum("ij,ij->i", a, b)
    return 0.5 * np.sqrt(np.maximum(aa * bb - ab * ab, 0.0))


def _min_angle(vertices, triangles) -> float:
    p = vertices[triangles]
    angles = []
    for i in range(3):
        u = p[:, (i + 1) % 3] - p[:, i]
        w = p[:, (i + 2) % 3] - p[:, i]
        c = np.einsum("ij,ij->i", u, w) / (np.linalg.norm(u, axis=1) * np.linalg.norm(w, axis=1))
        angles.append(np.arccos(np.clip(c, -1.0, 1.0)))
    return float(np.min(angles))


def validate_mesh(mesh: TriMesh) -> MeshQuality:
    """Check the closed-manifold invariants of ``mesh`` and report its quality.

    Raises :class:`MeshError` on non-finite coordinates, boundary or
    non-manifold edges, inconsistent orientation, an Euler characteristic
    that disagrees with ``expected_genus``, or triangles whose area falls
    below ``1e-14 * h_max**2``.
    """
    v, t = mesh.vertices, mesh.triangles
    if not np.all(np.isfinite(v)):
        raise MeshError("non-finite vertex coordinates")
    if len(t) < 4:
        raise MeshError(f"a closed surface needs at least 4 triangles, got {len(t)}")
    if t.min() < 0 or t.max() >= len(v):
        raise MeshError("triangle index out of range")
    if np.any((t[:, 0] == t[:, 1]) | (t[:, 1] == t[:, 2]) | (t[:, 0] == t[:, 2])):
        raise MeshError("triangle with repeated vertex")

    edges, inverse, counts = unique_edges(t)
    if np.any(counts == 1):
        bad = edges[counts == 1][0]
        raise MeshError(f"boundary edge {tuple(bad)}: mesh is not closed")
    if np.any(counts > 2):
        bad = edges[counts > 2][0]
        raise MeshError(f"non-manifold edge {tuple(bad)} shared by {counts[counts > 2][0]} triangles")

    # consistent orientation: every directed half-edge appears exactly once
    he = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    if len(np.unique(he, axis=0)) != len(he):
        raise MeshError("inconsistent triangle orientation")

    chi = len(v) - len(edges) + len(t)
    expected = 2 - 2 * mesh.expected_genus
    if chi != expected:
        raise MeshError(
            f"Euler characteristic {chi} does not match genus {mesh.expected_genus} (expected {expected})"
        )

    lengths = np.linalg.norm(v[edges[:, 0]] - v[edges[:, 1]], axis=1)
    h_max = float(lengths.max())
    areas = triangle_areas(v, t)
    if areas.min() < DEGENERACY_FLOOR * h_max**2:
        raise MeshError(f"degenerate triangle {int(areas.argmin())} with area {areas.min():.3e}")

    check_symmetry(mesh)
    return MeshQuality(
        h_max=h_max,
        triangle_count=len(t),
        min_angle=_min_angle(v, t),
        euler_characteristic=chi,
        vertex_count=len(v),
    )


def orient_consistently(triangles: np.ndarray, vertices: Optional[np.ndarray] = None) -> np.ndarray:
    """Propagate one orientation across shared edges (breadth-first).

    With ``vertices`` in R^3 the result is additionally flipped so that the
    enclosed signed volume is positive (outward normals).
    """
    t = np.array(triangles, dtype=np.int64)
    edges, inverse, _ = unique_edges(t)
    owners = [[] for _ in range(len(edges))]
    for f in range(len(t)):
        for e in inverse[f]:
            owners[e].append(f)
    done = np.zeros(len(t), bool)
    for seed in range(len(t)):
        if done[seed]:
            continue
        done[seed] = True
        queue = [seed]
        while queue:
            f = queue.pop()
            a, b, c = t[f]
            directed = {(a, b), (b, c), (c, a)}
            for e in inverse[f]:
                for g in owners[e]:
                    if done[g]:
                        continue
                    x, y, z = t[g]
                    if {(x, y), (y, z), (z, x)} & directed:
                        t[g] = (x, z, y)
                    done[g] = True
                    queue.append(g)
    if vertices is not None and vertices.shape[1] == 3:
        p = vertices[t]
        vol = np.einsum("ij,ij->i", p[:, 0], np.cross(p[:, 1], p[:, 2])).sum()
        if vol < 0:
            t = t[:, [0, 2, 1]]
    return t


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def _ring_count(circumference: float, spacing: float, cap: int, multiple: int = 2) -> int:
    """Vertex count for a ring: a multiple of ``multiple``, at least ``multiple``."""
    n = int(math.ceil(circumference / spacing / multiple - 1e-9)) * multiple
    return min(cap, max(multiple, n))


def _stitch(ring_a, ring_b, pos, phase_a=0, phase_b=0):
    """Triangulate the band between two closed rings of vertex ids.

    Both rings are listed counter-clockwise.  Vertex ``i`` of a ring with
    ``n`` vertices sits at angle ``2 pi (i + phase / 2) / n`` with ``phase``
    in ``{0, 1}``; the band is built by merging the two rings in angular
    order using exact integer comparisons, so the result inherits every
    rotation symmetry the two rings share.  ``pos`` is unused and kept for
    call compatibility.
    """
    na, nb = len(ring_a), len(ring_b)
    tris = []
    i = j = 0
    while i < na or j < nb:
        a0, b0 = ring_a[i % na], ring_b[j % nb]
        a1, b1 = ring_a[(i + 1) % na], ring_b[(j + 1) % nb]
        if j == nb:
            advance_a = True
        elif i == na:
            advance_a = False
        else:
            # angle of a_{i+1} <= angle of b_{j+1}
            advance_a = (2 * (i + 1) + phase_a) * nb <= (2 * (j + 1) + phase_b) * na
        if advance_a:
            tris.append((a0, a1, b0))
            i += 1
        else:
            tris.append((a0, b1, b0))
            j += 1
    return tris


def _ring(n: int, radius: float, z: float, phase: float):
    theta = phase + 2.0 * np.pi * np.arange(n) / n
    return np.stack([radius * np.cos(theta), radius * np.sin(theta), np.full(n, z)], axis=1)


def _sphere_rule(radius):
    def rule(pa, pb):
        m = 0.5 * (pa + pb)
        return radius * m / np.linalg.norm(m, axis=1, keepdims=True)

    return rule


def _ellipsoid_rule(axes):
    axes = np.asarray(axes, float)

    def rule(pa, pb):
        m = 0.5 * (pa + pb)
        return m / np.sqrt(((m / axes) ** 2).sum(axis=1, keepdims=True))

    return rule


def _torus_rule(eps):
    def rule(pa, pb):
        m = 0.5 * (pa + pb)
        core = m.copy()
        core[:, 2] = 0.0
        core /= np.linalg.norm(core, axis=1, keepdims=True)
        off = m - core
        return core + eps * off / np.linalg.norm(off, axis=1, keepdims=True)

    return rule


def _cone_rule(r):
    height = math.sqrt(1.0 - r * r)
    tol = 1e-12

    def rule(pa, pb):
        m = 0.5 * (pa + pb)
        rho_a, rho_b = np.hypot(pa[:, 0], pa[:, 1]), np.hypot(pb[:, 0], pb[:, 1])
        top_a, top_b = np.abs(pa[:, 2] - height) < tol, np.abs(pb[:, 2] - height) < tol
        rim = top_a & top_b & (np.abs(rho_a - r) < tol) & (np.abs(rho_b - r) < tol)
        disc = top_a & top_b & ~rim
        theta = np.arctan2(m[:, 1], m[:, 0])
        gen = np.stack([r * np.cos(theta), r * np.sin(theta), np.full(len(m), height)], 1)
        slant = np.einsum("ij,ij->i", m, gen)[:, None]
        out = slant * gen
        out[rim] = gen[rim]
        out[disc] = m[disc]
        return out

    return rule


CONE_SYMMETRY = 8


def cone_resolution_for(r: float, h: float, symmetry: int = CONE_SYMMETRY) -> int:
    """Smallest rim resolution (a multiple of ``symmetry``) with no edge longer than ``h``."""
    n = symmetry * max(1, int(math.ceil(2.0 * math.pi * r / h / symmetry)))
    while True:
        h_mesh = validate_mesh(mesh_cone(r, n, symmetry)).h_max
        if h_mesh <= h:
            return n
        n = max(n + symmetry, symmetry * int(math.ceil(n * h_mesh / h / symmetry)))


def mesh_cone(r: float, resolution: int, symmetry: int = CONE_SYMMETRY) -> TriMesh:
    """Triangulate S(r) = lateral cone of slant 1 over a disc of radius ``r``.

    ``resolution`` is the number of rim vertices and fixes the target edge
    length ``2*pi*r/resolution``.  Lateral rings sit at evenly spaced slant
    distances with vertex counts proportional to their circumference, each a
    multiple of ``symmetry``; consecutive rings are staggered by half a
    step.  The disc is built the same way around its center and shares the
    rim.  The mesh is invariant under rotation by ``2 pi / symmetry`` about
    the axis and records that rotation in ``mesh.symmetry``.
    """
    spec = Cone(r)
    symmetry = int(symmetry)
    if symmetry < 2 or symmetry % 2:
        raise ValueError(f"cone symmetry order must be even and >= 2, got {symmetry}")
    if int(resolution) != resolution or resolution < 8 or resolution % symmetry:
        raise ValueError(
            f"cone resolution must be an integer >= 8 divisible by {symmetry}, got {resolution}"
        )
    resolution = int(resolution)
    height = spec.height
    spacing = 2.0 * math.pi * r / resolution
    step = spacing * math.sqrt(3.0) / 2.0
    n_slant = max(2, int(math.ceil(1.0 / step)))
    n_disc = max(1, int(math.ceil(r / step)))

    chunks = [np.zeros((1, 3))]
    rings = []  # (ids, phase flag)
    count = 1
    for j in range(1, n_slant + 1):
        s = j / n_slant
        n = resolution if j == n_slant else _ring_count(2 * math.pi * r * s, spacing, resolution, symmetry)
        flag = (n_slant - j) % 2
        chunks.append(_ring(n, s * r, s * height, math.pi / n * flag))
        rings.append((list(range(count, count + n)), flag))
        count += n
    rim = rings[-1]
    center = count
    chunks.append(np.array([[0.0, 0.0, height]]))
    count += 1
    disc_rings = []
    for m in range(1, n_disc):
        rho = r * m / n_disc
        n = _ring_count(2 * math.pi * rho, spacing, resolution, symmetry)
        flag = (n_disc - m) % 2
        chunks.append(_ring(n, rho, height, math.pi / n * flag))
        disc_rings.append((list(range(count, count + n)), flag))
        count += n
    v = np.vstack(chunks)

    tris = []
    for hub, seq in ((0, rings), (center, disc_rings + [rim])):
        first = seq[0][0]
        tris += [(hub, first[i], first[(i + 1) % len(first)]) for i in range(len(first))]
        for (ra, fa), (rb, fb) in zip(seq[:-1], seq[1:]):
            tris += _stitch(ra, rb, v, fa, fb)

    sigma = np.arange(count)
    for ids, _ in rings + disc_rings:
        ids = np.array(ids)
        sigma[ids] = np.roll(ids, -len(ids) // symmetry)
    t = orient_consistently(np.array(tris), v)
    mesh = TriMesh(
        v, t, expected_genus=0, name=f"cone(r={r:g})", midpoint_rule=_cone_rule(r), symmetry=sigma
    )
    validate_mesh(mesh)
    return mesh


_ICO_CACHE: dict = {}


def _icosahedron():
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    v = np.array(
        [
            (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
            (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
            (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
        ],
        dtype=float,
    )
    f = np.array(
        [
            (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
            (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
            (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
            (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
        ]
    )
    return v / np.linalg.norm(v, axis=1, keepdims=True), f


def _subdivide_unit(v, f):
    edges, inverse, _ = unique_edges(f)
    mid = v[edges[:, 0]] + v[edges[:, 1]]
    mid /= np.linalg.norm(mid, axis=1, keepdims=True)
    nv = len(v)
    m01, m12, m20 = (inverse[:, i] + nv for i in range(3))
    a, b, c = f[:, 0], f[:, 1], f[:, 2]
    new_f = np.concatenate(
        [
            np.stack([a, m01, m20], 1),
            np.stack([b, m12, m01], 1),
            np.stack([c, m20, m12], 1),
            np.stack([m01, m12, m20], 1),
        ]
    )
    return np.vstack([v, mid]), new_f


def _unit_icosphere(subdivisions: int):
    if subdivisions not in _ICO_CACHE:
        v, f = _icosahedron()
        for _ in range(subdivisions):
            v, f = _subdivide_unit(v, f)
        _ICO_CACHE[subdivisions] = (v, f)
    return _ICO_CACHE[subdivisions]


def mesh_sphere(radius: float = 1.0, subdivisions: int = 3) -> TriMesh:
    """Icosphere of the given radius; vertices are projected onto the sphere."""
    Sphere(radius)
    if int(subdivisions) != subdivisions or subdivisions < 1:
        raise ValueError(f"sphere subdivisions must be an integer >= 1, got {subdivisions}")
    v, f = _unit_icosphere(int(subdivisions))
    v = v / np.linalg.norm(v, axis=1, keepdims=True)
    mesh = TriMesh(
        radius * v, f, expected_genus=0, name=f"sphere(radius={radius:g})", midpoint_rule=_sphere_rule(radius)
    )
    validate_mesh(mesh)
    return mesh


def mesh_ellipsoid(a: float, b: float, c: float, subdivisions: int = 3) -> TriMesh:
    """Icosphere scaled by the semi-axes ``(a, b, c)``."""
    Ellipsoid(a, b, c)
    unit = mesh_sphere(1.0, subdivisions)
    v = unit.vertices * np.array([a, b, c])
    mesh = TriMesh(
        v,
        unit.triangles,
        expected_genus=0,
        name=f"ellipsoid({a:g},{b:g},{c:g})",
        midpoint_rule=_ellipsoid_rule((a, b, c)),
    )
    validate_mesh(mesh)
    return mesh


def mesh_torus(eps: float, res_u: int = 64, res_v: int = 16) -> TriMesh:
    """Regular (u, v) grid on the tube of radius ``eps`` around the unit circle.

    ``u`` runs along the core circle, ``v`` around the tube; ``param_coords``
    holds ``(u, v)`` in ``[0, 2*pi)``.  The grid is invariant under the
    shift ``u -> u + 2*pi/res_u``, recorded in ``mesh.symmetry``.  Rings ``v = +-pi/2`` are present
    whenever ``res_v`` is divisible by 4.
    """
    Torus(eps)
    for name, val in (("res_u", res_u), ("res_v", res_v)):
        if int(val) != val or val < 8:
            raise ValueError(f"torus {name} must be an integer >= 8, got {val}")
    res_u, res_v = int(res_u), int(res_v)
    u = 2.0 * np.pi * np.arange(res_u) / res_u
    v = 2.0 * np.pi * np.arange(res_v) / res_v
    uu, vv = np.meshgrid(u, v, indexing="ij")
    rad = 1.0 + eps * np.cos(vv)
    pts = np.stack([rad * np.cos(uu), rad * np.sin(uu), eps * np.sin(vv)], axis=-1).reshape(-1, 3)
    params = np.stack([uu, vv], axis=-1).reshape(-1, 2)

    i, j = np.meshgrid(np.arange(res_u), np.arange(res_v), indexing="ij")
    i, j = i.ravel(), j.ravel()
    ip, jp = (i + 1) % res_u, (j + 1) % res_v

    def vid(a, b):
        return a * res_v + b

    t1 = np.stack([vid(i, j), vid(ip, j), vid(ip, jp)], 1)
    t2 = np.stack([vid(i, j), vid(ip, jp), vid(i, jp)], 1)
    tris = np.concatenate([t1, t2])
    mesh = TriMesh(
        pts,
        tris,
        expected_genus=1,
        param_coords=params,
        name=f"torus(eps={eps:g})",
        midpoint_rule=_torus_rule(eps),
        symmetry=vid(np.arange(res_u)[:, None] + 1, np.arange(res_v)[None, :]).ravel() % (res_u * res_v),
    )
    validate_mesh(mesh)
    return mesh


def torus_ring(mesh: TriMesh, v: float) -> np.ndarray:
    """Vertex ids of the ``v = const`` ring closest to ``v`` (mod 2*pi)."""
    if mesh.param_coords is None:
        raise ValueError("mesh has no parameter coordinates")
    pv = mesh.param_coords[:, 1]
    d = np.abs((pv - v + np.pi) % (2 * np.pi) - np.pi)
    return np.flatnonzero(d <= d.min() + 1e-12)


def mesh_simplex_boundary(n: int, subdivisions: int = 0) -> TriMesh:
    """Boundary of the regular 3-simplex spanned by e1..e4 in R^4.

    Each facet is split into ``4**subdivisions`` triangles by repeated
    midpoint subdivision.  Only ``n = 2`` is supported.
    """
    SimplexBoundary(n)
    if n != 2:
        raise ValueError("mesh path supports n = 2 only; use analytic operations for general n")
    if int(subdivisions) != subdivisions or subdivisions < 0:
        raise ValueError(f"subdivisions must be an integer >= 0, got {subdivisions}")
    v = np.eye(4)
    f = orient_consistently(np.array([(1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)]))
    for _ in range(int(subdivisions)):
        edges, inverse, _ = unique_edges(f)
        mid = 0.5 * (v[edges[:, 0]] + v[edges[:, 1]])
        nv = len(v)
        m01, m12, m20 = (inverse[:, i] + nv for i in range(3))
        a, b, c = f[:, 0], f[:, 1], f[:, 2]
        f = np.concatenate(
            [
                np.stack([a, m01, m20], 1),
                np.stack([b, m12, m01], 1),
                np.stack([c, m20, m12], 1),
                np.stack([m01, m12, m20], 1),
            ]
        )
        v = np.vstack([v, mid])
    mesh = TriMesh(v, f, expected_genus=0, name="simplex_boundary(n=2)")
    validate_mesh(mesh)
    return mesh


def mesh_from_spec(spec: SurfaceSpec, resolution: Optional[int] = None, **kw) -> TriMesh:
    """Dispatch a :data:`SurfaceSpec` to its generator with a default resolution."""
    if isinstance(spec, Cone):
        return mesh_cone(spec.r, resolution or 64)
    if isinstance(spec, Sphere):
        return mesh_sphere(spec.radius, resolution or 3)
    if isinstance(spec, Ellipsoid):
        return mesh_ellipsoid(spec.a, spec.b, spec.c, resolution or 3)
    if isinstance(spec, Torus):
        res_u = resolution or 64
        return mesh_torus(spec.eps, res_u, kw.get("res_v", 16))
    if isinstance(spec, SimplexBoundary):
        return mesh_simplex_boundary(spec.n, resolution if resolution is not None else 3)
    if isinstance(spec, TwoRays):
        raise ValueError("two rays are not a closed surface; use two_ray_distortion")
    raise TypeError(f"unknown surface spec {spec!r}")


# ---------------------------------------------------------------------------
# local refinement
# ---------------------------------------------------------------------------


def vertex_rings(mesh: TriMesh, seeds, rings: int = 2) -> np.ndarray:
    """Triangle ids within ``rings`` rings of the seed vertices."""
    t = mesh.triangles
    verts = np.zeros(mesh.n_vertices, bool)
    verts[np.asarray(seeds, dtype=np.int64)] = True
    hit = np.zeros(len(t), bool)
    for _ in range(rings):
        hit = verts[t].any(axis=1)
        verts[t[hit].ravel()] = True
    return np.flatnonzero(hit)


def refine_triangles(mesh: TriMesh, tri_ids):
    """Conforming red-green refinement of the selected triangles.

    Selected triangles are split 1-to-4 at edge midpoints; the closure
    rule (a triangle with two split edges gets its third one split too)
    keeps the mesh conforming and neighbours with one split edge are
    bisected.  Existing vertex ids are preserved and new vertices appended
    (placed by the mesh's midpoint rule).  Returns the refined mesh, the ids
    of all new triangles, the replaced parent triangles and a dict mapping
    each split edge ``(i, j)``, ``i < j``, to its midpoint vertex.
    """
    t = mesh.triangles
    edges, inverse, _ = unique_edges(t)
    marked = np.zeros(len(edges), bool)
    marked[inverse[np.asarray(tri_ids, dtype=np.int64)].ravel()] = True
    while True:
        count = marked[inverse].sum(axis=1)
        upgrade = count == 2
        if not upgrade.any():
            break
        marked[inverse[upgrade].ravel()] = True
    count = marked[inverse].sum(axis=1)

    nv = mesh.n_vertices
    mid_id = np.full(len(edges), -1, dtype=np.int64)
    mid_id[marked] = nv + np.arange(marked.sum())
    new_pts = mesh.split_points(edges[marked, 0], edges[marked, 1])
    vertices = np.vstack([mesh.vertices, new_pts])

    keep = t[count == 0]
    out = [keep]
    red = count == 3
    if red.any():
        a, b, c = t[red].T
        m01, m12, m20 = (mid_id[inverse[red, i]] for i in range(3))
        out += [
            np.stack([a, m01, m20], 1),
            np.stack([b, m12, m01], 1),
            np.stack([c, m20, m12], 1),
            np.stack([m01, m12, m20], 1),
        ]
    green = np.flatnonzero(count == 1)
    if len(green):
        tg = t[green]
        which = marked[inverse[green]].argmax(axis=1)  # local edge index that is split
        # rotate so the split edge is (0, 1)
        rolled = np.stack([tg[np.arange(len(tg)), (which + i) % 3] for i in range(3)], 1)
        m = mid_id[inverse[green, which]]
        out += [np.stack([rolled[:, 0], m, rolled[:, 2]], 1), np.stack([m, rolled[:, 1], rolled[:, 2]], 1)]
    tris = np.concatenate(out)
    params = None
    if mesh.param_coords is not None:
        pa, pb = mesh.param_coords[edges[marked, 0]], mesh.param_coords[edges[marked, 1]]
        # midpoint on the circle for periodic angles
        mid = pa + 0.5 * ((pb - pa + np.pi) % (2 * np.pi) - np.pi)
        if mesh.midpoint_rule is not None:
            # projected points: read the torus angles back off the surface
            x, y, z = new_pts.T
            mid = np.stack([np.arctan2(y, x), np.arctan2(z, np.hypot(x, y) - 1.0)], 1)
        params = np.vstack([mesh.param_coords, mid % (2 * np.pi)])
    refined = TriMesh(vertices, tris, mesh.expected_genus, params, mesh.name, mesh.midpoint_rule)
    changed = np.arange(len(keep), len(tris))
    parents = t[count > 0]
    splits = {(int(a), int(b)): int(m) for (a, b), m in zip(edges[marked], mid_id[marked])}
    return refined, changed, parents, splits


# ---------------------------------------------------------------------------
# OFF export
# ---------------------------------------------------------------------------


def write_off(mesh: TriMesh, path) -> Path:
    """Write ``mesh`` as OFF (3-D) or ``nOFF 4`` (4-D embeddings)."""
    path = Path(path)
    lines = []
    if mesh.dim == 3:
        lines.append("OFF")
    else:
        lines.append(f"nOFF {mesh.dim}")
    lines.append(f"{mesh.n_vertices} {mesh.n_faces} {len(mesh.edges())}")
    for p in mesh.vertices:
        lines.append(" ".join(repr(float(x)) for x in p))
    for a, b, c in mesh.triangles:
        lines.append(f"3 {a} {b} {c}")
    path.write_text("\n".join(lines) + "\n")
    return path


def read_off(path, expected_genus: int = 0) -> TriMesh:
    tokens = Path(path).read_text().split()
    head = tokens.pop(0)
    if head == "OFF":
        dim = 3
    elif head == "nOFF":
        dim = int(tokens.pop(0))
    else:
        raise MeshError(f"not an OFF file (header {head!r})")
    nv, nf = int(tokens[0]), int(tokens[1])
    pos = 3
    v = np.array(tokens[pos : pos + nv * dim], dtype=float).reshape(nv, dim)
    pos += nv * dim
    faces = []
    for _ in range(nf):
        k = int(tokens[pos])
        if k != 3:
            raise MeshError("only triangular faces are supported")
        faces.append(tuple(int(x) for x in tokens[pos + 1 : pos + 4]))
        pos += 4
    return TriMesh(v, np.array(faces), expected_genus=expected_genus, name=Path(path).stem)

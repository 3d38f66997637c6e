"""The acceptance suite shared by ``distlab verify-all`` and the test-suite.

Each criterion is a function of a :class:`Context`, which caches mesh
estimates so that criteria reusing the same surface (the lower-bound suite,
for one) do not recompute them.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .analytic import (
    BOUND_BOUNDED_COMPLEMENT,
    BOUND_SYSTOLE,
    HALF_PI,
    cone_distortion_analytic,
    cone_threshold,
    dihedral_angle,
    find_r0,
    simplex_crossover,
    simplex_distortion_analytic,
    simplex_witnesses,
)
from .config import cone_default_resolution, torus_res_u
from .distortion import estimate_distortion, verify_lower_bounds
from .eccentricity import eccentricity
from .geodesics import two_ray_distortion, two_ray_sampled
from .lipschitz import lipschitz_check
from .sweep import fit_linear_coefficient
from .surfaces import (
    mesh_cone,
    mesh_ellipsoid,
    mesh_simplex_boundary,
    mesh_sphere,
    mesh_torus,
)
from .systole import loop_distance_pairs, systole_torus

log = logging.getLogger(__name__)

CONE_RADII = (0.05, 0.10, 0.169, 0.25, 0.40)
TORUS_EPS = (0.3, 0.15, 0.075)
TOTAL_LIMIT_S = 20 * 60


@dataclass
class Settings:
    """Resolutions and tolerances; defaults reproduce the stated criteria."""

    cone_h: float = 0.02
    k: int = 3
    budget: int = 2
    sphere_subdivisions: int = 3
    simplex_subdivisions: int = 3
    torus_res_v: int = 16
    systole_eps: float = 0.1
    ellipsoid_subdivisions: int = 3
    ellipsoid_k: int = 15
    lipschitz_samples: int = 100_000
    seed: int = 0
    rel_tol: float = 0.02


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0
    gating: bool = True

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        if not self.gating:
            tag = "INFO"
        return f"[{tag}] criterion {self.number:2d}: {self.title} ({self.seconds:.1f} s) {self.summary()}"

    def summary(self) -> str:
        keys = self.details.get("_summary", [])
        return " ".join(f"{k}={_fmt(self.details[k])}" for k in keys)


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


class Context:
    """Cache of mesh estimates keyed by a short label."""

    def __init__(self, settings: Settings | None = None):
        self.settings = settings or Settings()
        self.estimates: dict = {}
        self.timings: dict = {}

    def estimate(self, key: str, build, k=None, budget=None):
        if key not in self.estimates:
            t0 = time.perf_counter()
            s = self.settings
            mesh = build()
            self.estimates[key] = estimate_distortion(
                mesh, s.k if k is None else k, s.budget if budget is None else budget
            )
            self.timings[key] = time.perf_counter() - t0
            log.info("%s: %.6f (%.1f s)", key, self.estimates[key].value, self.timings[key])
        return self.estimates[key]

    def cone(self, r: float):
        h = self.settings.cone_h
        return self.estimate(f"cone:{r:g}", lambda: mesh_cone(r, cone_default_resolution(r, h)))

    def torus(self, eps: float):
        rv = self.settings.torus_res_v
        return self.estimate(f"torus:{eps:g}", lambda: mesh_torus(eps, torus_res_u(eps, rv), rv))

    def sphere(self):
        return self.estimate("sphere", lambda: mesh_sphere(1.0, self.settings.sphere_subdivisions))

    def simplex(self):
        return self.estimate(
            "simplex:2", lambda: mesh_simplex_boundary(2, self.settings.simplex_subdivisions)
        )

    def ellipsoid(self, a: float):
        s = self.settings
        return self.estimate(
            f"ellipsoid:{a:g}",
            lambda: mesh_ellipsoid(a, 1.0, 1.0, s.ellipsoid_subdivisions),
            k=s.ellipsoid_k,
            budget=1,
        )


# ---------------------------------------------------------------------------


def c1_cone_minimiser(ctx: Context) -> dict:
    t0 = time.perf_counter()
    res = find_r0(1e-6)
    dt = time.perf_counter() - t0
    r0_gap, delta0_gap = abs(res.r0 - 0.169), abs(res.delta0 - 1.552)
    ok = r0_gap <= 5e-4 and delta0_gap <= 5e-4 and dt < 1.0
    return dict(
        passed=ok,
        r0=res.r0,
        delta0=res.delta0,
        r0_gap=r0_gap,
        delta0_gap=delta0_gap,
        # the published digits are truncated: check they are a prefix
        r0_truncates_to_0169=math.floor(res.r0 * 1000) == 169,
        delta0_truncates_to_1552=math.floor(res.delta0 * 1000) == 1552,
        root_seconds=dt,
        _summary=["r0", "r0_gap", "delta0", "delta0_gap", "r0_truncates_to_0169"],
    )


def c2_cone_agreement(ctx: Context) -> dict:
    rows, ok = {}, True
    for r in CONE_RADII:
        est = ctx.cone(r)
        ref = cone_distortion_analytic(r)
        rel = est.value / ref - 1.0
        secs = ctx.timings[f"cone:{r:g}"]
        good = abs(rel) <= ctx.settings.rel_tol and est.h_max <= ctx.settings.cone_h and secs < 120
        ok &= good
        rows[f"{r:g}"] = {
            "estimate": est.value,
            "analytic": ref,
            "rel_err": rel,
            "h_max": est.h_max,
            "seconds": secs,
            "passed": good,
        }
    worst = max(abs(v["rel_err"]) for v in rows.values())
    return dict(passed=ok, per_radius=rows, max_rel_err=worst, _summary=["max_rel_err"])


def c3_threshold(ctx: Context) -> dict:
    bis = analytic.threshold_by_bisection(1e-13)
    thr = cone_threshold()
    analytic_ok = abs(bis - thr) <= 1e-9 and abs(thr - (math.pi**2 - 8) / math.pi**2) <= 1e-9
    lo, hi = ctx.cone(0.15).value, ctx.cone(0.25).value
    mesh_ok = lo < HALF_PI < hi
    return dict(
        passed=analytic_ok and mesh_ok,
        threshold=thr,
        bisection=bis,
        estimate_r015=lo,
        estimate_r025=hi,
        _summary=["threshold", "estimate_r015", "estimate_r025"],
    )


def c4_simplex(ctx: Context) -> dict:
    worst = max(
        abs(simplex_distortion_analytic(n) - simplex_witnesses(n).ratio) for n in range(1, 11)
    )
    crossover = simplex_crossover()
    est = ctx.simplex().value
    rel = est / math.sqrt(3.0) - 1.0
    ok = worst <= 1e-12 and crossover == 5 and abs(rel) <= ctx.settings.rel_tol
    return dict(
        passed=ok, witness_gap=worst, crossover=crossover, estimate=est, rel_err=rel,
        _summary=["crossover", "estimate", "rel_err"],
    )


def c5_two_ray(ctx: Context) -> dict:
    worst = max(
        abs(two_ray_distortion(dihedral_angle(n)) - math.sqrt(2 + 2 / n)) for n in range(1, 11)
    )
    sampled = two_ray_sampled(math.pi / 3)
    ok = worst <= 1e-12 and abs(sampled - 2.0) <= 1e-3
    return dict(passed=ok, identity_gap=worst, sampled=sampled, _summary=["identity_gap", "sampled"])


def c6_sphere(ctx: Context) -> dict:
    est = ctx.sphere()
    rel = est.value / HALF_PI - 1.0
    antipodal_gap = float(np.linalg.norm(est.witness_p + est.witness_q))
    ok = abs(rel) <= 0.01 and antipodal_gap <= 2 * est.h_max
    return dict(
        passed=ok, estimate=est.value, rel_err=rel, antipodal_gap=antipodal_gap, h_max=est.h_max,
        _summary=["estimate", "rel_err", "antipodal_gap"],
    )


def c7_torus(ctx: Context) -> dict:
    values = {eps: ctx.torus(eps).value for eps in TORUS_EPS}
    secs = sum(ctx.timings[f"torus:{e:g}"] for e in TORUS_EPS)
    devs = [abs(values[e] - HALF_PI) for e in TORUS_EPS]
    lower = all(values[e] >= HALF_PI * 0.99 for e in TORUS_EPS)
    # deviation must not grow as eps shrinks along the listed sequence
    shrinking = all(b <= a for a, b in zip(devs, devs[1:]))
    C = fit_linear_coefficient(TORUS_EPS, devs)
    return dict(
        passed=lower and shrinking and secs < 300,
        estimates={f"{e:g}": values[e] for e in TORUS_EPS},
        deviations=devs,
        C=C,
        seconds_total=secs,
        _summary=["C", "deviations"],
    )


def c8_systole(ctx: Context) -> dict:
    eps = ctx.settings.systole_eps
    rv = ctx.settings.torus_res_v
    res = systole_torus(mesh_torus(eps, torus_res_u(eps, rv), rv), ctx.settings.k)
    rel = res.length / (2 * math.pi * eps) - 1.0
    pairs = loop_distance_pairs(res, 8, ctx.settings.seed)
    worst = max(p.rel_gap for p in pairs)
    ok = abs(rel) <= ctx.settings.rel_tol and res.winding == (0, 1) and worst <= ctx.settings.rel_tol
    return dict(
        passed=ok, length=res.length, rel_err=rel, winding=list(res.winding), loop_pair_gap=worst,
        _summary=["length", "winding", "loop_pair_gap"],
    )


def c9_lipschitz(ctx: Context) -> dict:
    out, ok = {}, True
    for r in (0.01, 1.0 / (6.0 * math.pi)):
        rep = lipschitz_check(r, ctx.settings.lipschitz_samples, ctx.settings.seed)
        ok &= rep.passed and rep.pairs >= 100_000
        out[f"{r:.6g}"] = {"observed": rep.observed, "bound": rep.bound, "pairs": rep.pairs}
    return dict(passed=ok, checks=out, _summary=["checks"])


def c10_lower_bounds(ctx: Context) -> dict:
    genus0 = {f"cone:{r:g}": ctx.cone(r) for r in CONE_RADII + (0.15,)}
    genus0["sphere"] = ctx.sphere()
    genus0["simplex:2"] = ctx.simplex()
    genus0.update({f"ellipsoid:{a:g}": ctx.ellipsoid(a) for a in (2.0, 5.0)})
    genus1 = {f"torus:{e:g}": ctx.torus(e) for e in TORUS_EPS}
    rows, ok = {}, True
    tol = ctx.settings.rel_tol
    for name, est in genus0.items():
        rep = verify_lower_bounds(est, True, 0, tol * BOUND_BOUNDED_COMPLEMENT)
        ok &= rep.passed
        rows[name] = {"value": est.value, "margin": rep.checks[0].margin, "passed": rep.passed}
    for name, est in genus1.items():
        rep = verify_lower_bounds(est, False, 1, tol * BOUND_SYSTOLE)
        ok &= rep.passed
        rows[name] = {"value": est.value, "margin": rep.checks[0].margin, "passed": rep.passed}
    worst = min(v["margin"] for v in rows.values())
    return dict(passed=ok, surfaces=rows, smallest_margin=worst, _summary=["smallest_margin"])


def c11_eccentricity(ctx: Context) -> dict:
    s = ctx.settings
    sphere_mesh = mesh_sphere(1.0, s.sphere_subdivisions)
    ecc = eccentricity(sphere_mesh)
    # mesh effect: the icosphere's inscribed ball touches its nearest facet
    tri = sphere_mesh.vertices[sphere_mesh.triangles]
    normals = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
    facet_dist = np.abs(np.einsum("ij,ij->i", normals, tri[:, 0])) / np.linalg.norm(normals, axis=1)
    sphere_ref = float(1.0 / facet_dist.min())
    sphere_ok = abs(ecc.ratio - sphere_ref) <= 1e-6
    rows = {"sphere": {"ratio": ecc.ratio, "mesh_reference": sphere_ref}}
    ok = sphere_ok
    for a in (2.0, 5.0):
        e = eccentricity(mesh_ellipsoid(a, 1.0, 1.0, s.ellipsoid_subdivisions))
        dist = ctx.ellipsoid(a).value
        good = e.ratio >= a * (1 - s.rel_tol) and dist <= HALF_PI * (1 + s.rel_tol)
        if a == 5.0:
            good &= abs(e.ratio / 5.0 - 1.0) <= s.rel_tol
        ok &= good
        rows[f"ellipsoid:{a:g}"] = {"ratio": e.ratio, "distortion": dist, "passed": good}
    return dict(passed=ok, surfaces=rows, _summary=["surfaces"])


def c12_open_question(ctx: Context) -> dict:
    r = 1.0 / math.sqrt(10.0)
    est = ctx.cone(r).value
    return dict(
        passed=True,
        r=r,
        estimate=est,
        analytic=cone_distortion_analytic(r),
        above_half_pi=est > HALF_PI,
        _summary=["r", "estimate", "above_half_pi"],
    )


CRITERIA = [
    (1, "cone minimiser", c1_cone_minimiser, True),
    (2, "cone analytic/mesh agreement", c2_cone_agreement, True),
    (3, "threshold", c3_threshold, True),
    (4, "simplex", c4_simplex, True),
    (5, "two-ray consistency", c5_two_ray, True),
    (6, "sphere baseline", c6_sphere, True),
    (7, "torus limit", c7_torus, True),
    (8, "systole", c8_systole, True),
    (9, "Lipschitz lemma", c9_lipschitz, True),
    (10, "lower-bound suite", c10_lower_bounds, True),
    (11, "eccentricity", c11_eccentricity, True),
    (12, "open-question probe (informational)", c12_open_question, False),
]


def run_criterion(number: int, ctx: Context) -> CriterionResult:
    _, title, fn, gating = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        details = fn(ctx)
        passed = bool(details.pop("passed"))
    except Exception as exc:  # a crash is a failure, reported with its message
        log.exception("criterion %d raised", number)
        details = {"error": f"{type(exc).__name__}: {exc}", "_summary": ["error"]}
        passed = False
    return CriterionResult(number, title, passed, details, time.perf_counter() - t0, gating)


@dataclass
class AcceptanceReport:
    results: list
    seconds: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results if r.gating) and self.seconds < TOTAL_LIMIT_S

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "criteria": [
                {
                    "number": r.number,
                    "title": r.title,
                    "passed": r.passed,
                    "gating": r.gating,
                    "details": {k: v for k, v in r.details.items() if k != "_summary"},
                }
                for r in self.results
            ],
        }

    def timings(self) -> dict:
        return {"total_seconds": self.seconds, **{str(r.number): r.seconds for r in self.results}}


def run_acceptance(numbers=None, ctx: Context | None = None, echo=print) -> AcceptanceReport:
    ctx = ctx or Context()
    numbers = numbers or [c[0] for c in CRITERIA]
    t0 = time.perf_counter()
    results = []
    for n in numbers:
        res = run_criterion(n, ctx)
        results.append(res)
        if echo:
            echo(res.line())
    report = AcceptanceReport(results, time.perf_counter() - t0)
    if echo:
        echo(f"total {report.seconds:.1f} s (limit {TOTAL_LIMIT_S} s): {'PASS' if report.passed else 'FAIL'}")
    return report

"""Parameter sweeps over the cone, torus and simplex families."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .analytic import (
    HALF_PI,
    cone_antipodal_ratio,
    cone_distortion_analytic,
    cone_rim_ratio,
    find_r0,
    simplex_crossover,
    simplex_distortion_analytic,
)
from .config import cone_default_resolution, torus_res_u
from .distortion import estimate_distortion
from .report import svg_plot
from .surfaces import mesh_cone, mesh_torus

log = logging.getLogger(__name__)

SWEEP_CONE_H = 0.05


@dataclass
class SweepResult:
    family: str
    rows: list
    summary: dict = field(default_factory=dict)
    svg: str = ""

    @property
    def max_rel_err(self) -> float:
        errs = [abs(r[3]) for r in self.rows if r[3] is not None]
        return max(errs) if errs else float("nan")


def _rel(est, ref):
    return None if est is None else est / ref - 1.0


def sweep_cone(
    start: float = 0.02,
    stop: float = 0.9,
    steps: int = 30,
    k: int = 3,
    budget: int = 1,
    h: float = SWEEP_CONE_H,
) -> SweepResult:
    """Mesh estimate against the closed form on an even grid of ``r``."""
    rows = []
    for r in np.linspace(start, stop, steps):
        r = float(r)
        mesh = mesh_cone(r, cone_default_resolution(r, h))
        est = estimate_distortion(mesh, k, budget).value
        ref = cone_distortion_analytic(r)
        rows.append((r, est, ref, _rel(est, ref)))
        log.info("cone r=%.4f estimate %.5f analytic %.5f", r, est, ref)
    root = find_r0(1e-10)
    grid = np.linspace(min(start, stop), max(start, stop), 200)
    svg = svg_plot(
        [
            ("sin(pi r/2)/r", grid, [cone_antipodal_ratio(x) for x in grid], "line"),
            ("sqrt(2)/sqrt(1-r)", grid, [cone_rim_ratio(x) for x in grid], "line"),
            ("mesh estimate", [r[0] for r in rows], [r[1] for r in rows], "points"),
        ],
        title="Cone distortion",
        xlabel="r",
        ylabel="distortion",
        hlines=[(HALF_PI, "pi/2")],
        vlines=[(root.r0, f"r0={root.r0:.4f}")],
    )
    summary = {"r0": root.r0, "delta0": root.delta0}
    result = SweepResult("cone", rows, summary, svg)
    result.summary["max_rel_err"] = result.max_rel_err
    return result


def fit_linear_coefficient(eps, dev) -> float:
    """Least-squares ``C`` in ``dev ~ C * eps`` (line through the origin)."""
    eps = np.asarray(eps, float)
    dev = np.asarray(dev, float)
    return float(eps @ dev / (eps @ eps))


def sweep_torus(
    start: float = 0.3,
    stop: float = 0.05,
    steps: int = 6,
    res_v: int = 16,
    k: int = 3,
    budget: int = 2,
) -> SweepResult:
    """Torus estimates against the reference value pi/2, with a fitted slope."""
    rows = []
    for eps in np.linspace(start, stop, steps):
        eps = float(eps)
        mesh = mesh_torus(eps, torus_res_u(eps, res_v), res_v)
        est = estimate_distortion(mesh, k, budget).value
        rows.append((eps, est, HALF_PI, _rel(est, HALF_PI)))
        log.info("torus eps=%.4f estimate %.5f", eps, est)
    devs = [abs(r[1] - HALF_PI) for r in rows]
    C = fit_linear_coefficient([r[0] for r in rows], devs)
    svg = svg_plot(
        [
            ("mesh estimate", [r[0] for r in rows], [r[1] for r in rows], "points"),
            (f"pi/2 + C eps, C={C:.3g}", [r[0] for r in rows], [HALF_PI + C * r[0] for r in rows], "line"),
        ],
        title="Torus distortion",
        xlabel="eps",
        ylabel="distortion",
        hlines=[(HALF_PI, "pi/2")],
    )
    ordered = [d for _, d in sorted(zip([-r[0] for r in rows], devs))]
    monotone = all(b <= a + 1e-12 for a, b in zip(ordered, ordered[1:]))
    return SweepResult("torus", rows, {"C": C, "deviation_shrinks_with_eps": monotone}, svg)


def sweep_simplex(start: int = 1, stop: int = 10) -> SweepResult:
    """Closed-form simplex-boundary distortion for ``n`` in ``[start, stop]``."""
    ns = list(range(int(start), int(stop) + 1))
    rows = [(n, None, simplex_distortion_analytic(n), None) for n in ns]
    svg = svg_plot(
        [("sqrt(2+2/n)", ns, [r[2] for r in rows], "points")],
        title="Simplex boundary distortion",
        xlabel="n",
        ylabel="distortion",
        hlines=[(HALF_PI, "pi/2")],
    )
    return SweepResult("simplex", rows, {"crossover_n": simplex_crossover()}, svg)


def sweep(family: str, start=None, stop=None, steps=None, **kw) -> SweepResult:
    if family == "cone":
        args = {"start": 0.02, "stop": 0.9, "steps": 30}
        fn = sweep_cone
    elif family == "torus":
        args = {"start": 0.3, "stop": 0.05, "steps": 6}
        fn = sweep_torus
    elif family == "simplex":
        args = {"start": 1, "stop": 10}
        kw = {}
        fn = sweep_simplex
    else:
        raise ValueError(f"unknown sweep family {family!r}; choose cone, torus or simplex")
    for name, val in (("start", start), ("stop", stop), ("steps", steps)):
        if val is not None and name in args:
            args[name] = val
    if family == "simplex":
        args = {"start": int(args["start"]), "stop": int(args["stop"])}
    return fn(**args, **kw)

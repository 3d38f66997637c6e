"""Command-line entry point ``distlab``."""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import acceptance
from .analytic import (
    HALF_PI,
    cone_distortion_analytic,
    cone_threshold,
    dihedral_angle,
    find_r0,
    simplex_crossover,
    simplex_distortion_analytic,
    simplex_witnesses,
    two_ray_at_dihedral,
)
from .config import (
    RunConfig,
    _parse_float,
    check_writable,
    merge,
    read_config_file,
    torus_res_u,
)
from .distortion import estimate_distortion, verify_lower_bounds
from .eccentricity import eccentricity
from .lipschitz import lipschitz_check
from .report import dumps, estimate_record, write_csv, write_json
from .surfaces import MeshError, mesh_torus, validate_mesh, write_off
from .sweep import sweep
from .systole import loop_distance_pairs, systole_torus

log = logging.getLogger("distlab")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("parameters")
    g.add_argument("--r", type=_parse_float, help="cone parameter in (0, 1)")
    g.add_argument("--eps", type=_parse_float, help="torus tube radius in (0, 1)")
    g.add_argument("--n", type=int, help="simplex dimension")
    g.add_argument("--axes", help="ellipsoid semi-axes a,b,c")
    g.add_argument("--res", type=int, help="mesh resolution (see README)")
    g.add_argument("--k", type=int, help="Steiner points per edge")
    g.add_argument("--budget", type=int, help="refinement rounds")
    g.add_argument("--seed", type=int, help="sampling seed")
    g.add_argument("--samples", type=int, help="Lipschitz sample pairs")
    g.add_argument("--out", help="output file or directory")
    g.add_argument("--tol", type=_parse_float, help="relative tolerance override")
    g.add_argument("--config", help="key = value file; flags win on conflict")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="distlab", description="Distortion of embedded surfaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    surfaces = ("cone", "sphere", "ellipsoid", "torus", "simplex")

    p = sub.add_parser("gen", parents=[common], help="write a mesh as OFF")
    p.add_argument("surface", choices=surfaces)
    p = sub.add_parser("estimate", parents=[common], help="estimate distortion of a mesh")
    p.add_argument("surface", choices=surfaces)
    p = sub.add_parser("sweep", parents=[common], help="parameter sweep to CSV and SVG")
    p.add_argument("family", choices=("cone", "torus", "simplex"))
    p.add_argument("--start", type=_parse_float)
    p.add_argument("--stop", type=_parse_float)
    p.add_argument("--steps", type=int)
    sub.add_parser("root", parents=[common], help="cone minimiser r0 and threshold")
    sub.add_parser("simplex", parents=[common], help="simplex-boundary closed forms")
    sub.add_parser("systole", parents=[common], help="torus systole")
    p = sub.add_parser("eccentricity", parents=[common], help="circumradius / inradius")
    p.add_argument("surface", choices=("cone", "sphere", "ellipsoid"))
    sub.add_parser("lipschitz", parents=[common], help="sampled Lipschitz check")
    sub.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    return parser


FLAG_KEYS = ("r", "eps", "n", "axes", "res", "k", "budget", "seed", "samples", "out", "tol",
             "start", "stop", "steps")


def config_from_args(args) -> RunConfig:
    file_values = read_config_file(args.config) if args.config else {}
    flags = {k: getattr(args, k, None) for k in FLAG_KEYS}
    fixed = {}
    if getattr(args, "surface", None):
        fixed["surface"] = args.surface
    return merge(file_values, flags, **fixed)


def _emit(obj, cfg: RunConfig, default_name: str | None = None):
    text = dumps(obj)
    sys.stdout.write(text)
    if cfg.out:
        path = Path(cfg.out)
        if path.is_dir() and default_name:
            path = path / default_name
        check_writable(path)
        write_json(obj, path)


# ---------------------------------------------------------------------------


def cmd_gen(cfg: RunConfig) -> int:
    mesh = cfg.build_mesh()
    q = validate_mesh(mesh)
    out = Path(cfg.out) if cfg.out else Path(f"{cfg.surface}.off")
    if out.is_dir():
        out = out / f"{cfg.surface}.off"
    check_writable(out)
    write_off(mesh, out)
    log.info("euler characteristic %d", q.euler_characteristic)
    sys.stdout.write(
        dumps(
            {
                "mesh": str(out),
                "h_max": q.h_max,
                "triangle_count": q.triangle_count,
                "min_angle": q.min_angle,
                "euler_characteristic": q.euler_characteristic,
                "vertex_count": q.vertex_count,
            }
        )
    )
    return 0


def cmd_estimate(cfg: RunConfig) -> int:
    mesh = cfg.build_mesh()
    est = estimate_distortion(mesh, cfg.k, cfg.budget)
    genus = mesh.expected_genus
    bounds = verify_lower_bounds(est, genus == 0, genus, (cfg.tol or 0.02) * HALF_PI)
    extra = {
        "lower_bounds": [
            {"name": c.name, "bound": c.bound, "margin": c.margin, "passed": c.passed}
            for c in bounds.checks
        ]
    }
    if cfg.surface == "cone":
        extra["analytic"] = cone_distortion_analytic(cfg.r)
    elif cfg.surface == "simplex":
        extra["analytic"] = simplex_distortion_analytic(cfg.n)
    elif cfg.surface == "sphere":
        extra["analytic"] = HALF_PI
    rec = estimate_record(cfg.surface, cfg.params(), est, budget=cfg.budget, **extra)
    _emit(rec, cfg, f"estimate_{cfg.surface}.json")
    return 0


def cmd_sweep(cfg: RunConfig, family: str) -> int:
    kw = {} if family == "simplex" else {"k": cfg.k, "budget": cfg.budget}
    res = sweep(family, cfg.start, cfg.stop, cfg.steps, **kw)
    outdir = Path(cfg.out) if cfg.out else Path(".")
    if not outdir.is_dir():
        raise FileNotFoundError(f"output directory {str(outdir)!r} does not exist")
    csv_path = write_csv(res.rows, outdir / f"sweep_{family}.csv")
    svg_path = outdir / f"sweep_{family}.svg"
    svg_path.write_text(res.svg)
    sys.stdout.write(
        dumps({"family": family, "csv": str(csv_path), "svg": str(svg_path), **res.summary})
    )
    return 0


def cmd_root(cfg: RunConfig) -> int:
    res = find_r0(cfg.tol or 1e-10)
    sys.stdout.write(
        dumps(
            {
                "r0": res.r0,
                "delta0": res.delta0,
                "bracket_width": res.bracket_width,
                "iterations": res.iterations,
                "threshold": cone_threshold(),
            }
        )
    )
    return 0


def cmd_simplex(cfg: RunConfig) -> int:
    rows = []
    for n in range(1, max(10, cfg.n) + 1):
        w = simplex_witnesses(n)
        rows.append(
            {
                "n": n,
                "distortion": simplex_distortion_analytic(n),
                "witness_ratio": w.ratio,
                "dihedral_angle": dihedral_angle(n),
                "two_ray": two_ray_at_dihedral(n),
                "below_half_pi": simplex_distortion_analytic(n) < HALF_PI,
            }
        )
    sys.stdout.write(dumps({"rows": rows, "crossover_n": simplex_crossover()}))
    return 0


def cmd_systole(cfg: RunConfig) -> int:
    rv = cfg.res or 16
    mesh = mesh_torus(cfg.eps, torus_res_u(cfg.eps, rv), rv)
    res = systole_torus(mesh, cfg.k)
    pairs = loop_distance_pairs(res, 8, cfg.seed)
    _emit(
        {
            "eps": cfg.eps,
            "length": res.length,
            "meridian_length": 2 * math.pi * cfg.eps,
            "winding": list(res.winding),
            "loop": res.loop,
            "loop_pairs": [{"along_loop": p.along_loop, "full_mesh": p.full_mesh} for p in pairs],
        },
        cfg,
        "systole.json",
    )
    return 0


def cmd_eccentricity(cfg: RunConfig) -> int:
    e = eccentricity(cfg.build_mesh())
    _emit(
        {
            "surface": cfg.surface,
            "params": cfg.params(),
            "circumradius": e.circumradius,
            "inradius": e.inradius,
            "ratio": e.ratio,
            "circumcenter": e.circumcenter,
            "incenter": e.incenter,
        },
        cfg,
        "eccentricity.json",
    )
    return 0


def cmd_lipschitz(cfg: RunConfig, r_given: bool) -> int:
    radii = [cfg.r] if r_given else [0.01, 1.0 / (6.0 * math.pi)]
    out = []
    for r in radii:
        rep = lipschitz_check(r, cfg.samples, cfg.seed)
        out.append({"r": r, "bound": rep.bound, "observed": rep.observed, "pairs": rep.pairs,
                    "passed": rep.passed})
    _emit({"checks": out}, cfg, "lipschitz.json")
    return 0 if all(c["passed"] for c in out) else 1


def cmd_verify_all(cfg: RunConfig) -> int:
    out = Path(cfg.out) if cfg.out else Path("acceptance_report.json")
    if out.is_dir():
        out = out / "acceptance_report.json"
    check_writable(out)
    settings = acceptance.Settings(seed=cfg.seed)
    if cfg.tol:
        settings.rel_tol = cfg.tol
    report = acceptance.run_acceptance(ctx=acceptance.Context(settings))
    write_json(report.to_dict(), out)
    write_json(report.timings(), out.with_name(out.stem + "_timings.json"))
    print(f"report written to {out}")
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = config_from_args(args)
        if args.command in ("gen", "estimate", "eccentricity"):
            cfg.validate()
        elif cfg.out is not None and args.command not in ("sweep",):
            check_writable(cfg.out)
        if args.command == "gen":
            return cmd_gen(cfg)
        if args.command == "estimate":
            return cmd_estimate(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg, args.family)
        if args.command == "root":
            return cmd_root(cfg)
        if args.command == "simplex":
            return cmd_simplex(cfg)
        if args.command == "systole":
            return cmd_systole(cfg)
        if args.command == "eccentricity":
            return cmd_eccentricity(cfg)
        if args.command == "lipschitz":
            return cmd_lipschitz(cfg, args.r is not None or "r" in _file_keys(args))
        return cmd_verify_all(cfg)
    except (MeshError, ValueError, OSError) as exc:
        print(f"distlab: error: {exc}", file=sys.stderr)
        return 2


def _file_keys(args) -> set:
    return set(read_config_file(args.config)) if args.config else set()


if __name__ == "__main__":
    sys.exit(main())

"""Run configuration: defaults, ``key = value`` files and command-line flags."""
from __future__ import annotations

import ast
import dataclasses
import math
import operator
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .surfaces import (
    TriMesh,
    cone_resolution_for,
    mesh_cone,
    mesh_ellipsoid,
    mesh_simplex_boundary,
    mesh_sphere,
    mesh_torus,
)

SURFACES = ("cone", "sphere", "ellipsoid", "torus", "simplex")
CONE_H = 0.02
CONE_MIN_RES = 24


@dataclass
class RunConfig:
    """Everything a CLI run depends on.

    ``res`` means the rim vertex count for cones, the subdivision level for
    sphere, ellipsoid and simplex, and the number of tube vertices ``res_v``
    for the torus (``res_u`` then follows from ``eps`` so that grid cells
    are close to square).  ``tol`` overrides the relative tolerance of the
    command being run.
    """

    surface: str = "sphere"
    r: float = 0.169
    eps: float = 0.1
    n: int = 2
    axes: tuple = (2.0, 1.0, 1.0)
    res: Optional[int] = None
    k: int = 3
    budget: int = 2
    seed: int = 0
    samples: int = 100_000
    start: Optional[float] = None
    stop: Optional[float] = None
    steps: Optional[int] = None
    out: Optional[str] = None
    tol: Optional[float] = None
    extra: dict = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        if self.surface not in SURFACES:
            raise ValueError(f"unknown surface {self.surface!r}; choose from {', '.join(SURFACES)}")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tolerances must be positive")
        if self.k < 0 or self.budget < 0:
            raise ValueError("k and budget must be non-negative")
        if self.out is not None:
            check_writable(self.out)
        return self

    def params(self) -> dict:
        """Surface parameters relevant to ``self.surface``."""
        return {
            "cone": {"r": self.r},
            "sphere": {"radius": 1.0},
            "ellipsoid": {"axes": list(self.axes)},
            "torus": {"eps": self.eps},
            "simplex": {"n": self.n},
        }[self.surface] | {"res": self.resolved_res()}

    def resolved_res(self) -> int:
        if self.res is not None:
            return int(self.res)
        if self.surface == "cone":
            return cone_default_resolution(self.r, CONE_H)
        return {"sphere": 3, "ellipsoid": 3, "torus": 16, "simplex": 3}[self.surface]

    def build_mesh(self) -> TriMesh:
        res = self.resolved_res()
        if self.surface == "cone":
            return mesh_cone(self.r, res)
        if self.surface == "sphere":
            return mesh_sphere(1.0, res)
        if self.surface == "ellipsoid":
            return mesh_ellipsoid(*self.axes, subdivisions=res)
        if self.surface == "torus":
            return mesh_torus(self.eps, torus_res_u(self.eps, res), res)
        return mesh_simplex_boundary(self.n, res)


def cone_default_resolution(r: float, h: float) -> int:
    """Rim count meeting edge length ``h``, never below 24 rim vertices."""
    return max(CONE_MIN_RES, cone_resolution_for(r, h))


def torus_res_u(eps: float, res_v: int) -> int:
    """Even ``res_u`` giving grid cells of roughly equal sides."""
    return max(8, 2 * int(round(res_v / eps / 2.0)))


def check_writable(path) -> None:
    """Raise ``OSError`` if ``path`` cannot be written (its directory must exist)."""
    p = Path(path)
    target = p if p.is_dir() else p.parent
    if not target.exists():
        raise FileNotFoundError(f"output directory {str(target)!r} does not exist")
    if not os.access(target, os.W_OK):
        raise PermissionError(f"output directory {str(target)!r} is not writable")


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _coerce(name: str, value):
    if value is None:
        return None
    kind = {f.name: f.type for f in dataclasses.fields(RunConfig)}.get(name)
    if name == "axes":
        if isinstance(value, str):
            value = [float(x) for x in value.split(",")]
        return tuple(float(x) for x in value)
    if isinstance(value, str):
        if kind in ("int", "Optional[int]"):
            return int(value)
        if kind in ("float", "Optional[float]"):
            return _parse_float(value)
    return value


_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


def _parse_float(text: str) -> float:
    """Numbers, optionally as arithmetic with ``pi`` and ``sqrt``, e.g. ``1/(6*pi)``."""
    try:
        return float(text)
    except ValueError:
        pass

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id == "sqrt"
            and len(node.args) == 1
        ):
            return math.sqrt(ev(node.args[0]))
        raise ValueError(f"cannot parse number {text!r}")

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except SyntaxError:
        raise ValueError(f"cannot parse number {text!r}") from None


def merge(file_values: dict, flag_values: dict, **fixed) -> RunConfig:
    """Defaults, then the config file, then flags (flags win)."""
    names = {f.name for f in dataclasses.fields(RunConfig)} - {"extra"}
    cfg = RunConfig()
    extra = {}
    for source in (file_values, flag_values, fixed):
        for key, value in source.items():
            if value is None:
                continue
            if key in names:
                setattr(cfg, key, _coerce(key, value))
            else:
                extra[key] = value
    cfg.extra = extra
    return cfg


def as_jsonable(x):
    if isinstance(x, dict):
        return {k: as_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [as_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return as_jsonable(x.tolist())
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x

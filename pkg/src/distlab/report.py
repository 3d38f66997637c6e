"""JSON, CSV and SVG output."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from xml.sax.saxutils import escape

from .config import as_jsonable

SCHEMA = 1
CSV_HEADER = ("param", "estimate", "analytic", "rel_err")


def estimate_record(surface: str, params: dict, estimate, **extra) -> dict:
    """Serialisable result of one distortion estimate."""
    rec = {
        "schema": SCHEMA,
        "surface": surface,
        "params": params,
        "value": estimate.value,
        "witness_p": estimate.witness_p,
        "witness_q": estimate.witness_q,
        "intrinsic": estimate.intrinsic,
        "euclidean": estimate.euclidean,
        "h_max": estimate.h_max,
        "witness_h": estimate.witness_h,
        "k": estimate.k,
        "history": [list(x) for x in estimate.refinement_history],
    }
    rec.update(extra)
    return as_jsonable(rec)


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    obj = as_jsonable(obj)
    if isinstance(obj, dict) and "schema" not in obj:
        obj = {"schema": SCHEMA, **obj}
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def write_json(obj, path) -> Path:
    path = Path(path)
    path.write_text(dumps(obj))
    return path


def write_csv(rows, path) -> Path:
    """Rows are ``(param, estimate, analytic, rel_err)``; ``None`` becomes empty."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in rows:
            w.writerow(["" if v is None else repr(float(v)) for v in row])
    return path


def read_csv(path) -> list:
    with Path(path).open() as fh:
        rows = list(csv.reader(fh))
    if tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {rows[0]}")
    return [tuple(float(v) if v else None for v in r) for r in rows[1:]]


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def svg_plot(
    series,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    hlines=(),
    vlines=(),
    width: int = 640,
    height: int = 420,
) -> str:
    """Render line/point series to an SVG document.

    ``series`` holds ``(label, xs, ys, kind)`` with ``kind`` ``"line"`` or
    ``"points"``; ``hlines``/``vlines`` hold ``(value, label)``.
    """
    xs = [x for _, sx, _, _ in series for x in sx] + [v for v, _ in vlines]
    ys = [y for _, _, sy, _ in series for y in sy if y is not None and math.isfinite(y)]
    ys += [v for v, _ in hlines]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    pad = 0.05 * (y1 - y0 or 1.0)
    y0, y1 = y0 - pad, y1 + pad
    ml, mr, mt, mb = 64, 150, 36, 48
    pw, ph = width - ml - mr, height - mt - mb

    def X(x):
        return ml + (x - x0) / (x1 - x0) * pw

    def Y(y):
        return mt + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{ml}" y="20" font-size="14">{escape(title)}</text>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for i in range(6):
        xv = x0 + (x1 - x0) * i / 5
        yv = y0 + (y1 - y0) * i / 5
        out.append(
            f'<text x="{X(xv):.1f}" y="{mt + ph + 16}" text-anchor="middle">{xv:.3g}</text>'
        )
        out.append(f'<text x="{ml - 6}" y="{Y(yv) + 4:.1f}" text-anchor="end">{yv:.3g}</text>')
    out.append(
        f'<text x="{ml + pw / 2:.1f}" y="{height - 8}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="14" y="{mt + ph / 2:.1f}" transform="rotate(-90 14 {mt + ph / 2:.1f})" '
        f'text-anchor="middle">{escape(ylabel)}</text>'
    )
    for v, label in hlines:
        out.append(
            f'<line x1="{ml}" y1="{Y(v):.1f}" x2="{ml + pw}" y2="{Y(v):.1f}" '
            'stroke="gray" stroke-dasharray="6 4"/>'
        )
        out.append(f'<text x="{ml + pw + 4}" y="{Y(v) + 4:.1f}">{escape(label)}</text>')
    for v, label in vlines:
        out.append(
            f'<line x1="{X(v):.1f}" y1="{mt}" x2="{X(v):.1f}" y2="{mt + ph}" '
            'stroke="gray" stroke-dasharray="2 3"/>'
        )
        out.append(f'<text x="{X(v) + 3:.1f}" y="{mt + 12}">{escape(label)}</text>')
    for i, (label, sx, sy, kind) in enumerate(series):
        color = COLORS[i % len(COLORS)]
        pts = [(X(x), Y(y)) for x, y in zip(sx, sy) if y is not None and math.isfinite(y)]
        if kind == "line":
            path = " ".join(f"{px:.1f},{py:.1f}" for px, py in pts)
            out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        else:
            out += [f'<circle cx="{px:.1f}" cy="{py:.1f}" r="3" fill="{color}"/>' for px, py in pts]
        ly = mt + 16 * (i + 1)
        out.append(f'<rect x="{ml + pw + 8}" y="{ly + 18}" width="10" height="10" fill="{color}"/>')
        out.append(f'<text x="{ml + pw + 22}" y="{ly + 27}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

"""Empirical Lipschitz check for the radial projection onto the (y, z)-plane."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc


def radial_projection(point) -> np.ndarray:
    """Project from ``(1, 0, 0)`` onto the plane ``x = 0``: ``(0, y, z) / (1 - x)``."""
    p = np.asarray(point, float)
    x = p[..., 0]
    if np.any(x >= 1.0):
        raise ValueError("radial projection needs x < 1")
    s = 1.0 / (1.0 - x)
    out = np.zeros_like(p)
    out[..., 1] = p[..., 1] * s
    out[..., 2] = p[..., 2] * s
    return out


@dataclass(frozen=True)
class LipschitzReport:
    r: float
    bound: float
    observed: float
    pairs: int
    skipped: int

    @property
    def passed(self) -> bool:
        return self.observed <= self.bound


def _cylinder(u: np.ndarray, r: float) -> np.ndarray:
    """Map the unit cube onto ``[0, pi r] x B^2(0, r)`` (area-uniform in the disc)."""
    x = math.pi * r * u[:, 0]
    rho = r * np.sqrt(u[:, 1])
    phi = 2.0 * math.pi * u[:, 2]
    return np.stack([x, rho * np.cos(phi), rho * np.sin(phi)], axis=1)


def lipschitz_check(r: float, samples: int = 100_000, seed: int = 0, near_fraction: float = 0.5):
    """Largest ``|P(q) - P(q')| / |q - q'|`` over sampled pairs in the cylinder.

    Half of the pairs (``near_fraction``) are far pairs from a scrambled
    Sobol sequence in R^6; the rest pair a Sobol point with a nearby point,
    which probes the local stretch where the supremum lives.  Coincident
    pairs are skipped.
    """
    if not 0.0 < r or 6.0 * math.pi * r > 1.0 + 1e-15:
        raise ValueError(f"need 0 < r and 6 pi r <= 1, got r = {r}")
    if samples < 10_000:
        raise ValueError("need at least 1e4 sample pairs")
    n_near = int(samples * near_fraction)
    n_far = samples - n_near
    sob = qmc.Sobol(d=6, scramble=True, seed=seed)
    u = sob.random_base2(int(math.ceil(math.log2(samples))))[:samples]
    q = _cylinder(u[:n_far, :3], r)
    qq = _cylinder(u[:n_far, 3:], r)
    base = _cylinder(u[n_far:, :3], r)
    # nearby partner: small step in a Sobol direction, clipped back into Z
    step = (u[n_far:, 3:] - 0.5) * 1e-3 * r
    near = base + step
    near[:, 0] = np.clip(near[:, 0], 0.0, math.pi * r)
    rad = np.linalg.norm(near[:, 1:], axis=1)
    over = rad > r
    near[over, 1:] *= (r / rad[over])[:, None]
    a = np.vstack([q, base])
    b = np.vstack([qq, near])
    d = np.linalg.norm(a - b, axis=1)
    keep = d > 0.0
    ratio = np.linalg.norm(radial_projection(a[keep]) - radial_projection(b[keep]), axis=1) / d[keep]
    return LipschitzReport(
        r=r,
        bound=1.0 + 6.0 * math.pi * r,
        observed=float(ratio.max()),
        pairs=int(keep.sum()),
        skipped=int((~keep).sum()),
    )

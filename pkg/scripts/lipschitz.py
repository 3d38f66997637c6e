"""Sampled Lipschitz constant of the radial projection against 1 + 6 pi r."""
import math

from distlab.lipschitz import lipschitz_check

for r in (0.01, 1 / (6 * math.pi)):
    rep = lipschitz_check(r, 100_000, seed=0)
    print(f"r={r:.6f} observed {rep.observed:.6f} bound {rep.bound:.6f} pairs {rep.pairs} ok={rep.passed}")

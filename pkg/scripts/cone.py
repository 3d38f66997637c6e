"""Cone family: minimiser, pi/2 threshold and mesh agreement at h <= 0.02."""
import argparse
import math
import time

from distlab.analytic import HALF_PI, cone_distortion_analytic, cone_threshold, find_r0
from distlab.config import cone_default_resolution
from distlab.distortion import estimate_distortion
from distlab.surfaces import mesh_cone

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--radii", type=float, nargs="*", default=[0.05, 0.10, 0.15, 0.169, 0.25, 0.40])
ap.add_argument("--h", type=float, default=0.02)
ap.add_argument("--k", type=int, default=3)
ap.add_argument("--budget", type=int, default=2)
args = ap.parse_args()

root = find_r0(1e-12)
print(f"r0 = {root.r0:.12f}   delta0 = {root.delta0:.12f}")
print(f"threshold (pi^2-8)/pi^2 = {cone_threshold():.12f}")
print(f"example r = 1/sqrt(10): analytic {cone_distortion_analytic(1 / math.sqrt(10)):.6f}")
print()
print(f"{'r':>6} {'rim':>5} {'V':>6} {'h_max':>7} {'estimate':>9} {'analytic':>9} {'rel_err':>9} {'<pi/2':>6} {'s':>6}")
for r in args.radii:
    t0 = time.perf_counter()
    mesh = mesh_cone(r, cone_default_resolution(r, args.h))
    est = estimate_distortion(mesh, args.k, args.budget)
    ref = cone_distortion_analytic(r)
    print(
        f"{r:6.3f} {cone_default_resolution(r, args.h):5d} {mesh.n_vertices:6d} {est.h_max:7.4f} "
        f"{est.value:9.5f} {ref:9.5f} {est.value / ref - 1:+9.2e} {str(est.value < HALF_PI):>6} "
        f"{time.perf_counter() - t0:6.1f}"
    )

"""Thin tori: distortion approaching pi/2 and the meridian systole."""
import argparse
import math

from distlab.analytic import HALF_PI
from distlab.config import torus_res_u
from distlab.distortion import estimate_distortion
from distlab.surfaces import mesh_torus
from distlab.sweep import fit_linear_coefficient
from distlab.systole import loop_distance_pairs, systole_torus

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--eps", type=float, nargs="*", default=[0.3, 0.15, 0.075])
ap.add_argument("--res-v", type=int, default=16)
args = ap.parse_args()

devs = []
for eps in args.eps:
    mesh = mesh_torus(eps, torus_res_u(eps, args.res_v), args.res_v)
    est = estimate_distortion(mesh, 3, 2)
    devs.append(abs(est.value - HALF_PI))
    print(f"eps={eps:<6g} V={mesh.n_vertices:<6d} estimate {est.value:.6f}  |d - pi/2| = {devs[-1]:.2e}")
print(f"fitted C in |d - pi/2| <= C eps: {fit_linear_coefficient(args.eps, devs):.4f}")

eps = 0.1
sys_ = systole_torus(mesh_torus(eps, torus_res_u(eps, args.res_v), args.res_v), 3)
print(f"systole eps=0.1: length {sys_.length:.6f} / 2 pi eps = {sys_.length / (2 * math.pi * eps):.5f}, winding {sys_.winding}")
for chk in loop_distance_pairs(sys_, 8, 0):
    print(f"  along loop {chk.along_loop:.6f}  graph {chk.full_mesh:.6f}")

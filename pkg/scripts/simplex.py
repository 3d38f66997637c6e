"""Simplex boundaries: closed form, witnesses, two-ray check and the n = 2 mesh."""
import math

from distlab.analytic import (
    HALF_PI,
    dihedral_angle,
    simplex_crossover,
    simplex_distortion_analytic,
    simplex_witnesses,
    two_ray_at_dihedral,
)
from distlab.distortion import estimate_distortion
from distlab.geodesics import two_ray_sampled
from distlab.surfaces import mesh_simplex_boundary

print(f"{'n':>3} {'sqrt(2+2/n)':>12} {'witness':>12} {'two-ray':>12} {'< pi/2':>7}")
for n in range(1, 11):
    d = simplex_distortion_analytic(n)
    print(f"{n:3d} {d:12.9f} {simplex_witnesses(n).ratio:12.9f} {two_ray_at_dihedral(n):12.9f} {str(d < HALF_PI):>7}")
print(f"first n below pi/2: {simplex_crossover()}")
print(f"dihedral angle n=1: {dihedral_angle(1):.9f} (pi/3 = {math.pi / 3:.9f})")
print(f"sampled two-ray at pi/3: {two_ray_sampled(math.pi / 3):.6f}")
est = estimate_distortion(mesh_simplex_boundary(2, 3), 3, 2)
print(f"n=2 mesh estimate {est.value:.5f} vs sqrt(3) = {math.sqrt(3):.5f}")

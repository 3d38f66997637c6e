"""Eccentricity against distortion: round sphere, prolate ellipsoids and cones."""
from distlab.distortion import estimate_distortion
from distlab.eccentricity import eccentricity
from distlab.surfaces import mesh_cone, mesh_ellipsoid, mesh_sphere

print(f"sphere ratio {eccentricity(mesh_sphere(1, 3)).ratio:.6f}")
for a in (2.0, 5.0):
    m = mesh_ellipsoid(a, 1, 1, 3)
    print(f"ellipsoid ({a:g},1,1): ratio {eccentricity(m).ratio:.4f}  distortion {estimate_distortion(m, 15, 1).value:.5f}")
for r in (0.4, 0.169, 0.05, 0.02):
    print(f"cone r={r:<5g} ratio {eccentricity(mesh_cone(r, 48)).ratio:.3f}")

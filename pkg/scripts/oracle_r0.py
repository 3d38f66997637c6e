"""High-precision reference values for the cone minimiser (needs mpmath).

Prints r0, delta0 and the pi/2 threshold to 30 digits, computed without any
distlab code, for comparison with ``distlab root``.
"""
import mpmath as mp

mp.mp.dps = 40


def antipodal(r):
    return mp.sin(mp.pi * r / 2) / r


def rim(r):
    return mp.sqrt(2) / mp.sqrt(1 - r)


r0 = mp.findroot(lambda r: antipodal(r) - rim(r), 0.17)
thr = mp.findroot(lambda r: rim(r) - mp.pi / 2, 0.19)
print("r0        ", mp.nstr(r0, 30))
print("delta0    ", mp.nstr(rim(r0), 30))
print("threshold ", mp.nstr(thr, 30))
print("closed    ", mp.nstr((mp.pi**2 - 8) / mp.pi**2, 30))

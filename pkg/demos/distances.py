"""Funk distances in a few convex cones.

Shows asymmetry, the additive shift along apex rays, and scale invariance.
"""

import numpy as np

from funkvoronoi import FORWARD, REVERSE, Cone, funk_distance
from funkvoronoi.oracle import beta_scaling_distance

cones = {
    "circular 45deg": Cone.circular(np.pi / 4),
    "elliptical": Cone.elliptical(np.pi / 4, np.diag([2.0, 1.0, 1.0])),
    "square": Cone.from_polygon([[1, 1], [-1, 1], [-1, -1], [1, -1]]),
}
a, b = np.array([0.1, 0.05, 1.0]), np.array([-0.2, 0.1, 1.3])

for name, cone in cones.items():
    f, fr = funk_distance(cone, a, b, FORWARD), funk_distance(cone, a, b, REVERSE)
    oracle = beta_scaling_distance(cone, a, b)
    print(f"{name:15s} F={f:+.6f}  F_r={fr:+.6f}  oracle F={oracle:+.6f}")

cone = cones["circular 45deg"]
print("\nmoving the source along its apex ray adds ln(lambda):")
for lam in (0.5, 1.0, 2.0, 4.0):
    print(f"  lambda={lam:<4} F(lambda a, b) - F(a, b) = {funk_distance(cone, lam * a, b) - funk_distance(cone, a, b):+.6f}"
          f"  ln(lambda) = {np.log(lam):+.6f}")
print("\nscaling both points leaves the distance unchanged:")
print(f"  F(10a, 10b) = {funk_distance(cone, 10 * a, 10 * b):+.6f}")

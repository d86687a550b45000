"""Circumcenters of three sites in a round cone.

Slides the extreme site r through the regions around two fixed sites and
reports how many Funk balls pass through all three.
"""

import numpy as np

from funkvoronoi import Cone, circumcenter_setup, classify, funk_distance

cone = Cone.circular(np.pi / 4)
p, q = np.array([-0.3, 0, 0.65]), np.array([0.3, 0, 0.65])
for r in ([0, 0, 0.9], [0, 0.3, 0.9], [0, 0.6, 0.9], [0.8, 0, 0.9], [-0.36, 0, 0.78]):
    r = np.array(r, dtype=float)
    out = classify(circumcenter_setup(cone, p, q, r))
    print(f"r={r.tolist()}: {out.label.value}, {len(out.circumcenters)} circumcenter(s)")
    for c in out.circumcenters:
        d = [funk_distance(cone, s, c.ray) for s in (p, q, r)]
        print(f"    slice point {np.round(c.representative, 7).tolist()}  distances {np.round(d, 9).tolist()}")

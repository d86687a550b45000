"""Voronoi diagram in a pentagonal cone.

Spokes fix the active boundary edge of each sector, so every bisector is a
polyline.  The script traces one bisector, builds the diagram and draws it.
"""

import sys
from pathlib import Path

import numpy as np

from funkvoronoi import FORWARD, active_edge, build_polygonal_voronoi, parse_scene, render_svg, spokes

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)

angles = 2 * np.pi * np.arange(5) / 5 + np.pi / 2
pentagon = np.c_[np.cos(angles), np.sin(angles)]
sp = spokes(pentagon, [0.1, 0.0], FORWARD)
print("spokes from (0.1, 0):", np.round(sp.directions, 3).tolist())
print("active edge towards (0.5, 0.2):", active_edge(pentagon, sp, [0.5, 0.2]))

rng = np.random.default_rng(3)
pts = rng.uniform(-0.5, 0.5, (9, 2))
sites = np.c_[pts, rng.uniform(0.9, 1.1, 9)]
sites[:, :2] *= sites[:, 2:]
doc = {"cone": {"kind": "polygon", "vertices": pentagon.tolist()}, "sites": sites.tolist()}
scene = parse_scene(doc)
dg = build_polygonal_voronoi(scene.cone, scene.sites, FORWARD, seed=42)
print(f"cells={len(dg.cells)} vertices={len(dg.vertices)} bisectors={len(dg.bisectors)}")
print("segments per bisector:", [b.segments for b in dg.bisectors], "(bound 2m + 2 = 12)")
(out / "pentagon.svg").write_text(render_svg(scene, dg, show_spokes=True))
print(f"SVG written to {out}/pentagon.svg")

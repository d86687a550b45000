"""Forward and reverse Voronoi diagrams in a round cone.

Builds both diagrams for the same sites, reports vertices and their
residuals, checks them against the grid oracle and writes SVG drawings.
"""

import sys
from pathlib import Path

import numpy as np

from funkvoronoi import FORWARD, REVERSE, Cone, build_funk_voronoi, parse_scene, render_svg
from funkvoronoi.oracle import grid_labeling
from funkvoronoi.serialization import vertex_residual

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)

rng = np.random.default_rng(1)
theta = np.radians(40)
r = 0.8 * np.tan(theta) * np.sqrt(rng.uniform(0, 1, 12))
phi = rng.uniform(0, 2 * np.pi, 12)
z = rng.uniform(0.85, 1.15, 12)
sites = np.c_[z * r * np.cos(phi), z * r * np.sin(phi), z]
scene_doc = {"cone": {"kind": "circular", "half_angle": float(theta)}, "sites": sites.tolist()}

for direction in (FORWARD, REVERSE):
    dg = build_funk_voronoi(Cone.circular(theta), sites, direction)
    res = max((vertex_residual(dg, v.representative, v.triple) for v in dg.vertices), default=0.0)
    grid = grid_labeling(dg.cross_section, dg.weighted, resolution=256)
    lab = dg.label_grid(grid.xs, grid.ys)
    ok = (grid.labels >= 0) & (grid.gap > 1e-6)
    print(f"{direction.value:8s} cells={len(dg.cells)} vertices={len(dg.vertices)} dominated={dg.dominated} "
          f"max residual={res:.1e} grid agreement={np.mean(lab[ok] == grid.labels[ok]):.5f}")
    scene = parse_scene(dict(scene_doc, metric=direction.value))
    (out / f"round_{direction.value}.svg").write_text(render_svg(scene, dg))
print(f"SVG written to {out}/")

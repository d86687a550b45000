"""Scene files, diagram JSON and SVG rendering."""

from __future__ import annotations

import json
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .cone2d import Diagram2D, PlanarCone, voronoi_2d
from .core_metric import FORWARD, INTERIOR_TOL, Cone, Direction, funk_distance, margin
from .cross_section import weighted_distance, zero_ball
from .elliptical import FunkVoronoiDiagram3D, build_funk_voronoi
from .errors import FunkError, NotInterior
from .polygonal import DEFAULT_SEED, PolygonalFunkDiagram, build_polygonal_voronoi, spokes

FORMAT = "funkvoronoi-diagram"
VERSION = 1


def scene_schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("data/scene.schema.json").read_text())


@dataclass(frozen=True, eq=False)
class Scene:
    cone: object              # Cone or PlanarCone
    sites: np.ndarray         # weights already folded in
    metric: Direction
    seed: int | None = None
    weights: np.ndarray | None = None
    raw: dict | None = None

    @property
    def planar(self) -> bool:
        return isinstance(self.cone, PlanarCone)

    @property
    def metric_cone(self) -> Cone:
        return self.cone.cone if self.planar else self.cone


def _make_cone(doc: dict):
    kind = doc["kind"]
    if kind == "circular":
        return Cone.circular(doc["half_angle"])
    if kind == "elliptical":
        return Cone.elliptical(doc["half_angle"], doc["matrix"])
    if kind == "polyhedral":
        if len(doc["normals"][0]) == 2:
            (c1, c2), (c3, c4) = doc["normals"][:2]
            return PlanarCone(c1, c2, c3, c4)
        return Cone.polyhedral(doc["normals"])
    if kind == "polygon":
        return Cone.from_polygon(doc["vertices"])
    (c1, c2), (c3, c4) = doc["forms"]
    return PlanarCone(c1, c2, c3, c4)


def parse_scene(data: dict) -> Scene:
    """Validate a scene dictionary and build its cone and sites.

    Additive site weights are folded into the sites: scaling a site by
    ``e^w`` (forward) or ``e^-w`` (reverse) adds ``w`` to every distance from it.
    """
    try:
        jsonschema.validate(data, scene_schema())
    except jsonschema.ValidationError as exc:
        raise FunkError(f"invalid scene: {exc.message}") from None
    cone = _make_cone(data["cone"])
    dim = 2 if isinstance(cone, PlanarCone) else 3
    sites = np.array(data["sites"], dtype=float)
    if sites.ndim != 2 or sites.shape[1] != dim:
        raise FunkError(f"sites must be {dim}-dimensional for this cone")
    metric = Direction.parse(data.get("metric", "forward"))
    weights = None
    if "weights" in data:
        weights = np.array(data["weights"], dtype=float)
        if len(weights) != len(sites):
            raise FunkError("weights and sites differ in length")
        sign = 1.0 if metric is FORWARD else -1.0
        sites = sites * np.exp(sign * weights)[:, None]
    mc = cone.cone if isinstance(cone, PlanarCone) else cone
    bad = np.nonzero(~(margin(mc, sites) > INTERIOR_TOL))[0]
    if len(bad):
        raise NotInterior(f"site not interior: index {int(bad[0])}")
    return Scene(cone, sites, metric, data.get("seed"), weights, data)


def load_scene(path) -> Scene:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FunkError(f"malformed JSON: {exc}") from None
    return parse_scene(data)


# ---------------------------------------------------------------------------
# building and serialising diagrams


def build_diagram(scene: Scene, seed: int | None = None):
    if scene.planar:
        return voronoi_2d(scene.cone, scene.sites, scene.metric)
    if scene.cone.kind == "polyhedral":
        s = seed if seed is not None else scene.seed
        return build_polygonal_voronoi(scene.cone, scene.sites, scene.metric,
                                       seed=DEFAULT_SEED if s is None else s)
    return build_funk_voronoi(scene.cone, scene.sites, scene.metric)


def _weighted_lookup(diagram):
    return {w.origin_index: w for w in diagram.weighted}


def vertex_residual(diagram, point, indices) -> float:
    """Spread of the weighted distances from ``indices`` at a slice point."""
    ws = _weighted_lookup(diagram)
    d = [float(weighted_distance(diagram.cross_section, ws[i], point)) for i in indices]
    return max(d) - min(d)


def ray_residual(scene: Scene, diagram: Diagram2D, k: int) -> float:
    a, b = diagram.order[k], diagram.order[k + 1]
    x = diagram.rays[k]
    cone = scene.metric_cone
    return abs(funk_distance(cone, scene.sites[a], x, diagram.direction)
               - funk_distance(cone, scene.sites[b], x, diagram.direction))


def diagram_to_dict(scene: Scene, diagram) -> dict:
    out = {
        "format": FORMAT,
        "version": VERSION,
        "metric": diagram.direction.value,
        "sites": scene.sites.tolist(),
        "dominated": [int(i) for i in diagram.dominated],
    }
    if isinstance(diagram, Diagram2D):
        out["cone"] = {"kind": "wedge", "forms": scene.cone.forms.tolist()}
        out["order"] = [int(i) for i in diagram.order]
        out["rays"] = [{"sites": [int(diagram.order[k]), int(diagram.order[k + 1])],
                        "direction": diagram.rays[k].tolist(),
                        "residual": ray_residual(scene, diagram, k)}
                       for k in range(len(diagram.rays))]
        return out
    out["cone"] = scene.cone.to_dict()
    out["cross_section"] = diagram.cross_section.to_dict()
    out["weights"] = [None] * len(scene.sites)
    out["projected"] = [None] * len(scene.sites)
    for w in diagram.weighted:
        out["weights"][w.origin_index] = w.weight
        out["projected"][w.origin_index] = w.position.tolist()
    verts = []
    for v in diagram.vertices:
        point = v.representative if isinstance(diagram, FunkVoronoiDiagram3D) else v.point
        verts.append({"representative": np.asarray(point).tolist(), "ray": v.ray.tolist(),
                      "triple": [int(i) for i in v.triple],
                      "residual": vertex_residual(diagram, point, v.triple)})
    out["vertices"] = verts
    if isinstance(diagram, FunkVoronoiDiagram3D):
        out["edges"] = [{"sites": list(e.sites), "polyline": ch.tolist()}
                        for e in diagram.edges for ch in e.chains]
    else:
        out["edges"] = [{"sites": list(b.sites), "polyline": b.points.tolist()} for b in diagram.bisectors]
        out["insertion_order"] = [int(i) for i in diagram.insertion_order]
    out["cells"] = [{"site": int(i), "polygon": np.asarray(p).tolist()} for i, p in sorted(diagram.cells.items())]
    return out


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise FunkError("non-finite number in diagram output")
        s = format(x, ".17g")
        return s if any(ch in s for ch in ".en") else s + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _encode(obj) + "\n"


# ---------------------------------------------------------------------------
# SVG


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def render_svg(scene: Scene, diagram, show_spokes: bool = False) -> str:
    """SVG 1.1 drawing of the slice: Omega, zero balls, bisectors, vertices.

    The slice is scaled into a 1000-unit viewBox with the y axis pointing up.
    """
    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", version="1.1",
                     width="1000", height="1000", viewBox="0 0 1000 1000")
    if isinstance(diagram, Diagram2D):
        pts = np.vstack([np.zeros((1, 2)), scene.sites])
        x0, y0 = pts.min(axis=0)
        x1, y1 = pts.max(axis=0)
    else:
        x0, y0, x1, y1 = diagram.cross_section.bbox
    pad = 0.05 * max(x1 - x0, y1 - y0)
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
    s = 1000.0 / max(x1 - x0, y1 - y0)

    def tr(p):
        p = np.atleast_2d(p)
        return np.c_[(p[:, 0] - x0) * s, 1000.0 - (p[:, 1] - y0) * s]

    def poly(points, closed, **attrs):
        q = tr(points)
        tag = "polygon" if closed else "polyline"
        ET.SubElement(svg, tag, points=" ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in q), **attrs)

    def dot(p, r, **attrs):
        q = tr(p)[0]
        ET.SubElement(svg, "circle", cx=_fmt(q[0]), cy=_fmt(q[1]), r=_fmt(r), **attrs)

    if isinstance(diagram, Diagram2D):
        far = 2.0 * max(x1 - x0, y1 - y0)
        for d in diagram.cone_rays:
            poly(np.array([[0, 0], far * d]), False, stroke="black", fill="none")
        for d in diagram.rays:
            poly(np.array([[0, 0], far * d]), False, stroke="crimson", fill="none")
        for p in scene.sites:
            dot(p, 4, fill="navy")
        return _tostring(svg)

    cs = diagram.cross_section
    if cs.kind == "disk":
        t = np.linspace(0, 2 * np.pi, 721)[:-1]
        poly(cs.radius * np.c_[np.cos(t), np.sin(t)], True, stroke="black", fill="none")
    else:
        poly(cs.vertices, True, stroke="black", fill="none")
    kept = sorted(diagram.cells)
    for i in kept:
        zb = zero_ball(diagram.cone, cs, scene.sites[i])
        if zb.kind == "disk":
            t = np.linspace(0, 2 * np.pi, 241)[:-1]
            poly(zb.center + zb.radius * np.c_[np.cos(t), np.sin(t)], True,
                 stroke="steelblue", fill="none", **{"stroke-dasharray": "4 3"})
        else:
            poly(zb.vertices, True, stroke="steelblue", fill="none", **{"stroke-dasharray": "4 3"})
    if show_spokes and isinstance(diagram, PolygonalFunkDiagram):
        for w in diagram.weighted:
            sp = spokes(diagram.domain, w.position, diagram.direction)
            for d in sp.directions:
                poly(np.array([w.position, w.position + _exit(diagram.domain, w.position, d) * d]),
                     False, stroke="gray", fill="none", **{"stroke-width": "0.5"})
    if isinstance(diagram, FunkVoronoiDiagram3D):
        lines = [ch for e in diagram.edges for ch in e.chains]
    else:
        lines = [b.points for b in diagram.bisectors]
    for ln in lines:
        poly(ln, False, stroke="crimson", fill="none", **{"stroke-width": "1.5"})
    for w in diagram.weighted:
        dot(w.position, 4, fill="navy")
    for v in diagram.vertices:
        p = v.representative if isinstance(diagram, FunkVoronoiDiagram3D) else v.point
        dot(p, 3, fill="darkgreen")
    return _tostring(svg)


def _exit(dom, p, d) -> float:
    n, c = dom.forms
    nd = n @ d
    with np.errstate(divide="ignore"):
        t = -(n @ p + c) / nd
    return float(np.min(np.where(nd < 0, t, np.inf)))


def _tostring(svg) -> str:
    body = ET.tostring(svg, encoding="unicode")
    return ('<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n'
            '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
            '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">\n' + body + "\n")

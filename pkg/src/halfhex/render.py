"""SVG pictures of the five models and of the Aztec half-diamond.

Drawing goes through a tiny scene of primitives (polygons, polylines,
lines, circles) so that an SVG file can be parsed back into the same
scene; re-rendering a parsed file reproduces it byte for byte.
Triangular-lattice points ``a*v + b*w`` land at pixel
``(scale * (a + b/2), -scale * b * sqrt3/2)``.
"""
from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .bijections import (HalfHexMatching, LatticePathFamily, LozengeTiling, ParticleSystem,
                         _adjacency, convert, region_triangles, tile_triangles,
                         triangle_points, to_tableau)

SVG_NS = "http://www.w3.org/2000/svg"
VIEWS = ("paths", "boxes", "matching", "lozenges", "particles", "half-diamond")

STYLE = {
    "loz-v": "fill:#e8c547;stroke:#333;stroke-width:0.6",
    "loz-w": "fill:#5b8fd6;stroke:#333;stroke-width:0.6",
    "loz-wv": "fill:#d9534f;stroke:#333;stroke-width:0.6",
    "box-v": "fill:#f4f4f4;stroke:#222;stroke-width:0.8",
    "box-w": "fill:#9a9a9a;stroke:#222;stroke-width:0.8",
    "box-wv": "fill:#5c5c5c;stroke:#222;stroke-width:0.8",
    "faint": "fill:none;stroke:#ccc;stroke-width:0.4",
    "graph": "stroke:#bbb;stroke-width:0.6",
    "dimer": "stroke:#111;stroke-width:3;stroke-linecap:round",
    "path": "fill:none;stroke:#c0392b;stroke-width:2.5;stroke-linejoin:round",
    "particle": "fill:#111",
    "frozen": "fill:none;stroke:#111;stroke-width:1",
    "sq-half": "fill:#8fbf6a;stroke:#333;stroke-width:0.5",
    "sq-rest": "fill:#e6e6e6;stroke:#333;stroke-width:0.5",
    "dom-h": "fill:#5b8fd6;stroke:#111;stroke-width:0.8",
    "dom-v": "fill:#e8c547;stroke:#111;stroke-width:0.8",
}
DIGITS = 3


@dataclass(frozen=True)
class Shape:
    tag: str  # polygon | polyline | line | circle
    cls: str
    coords: tuple[float, ...]  # flat x, y list; circle: cx, cy, r


@dataclass
class Scene:
    shapes: list[Shape] = field(default_factory=list)
    title: str = ""

    def add(self, tag: str, cls: str, coords) -> None:
        flat = tuple(round(float(c), DIGITS) + 0.0 for c in coords)
        self.shapes.append(Shape(tag, cls, flat))

    def bounds(self) -> tuple[float, float, float, float]:
        xs, ys = [], []
        for s in self.shapes:
            if s.tag == "circle":
                cx, cy, r = s.coords
                xs += [cx - r, cx + r]
                ys += [cy - r, cy + r]
            else:
                xs += list(s.coords[0::2])
                ys += list(s.coords[1::2])
        if not xs:
            return 0.0, 0.0, 1.0, 1.0
        return min(xs), min(ys), max(xs), max(ys)


def _fmt(v: float) -> str:
    s = f"{v:.{DIGITS}f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def to_svg(scene: Scene, margin: float = 10.0) -> str:
    x0, y0, x1, y1 = scene.bounds()
    x0, y0, x1, y1 = x0 - margin, y0 - margin, x1 + margin, y1 + margin
    w, h = x1 - x0, y1 - y0
    used = sorted({s.cls for s in scene.shapes})
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="{SVG_NS}" version="1.1" width="{_fmt(w)}" height="{_fmt(h)}" '
           f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}">']
    if scene.title:
        out.append(f"<title>{_escape(scene.title)}</title>")
    out.append("<style>")
    out += [f".{c}{{{STYLE.get(c, 'fill:none;stroke:#000')}}}" for c in used]
    out.append("</style>")
    for s in scene.shapes:
        c = s.coords
        if s.tag in ("polygon", "polyline"):
            pts = " ".join(f"{_fmt(c[k])},{_fmt(c[k + 1])}" for k in range(0, len(c), 2))
            out.append(f'<{s.tag} class="{s.cls}" points="{pts}"/>')
        elif s.tag == "line":
            out.append(f'<line class="{s.cls}" x1="{_fmt(c[0])}" y1="{_fmt(c[1])}" '
                       f'x2="{_fmt(c[2])}" y2="{_fmt(c[3])}"/>')
        elif s.tag == "circle":
            out.append(f'<circle class="{s.cls}" cx="{_fmt(c[0])}" cy="{_fmt(c[1])}" r="{_fmt(c[2])}"/>')
        else:
            raise ValueError(f"unknown shape {s.tag!r}")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def parse_svg(text: str) -> Scene:
    root = ET.fromstring(text.encode())
    scene = Scene()
    for el in root:
        tag = el.tag.split("}")[-1]
        cls = el.get("class", "")
        if tag == "title":
            scene.title = el.text or ""
        elif tag in ("polygon", "polyline"):
            coords = [float(v) for pair in el.get("points", "").split() for v in pair.split(",")]
            scene.add(tag, cls, coords)
        elif tag == "line":
            scene.add(tag, cls, [float(el.get(k)) for k in ("x1", "y1", "x2", "y2")])
        elif tag == "circle":
            scene.add(tag, cls, [float(el.get(k)) for k in ("cx", "cy", "r")])
    return scene


# --- lattice geometry -----------------------------------------------------------

def lattice_xy(a: float, b: float, scale: float) -> tuple[float, float]:
    return scale * (a + b / 2), -scale * b * math.sqrt(3) / 2


def _tile_outline(tile) -> list[tuple[int, int]]:
    up, down = tile_triangles(tile)
    pu, pd = triangle_points(up), triangle_points(down)
    shared = pu & pd
    (p,), (q,) = pu - shared, pd - shared
    s1, s2 = sorted(shared)
    return [p, s1, q, s2]


def _lozenge_scene(t: LozengeTiling, scale: float, prefix: str) -> Scene:
    sc = Scene(title=f"lozenge tiling, order {t.order}")
    for tile in sorted(t.tiles):
        pts = [c for a, b in _tile_outline(tile) for c in lattice_xy(a, b, scale)]
        sc.add("polygon", f"{prefix}-{tile[0]}", pts)
    return sc


def _centroid(tri) -> tuple[float, float]:
    pts = triangle_points(tri)
    return sum(p[0] for p in pts) / 3, sum(p[1] for p in pts) / 3


def render_scene(obj, view: str, scale: float = 20.0) -> Scene:
    """Scene for one of the five models (or a tableau) in the requested view."""
    if view not in VIEWS:
        raise ValueError(f"view must be one of {', '.join(VIEWS)}")
    if view == "half-diamond":
        return half_diamond_scene(to_tableau(obj).order, scale=scale)
    t = to_tableau(obj)
    n = t.order
    if view in ("lozenges", "boxes"):
        return _lozenge_scene(convert(t, "lozenges"), scale, "loz" if view == "lozenges" else "box")
    if view == "matching":
        m: HalfHexMatching = convert(t, "matching")
        sc = Scene(title=f"perfect matching, order {n}")
        adj = _adjacency(n)
        for x in sorted(adj):
            for y in adj[x]:
                if x < y:
                    sc.add("line", "graph", [*lattice_xy(*_centroid(x), scale), *lattice_xy(*_centroid(y), scale)])
        for up, down in sorted(m.completion()):
            sc.add("line", "dimer", [*lattice_xy(*_centroid(up), scale), *lattice_xy(*_centroid(down), scale)])
        return sc
    if view == "particles":
        p: ParticleSystem = convert(t, "particles")
        sc = Scene(title=f"interlacing particles, order {n}")
        for tri in sorted(region_triangles(n)):
            pts = [c for a, b in sorted(triangle_points(tri)) for c in lattice_xy(a, b, scale)]
            sc.add("polygon", "faint", pts)
        for r, q in sorted(p.particles):
            sc.add("circle", "particle", [*lattice_xy(q - n - 0.5, n - 1 - r, scale), scale * 0.22])
        return sc
    f: LatticePathFamily = convert(t, "paths")
    sc = _lozenge_scene(convert(t, "lozenges"), scale, "loz")
    sc.shapes = [Shape(s.tag, "faint", s.coords) for s in sc.shapes]
    sc.title = f"non-intersecting paths, order {n}"
    for i in range(1, n + 1):
        pts = []
        for x, y in f.points(i):
            pts += lattice_xy(-n - x - y, x - 0.5, scale)
        sc.add("polyline", "path", pts)
    return sc


def half_diamond_scene(n: int, dominoes=None, phase: str = "parity", scale: float = 12.0) -> Scene:
    """A_n with the squares of H_n shaded, or a domino tiling when ``dominoes`` is given."""
    from .aztec import aztec_diamond, half_diamond

    sc = Scene(title=f"Aztec half-diamond H_{n} inside A_{n}")
    if dominoes is not None:
        for (x, y), o in dominoes:
            w, h = (2, 1) if o == "h" else (1, 2)
            sc.add("polygon", f"dom-{o}", [scale * x, -scale * y, scale * (x + w), -scale * y,
                                            scale * (x + w), -scale * (y + h), scale * x, -scale * (y + h)])
        return sc
    half = half_diamond(n, phase).squares
    for x, y in sorted(aztec_diamond(n).squares):
        cls = "sq-half" if (x, y) in half else "sq-rest"
        sc.add("polygon", cls, [scale * x, -scale * y, scale * (x + 1), -scale * y,
                                scale * (x + 1), -scale * (y + 1), scale * x, -scale * (y + 1)])
    return sc


def render(obj, view: str, scale: float = 20.0) -> str:
    return to_svg(render_scene(obj, view, scale))


def rerender(svg: str) -> str:
    return to_svg(parse_svg(svg))

"""SVG rendering of drawings in string-diagram style."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .embedding import extract_polarization
from .geometry import Drawing, validate_drawing

__all__ = ["render_svg"]

UNIT = 40.0
MARGIN = 30.0
RADIUS = 3.5
ARROW = 7.0


def _f(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(drawing: Drawing, show_ids: bool = True, show_polarization_labels: bool = False) -> str:
    """Deterministic SVG with the y axis flipped to screen orientation.

    Each edge gets one arrowhead at the midpoint of its polyline length.
    Violations of an invalid drawing are circled with class ``violation``.
    """
    x0, x1, y0, y1 = drawing.bbox()
    width = float(x1 - x0) * UNIT + 2 * MARGIN
    height = float(y1 - y0) * UNIT + 2 * MARGIN

    def sx(x) -> float:
        return float(x - x0) * UNIT + MARGIN

    def sy(y) -> float:
        return float(y1 - y) * UNIT + MARGIN

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
        "<style>.edge{fill:none;stroke:#000;stroke-width:1.5}.arrow{fill:#000}.vertex{fill:#000}"
        ".violation{fill:none;stroke:#d00;stroke-width:2}text{font:10px sans-serif}"
        ".pol-in,.pol-out{fill:#036}</style>",
    ]
    for e in drawing.graph.edges:
        pts = [(sx(p.x), sy(p.y)) for p in drawing.polyline(e.id)]
        coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        out.append(f'<polyline class="edge" data-edge="{escape(e.id)}" points="{coords}"/>')
        out.append(_arrow(pts, e.id))
        if show_ids:
            mx, my = _midpoint(pts)[0]
            out.append(f'<text class="edge-id" x="{_f(mx + 5)}" y="{_f(my - 5)}">{escape(e.id)}</text>')
    for v in drawing.graph.vertices:
        p = drawing.position[v]
        out.append(f'<circle class="vertex" data-vertex="{escape(v)}" cx="{_f(sx(p.x))}" cy="{_f(sy(p.y))}" r="{_f(RADIUS)}"/>')
        if show_ids:
            out.append(f'<text class="vertex-id" x="{_f(sx(p.x) + 6)}" y="{_f(sy(p.y) + 4)}">{escape(v)}</text>')

    report = validate_drawing(drawing)
    if show_polarization_labels and report.ok:
        for v, pol in extract_polarization(drawing).items():
            here = drawing.position[v]
            for cls, order in (("pol-in", pol.in_order), ("pol-out", pol.out_order)):
                for i, eid in enumerate(order, start=1):
                    pl = drawing.polyline(eid)
                    nxt = pl[1] if pl[0] == here else pl[-2]
                    dx, dy = float(nxt.x - here.x), float(nxt.y - here.y)
                    n = math.hypot(dx, dy)
                    lx, ly = sx(here.x) + 16 * dx / n, sy(here.y) - 16 * dy / n
                    out.append(f'<text class="{cls}" data-vertex="{escape(v)}" data-edge="{escape(eid)}" '
                               f'x="{_f(lx)}" y="{_f(ly)}">{i}</text>')
    for viol in report.violations:
        for p in viol.points:
            out.append(f'<circle class="violation violation-{viol.code}" cx="{_f(sx(p.x))}" cy="{_f(sy(p.y))}" r="6"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _midpoint(pts):
    lengths = [math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(pts, pts[1:])]
    half = sum(lengths) / 2
    for (a, b), ln in zip(zip(pts, pts[1:]), lengths):
        if half <= ln and ln > 0:
            t = half / ln
            return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])), ((b[0] - a[0]) / ln, (b[1] - a[1]) / ln)
        half -= ln
    a, b = pts[-2], pts[-1]
    ln = math.hypot(b[0] - a[0], b[1] - a[1]) or 1.0
    return b, ((b[0] - a[0]) / ln, (b[1] - a[1]) / ln)


def _arrow(pts, eid: str) -> str:
    (mx, my), (ux, uy) = _midpoint(pts)
    tip = (mx + ux * ARROW / 2, my + uy * ARROW / 2)
    base = (mx - ux * ARROW / 2, my - uy * ARROW / 2)
    left = (base[0] - uy * ARROW / 2, base[1] + ux * ARROW / 2)
    right = (base[0] + uy * ARROW / 2, base[1] - ux * ARROW / 2)
    d = f"M{_f(tip[0])},{_f(tip[1])} L{_f(left[0])},{_f(left[1])} L{_f(right[0])},{_f(right[1])} Z"
    return f'<path class="arrow" data-edge="{escape(eid)}" d="{d}"/>'

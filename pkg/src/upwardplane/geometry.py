"""Exact polyline drawings, their validation, clearance and affine transforms.

Every coordinate is a :class:`fractions.Fraction`; there is no tolerance
anywhere in this module. Coordinates are mathematical (y grows upward) and
an edge is drawn from its tail down to its head.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import DomainError, PreconditionError, StructuralError
from .graph import DirectedAcyclicGraph

__all__ = [
    "Point",
    "Drawing",
    "Segment",
    "PlaneBox",
    "Violation",
    "ValidationReport",
    "VIOLATION_CODES",
    "to_fraction",
    "orient",
    "segment_intersection",
    "point_segment_dist2",
    "validate_drawing",
    "require_valid",
    "validate_progressive",
    "min_clearance",
    "transform",
    "translate",
    "scale_positive",
    "mirror_x",
    "sqrt_lower",
]


def to_fraction(value) -> Fraction:
    """Parse an int, Fraction or decimal/``p/q`` string exactly. Floats are refused."""
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a decimal string or Fraction")
    return Fraction(value)


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(to_fraction(x), to_fraction(y))


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the cross product (b - a) x (c - a): +1 left turn, -1 right turn, 0 collinear."""
    d = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    return (d > 0) - (d < 0)


def _on_closed(p: Point, a: Point, b: Point) -> bool:
    """p collinear with ab is assumed; test it lies within the bounding box."""
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def segment_intersection(a: Point, b: Point, c: Point, d: Point):
    """Intersection of closed segments ab and cd.

    Returns None, ``("point", P)`` or ``("overlap", (P, Q))`` with P != Q.
    """
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 == o2 == 0:
        # collinear: project on the dominant axis
        key = (lambda p: (p.x, p.y)) if a.x != b.x or c.x != d.x else (lambda p: (p.y, p.x))
        lo1, hi1 = sorted((a, b), key=key)
        lo2, hi2 = sorted((c, d), key=key)
        lo = max(lo1, lo2, key=key)
        hi = min(hi1, hi2, key=key)
        if key(lo) > key(hi):
            return None
        if lo == hi:
            return ("point", lo)
        return ("overlap", (lo, hi))
    if o1 * o2 > 0 or o3 * o4 > 0:
        return None
    if o1 == 0:
        return ("point", c) if _on_closed(c, a, b) else None
    if o2 == 0:
        return ("point", d) if _on_closed(d, a, b) else None
    if o3 == 0:
        return ("point", a) if _on_closed(a, c, d) else None
    if o4 == 0:
        return ("point", b) if _on_closed(b, c, d) else None
    # proper crossing
    den = (b.x - a.x) * (d.y - c.y) - (b.y - a.y) * (d.x - c.x)
    t = Fraction((c.x - a.x) * (d.y - c.y) - (c.y - a.y) * (d.x - c.x)) / den
    return ("point", Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)))


def point_segment_dist2(p: Point, a: Point, b: Point) -> Fraction:
    dx, dy = b.x - a.x, b.y - a.y
    px, py = p.x - a.x, p.y - a.y
    ll = dx * dx + dy * dy
    if ll == 0:
        return px * px + py * py
    t = Fraction(px * dx + py * dy) / ll
    if t <= 0:
        return px * px + py * py
    if t >= 1:
        qx, qy = p.x - b.x, p.y - b.y
        return qx * qx + qy * qy
    cx, cy = px - t * dx, py - t * dy
    return cx * cx + cy * cy


def sqrt_lower(value: Fraction, digits: int = 6) -> Fraction:
    """A terminating decimal strictly below sqrt(value) with at least ``digits`` significant digits."""
    if value <= 0:
        raise DomainError("sqrt_lower needs a positive value")
    k = digits
    while True:
        scale = 10**k
        # floor(sqrt(value) * scale) via integer sqrt of floor(value * scale^2)
        n = math.isqrt(math.floor(value * scale * scale))
        if Fraction(n, scale) ** 2 >= value:
            n -= 1
        if n >= 10**digits:
            return Fraction(n, scale)
        k += 1


class Segment(NamedTuple):
    edge: str
    index: int
    a: Point
    b: Point


@dataclass(frozen=True)
class Drawing:
    """A graph plus vertex positions and per-edge bend lists.

    The polyline of edge e is ``[position[tail], *route[e], position[head]]``.
    """

    graph: DirectedAcyclicGraph
    position: Mapping[str, Point]
    route: Mapping[str, tuple[Point, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        pos = {}
        for v in self.graph.vertices:
            if v not in self.position:
                raise StructuralError(f"vertex {v!r} has no position", offending=v)
            p = self.position[v]
            pos[v] = p if isinstance(p, Point) else Point.of(*p)
        extra = set(self.position) - set(pos)
        if extra:
            v = min(extra)
            raise StructuralError(f"position given for unknown vertex {v!r}", offending=v)
        route = {}
        for e in self.graph.edges:
            bends = self.route.get(e.id, ())
            route[e.id] = tuple(b if isinstance(b, Point) else Point.of(*b) for b in bends)
        extra = set(self.route) - set(route)
        if extra:
            eid = min(extra)
            raise StructuralError(f"route given for unknown edge {eid!r}", offending=eid)
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "route", route)

    def polyline(self, eid: str) -> tuple[Point, ...]:
        e = self.graph.edge(eid)
        return (self.position[e.tail], *self.route[eid], self.position[e.head])

    def segments(self) -> Iterator[Segment]:
        for e in self.graph.edges:
            pl = self.polyline(e.id)
            for i in range(len(pl) - 1):
                yield Segment(e.id, i, pl[i], pl[i + 1])

    def bends(self) -> Iterator[tuple[str, int, Point]]:
        for e in self.graph.edges:
            for i, b in enumerate(self.route[e.id]):
                yield e.id, i, b

    def all_points(self) -> list[Point]:
        return list(self.position.values()) + [b for _, _, b in self.bends()]

    def bbox(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        pts = self.all_points()
        return (min(p.x for p in pts), max(p.x for p in pts), min(p.y for p in pts), max(p.y for p in pts))

    def replace(self, graph=None, position=None, route=None) -> "Drawing":
        return Drawing(
            graph if graph is not None else self.graph,
            position if position is not None else self.position,
            route if route is not None else self.route,
        )

    def restrict(self, graph: DirectedAcyclicGraph) -> "Drawing":
        """The sub-drawing induced by a subgraph with the same ids."""
        return Drawing(
            graph,
            {v: self.position[v] for v in graph.vertices},
            {e.id: self.route[e.id] for e in graph.edges},
        )


@dataclass(frozen=True)
class PlaneBox:
    x_min: Fraction
    x_max: Fraction
    y_min: Fraction
    y_max: Fraction

    def __post_init__(self) -> None:
        for name in ("x_min", "x_max", "y_min", "y_max"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise DomainError("plane box must have nonempty interior")


VIOLATION_CODES = {
    "vertex-overlap": "two distinct vertices occupy the same point",
    "bend-on-vertex": "a bend point coincides with a vertex point",
    "not-monotone": "y does not strictly decrease along an edge polyline",
    "vertex-on-edge": "a vertex point lies in the relative interior of a segment",
    "crossing": "two segments meet at a point they are not allowed to share",
    "overlap": "two segments overlap along a collinear piece of positive length",
    "outside-box": "a drawing point lies outside the plane box",
    "boundary-vertex-not-leaf": "a vertex on a horizontal box boundary is not a leaf",
    "vertex-on-vertical-boundary": "a vertex lies on a vertical box boundary",
}


@dataclass(frozen=True)
class Violation:
    code: str
    ids: tuple[str, ...]
    points: tuple[Point, ...]
    message: str

    def __post_init__(self) -> None:
        assert self.code in VIOLATION_CODES, self.code


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]


def _common_denominator(points) -> int:
    return math.lcm(1, *(c.denominator for p in points for c in p))


def _to_int(p: Point, den: int) -> Point:
    """Coordinates times ``den`` as plain ints; integer predicates are much faster than Fraction ones."""
    return Point(int(p.x * den), int(p.y * den))


def _from_int(p: Point, den: int) -> Point:
    return Point(Fraction(p.x) / den, Fraction(p.y) / den)


def _fmt(p: Point) -> str:
    return f"({p.x}, {p.y})"


def validate_drawing(drawing: Drawing) -> ValidationReport:
    """Check that a drawing is an upward planar drawing of its graph."""
    out: list[Violation] = []
    g = drawing.graph

    owner: dict[Point, str] = {}
    for v in g.vertices:
        p = drawing.position[v]
        if p in owner:
            out.append(Violation("vertex-overlap", (owner[p], v), (p,), f"vertices {owner[p]} and {v} both at {_fmt(p)}"))
        else:
            owner[p] = v

    for eid, i, b in drawing.bends():
        if b in owner:
            out.append(Violation("bend-on-vertex", (eid, owner[b]), (b,), f"bend {i} of {eid} sits on vertex {owner[b]}"))

    segs = list(drawing.segments())
    for s in segs:
        if not s.b.y < s.a.y:
            out.append(Violation("not-monotone", (s.edge,), (s.a, s.b),
                                 f"edge {s.edge} segment {s.index} goes from y={s.a.y} to y={s.b.y}"))

    den = _common_denominator(drawing.all_points())
    iseg = [(_to_int(s.a, den), _to_int(s.b, den)) for s in segs]
    ivert = sorted((_to_int(p, den), p, v) for p, v in owner.items())
    for s, (a, b) in zip(segs, iseg):
        x0, x1, y0, y1 = min(a.x, b.x), max(a.x, b.x), min(a.y, b.y), max(a.y, b.y)
        for q, p, v in ivert:
            if not (x0 <= q.x <= x1 and y0 <= q.y <= y1) or q == a or q == b:
                continue
            if orient(a, b, q) == 0:
                out.append(Violation("vertex-on-edge", (s.edge, v), (p,),
                                     f"vertex {v} lies on edge {s.edge} segment {s.index}"))

    vertex_points = {q for q, _, _ in ivert}
    boxes = [(min(a.x, b.x), max(a.x, b.x), min(a.y, b.y), max(a.y, b.y)) for a, b in iseg]
    reported: set[tuple[str, str]] = set()
    for i, s in enumerate(segs):
        bi = boxes[i]
        a, b = iseg[i]
        for j in range(i + 1, len(segs)):
            t = segs[j]
            bj = boxes[j]
            if bi[1] < bj[0] or bj[1] < bi[0] or bi[3] < bj[2] or bj[3] < bi[2]:
                continue
            key = (s.edge, t.edge)
            if key in reported:
                continue
            c, d = iseg[j]
            hit = segment_intersection(a, b, c, d)
            if hit is None:
                continue
            kind, where = hit
            if kind == "overlap":
                reported.add(key)
                where = (_from_int(where[0], den), _from_int(where[1], den))
                out.append(Violation("overlap", (s.edge, t.edge), where,
                                     f"edges {s.edge} and {t.edge} overlap from {_fmt(where[0])} to {_fmt(where[1])}"))
                continue
            q = where
            if s.edge == t.edge and t.index == s.index + 1 and q == b:
                continue
            if s.edge != t.edge and q in vertex_points and q in (a, b) and q in (c, d):
                continue
            reported.add(key)
            p = _from_int(q, den)
            out.append(Violation("crossing", (s.edge, t.edge), (p,),
                                 f"edges {s.edge} and {t.edge} meet at {_fmt(p)}"))
    return ValidationReport(tuple(out))


def require_valid(drawing: Drawing) -> None:
    report = validate_drawing(drawing)
    if not report.ok:
        first = report.violations[0]
        raise PreconditionError(f"invalid drawing: {first.code}: {first.message}", report)


def validate_progressive(drawing: Drawing, box: PlaneBox) -> ValidationReport:
    """Check the boxed condition for an already valid drawing."""
    require_valid(drawing)
    out: list[Violation] = []
    g = drawing.graph

    def inside(p: Point) -> bool:
        return box.x_min <= p.x <= box.x_max and box.y_min <= p.y <= box.y_max

    for v in g.vertices:
        p = drawing.position[v]
        if not inside(p):
            out.append(Violation("outside-box", (v,), (p,), f"vertex {v} at {_fmt(p)} is outside the box"))
            continue
        if p.x in (box.x_min, box.x_max):
            out.append(Violation("vertex-on-vertical-boundary", (v,), (p,), f"vertex {v} lies on a vertical boundary"))
        if p.y in (box.y_min, box.y_max) and g.degree(v) != 1:
            out.append(Violation("boundary-vertex-not-leaf", (v,), (p,),
                                 f"vertex {v} on a horizontal boundary has degree {g.degree(v)}"))
    for eid, i, b in drawing.bends():
        if not inside(b):
            out.append(Violation("outside-box", (eid,), (b,), f"bend {i} of {eid} at {_fmt(b)} is outside the box"))
    return ValidationReport(tuple(out))


def _clearance_features(drawing: Drawing):
    points: list[Point] = drawing.all_points()
    segs = [(s.a, s.b) for s in drawing.segments()]
    consecutive = set()
    for a, b in segs:
        consecutive.add((a, b))
        consecutive.add((b, a))
    return points, segs, consecutive


def min_clearance(drawing: Drawing):
    """Squared minimum distance between features that do not touch by incidence.

    Features are vertex points, bend points and segments. Excluded pairs are a
    segment with its own endpoints, two segments sharing an endpoint, and the
    two endpoints of one segment. Segment/segment distances are realised at an
    endpoint, so point/point and point/segment pairs suffice. Returns
    ``math.inf`` when no pair qualifies.
    """
    require_valid(drawing)
    points, segs, consecutive = _clearance_features(drawing)
    den = _common_denominator(points)
    ipoints = [_to_int(p, den) for p in points]
    iconsec = {(_to_int(a, den), _to_int(b, den)) for a, b in consecutive}
    isegs = [(_to_int(a, den), _to_int(b, den)) for a, b in segs]
    best = math.inf
    for i, p in enumerate(ipoints):
        for q in ipoints[i + 1:]:
            if (p, q) in iconsec:
                continue
            d = (p.x - q.x) ** 2 + (p.y - q.y) ** 2
            if d < best:
                best = d
    for p in ipoints:
        for a, b in isegs:
            if p == a or p == b:
                continue
            # the squared gap to the segment's bounding box is a cheap lower bound
            gx = max(min(a.x, b.x) - p.x, 0, p.x - max(a.x, b.x))
            gy = max(min(a.y, b.y) - p.y, 0, p.y - max(a.y, b.y))
            if gx * gx + gy * gy >= best:
                continue
            d = point_segment_dist2(p, a, b)
            if d < best:
                best = d
    return best if best == math.inf else Fraction(best) / (den * den)


def point_clearance(drawing: Drawing, p: Point):
    """Squared distance from p to the nearest feature not incident to p."""
    best = math.inf
    for q in drawing.all_points():
        if q == p:
            continue
        d = (p.x - q.x) ** 2 + (p.y - q.y) ** 2
        best = min(best, d)
    for s in drawing.segments():
        if p == s.a or p == s.b:
            continue
        best = min(best, point_segment_dist2(p, s.a, s.b))
    return best


def transform(drawing: Drawing, fn: Callable[[Point], Point]) -> Drawing:
    return drawing.replace(
        position={v: fn(p) for v, p in drawing.position.items()},
        route={e: tuple(fn(b) for b in bends) for e, bends in drawing.route.items()},
    )


def translate(drawing: Drawing, dx, dy) -> Drawing:
    dx, dy = to_fraction(dx), to_fraction(dy)
    return transform(drawing, lambda p: Point(p.x + dx, p.y + dy))


def scale_positive(drawing: Drawing, sx, sy) -> Drawing:
    sx, sy = to_fraction(sx), to_fraction(sy)
    if sx <= 0 or sy <= 0:
        raise DomainError(f"scale factors must be positive, got ({sx}, {sy})")
    return transform(drawing, lambda p: Point(p.x * sx, p.y * sy))


def mirror_x(drawing: Drawing) -> Drawing:
    return transform(drawing, lambda p: Point(-p.x, p.y))

"""Rotations, polarizations, faces and the canonical embedding signature.

Rotations are clockwise in y-up coordinates. With that reading a
polarization ``in = [h1..hk]``, ``out = [f1..fl]`` (both left to right)
corresponds to the cyclic order ``(h1, ..., hk, fl, ..., f1)``.

Half-edges are ``(edge_id, "+")`` for tail-to-head traversal and
``(edge_id, "-")`` for the reverse. A face is traced keeping it on the left,
so bounded faces run counterclockwise.
"""

from __future__ import annotations

import functools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InternalError, StructuralError
from .geometry import Drawing, Point, orient
from .graph import DirectedAcyclicGraph, VertexKind, classify_vertex

__all__ = [
    "Rotation",
    "Polarization",
    "Face",
    "ComponentSignature",
    "EmbeddingSignature",
    "HalfEdge",
    "extract_rotation",
    "extract_rotation_system",
    "check_bimodal",
    "rotation_to_polarization",
    "polarization_to_rotation",
    "extract_polarization",
    "trace_faces",
    "euler_counts",
    "locate_face",
    "signature",
    "canonical_cycle",
]

HalfEdge = tuple[str, str]
FORWARD, BACKWARD = "+", "-"


@dataclass(frozen=True)
class Rotation:
    vertex: str
    cycle: tuple[str, ...]

    def canonical(self) -> tuple[str, ...]:
        return canonical_cycle(self.cycle)

    def reversed(self) -> "Rotation":
        return Rotation(self.vertex, tuple(reversed(self.cycle)))

    def same_cycle(self, other: "Rotation") -> bool:
        return self.vertex == other.vertex and self.canonical() == other.canonical()


@dataclass(frozen=True)
class Polarization:
    vertex: str
    in_order: tuple[str, ...]
    out_order: tuple[str, ...]


def canonical_cycle(seq: Sequence) -> tuple:
    """Rotate a cyclic sequence to start at its smallest element."""
    if not seq:
        return ()
    i = min(range(len(seq)), key=lambda k: seq[k])
    return tuple(seq[i:]) + tuple(seq[:i])


# --- geometric direction comparisons -------------------------------------


def _directions(drawing: Drawing, eid: str, v: str) -> list[tuple[Fraction, Fraction]]:
    """Successive segment directions of edge eid read away from vertex v."""
    pl = drawing.polyline(eid)
    if drawing.graph.edge(eid).head == v:
        pl = pl[::-1]
    return [(pl[i + 1].x - pl[i].x, pl[i + 1].y - pl[i].y) for i in range(len(pl) - 1)]


def _cross(a, b) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _half(d) -> int:
    # 0: from straight up clockwise to just before straight down; 1: the rest
    return 0 if d[0] > 0 or (d[0] == 0 and d[1] > 0) else 1


def _cmp_clockwise(a, b) -> int:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return -1 if ha < hb else 1
    c = _cross(a, b)
    return -1 if c < 0 else (1 if c > 0 else 0)


def _cmp_sequences(cmp, da: list, db: list) -> int:
    for a, b in zip(da, db):
        r = cmp(a, b)
        if r:
            return r
    return (len(da) > len(db)) - (len(da) < len(db))


def _sorted_edges(drawing: Drawing, v: str, edges, cmp) -> list[str]:
    dirs = {e: _directions(drawing, e, v) for e in edges}

    def key(e1: str, e2: str) -> int:
        r = _cmp_sequences(cmp, dirs[e1], dirs[e2])
        if r:
            return r
        return (e1 > e2) - (e1 < e2)

    return sorted(edges, key=functools.cmp_to_key(key))


def extract_rotation(drawing: Drawing, v: str) -> Rotation:
    """Incident edges of v in clockwise order of their initial directions."""
    edges = drawing.graph.incident(v)
    return Rotation(v, tuple(_sorted_edges(drawing, v, edges, _cmp_clockwise)))


def extract_rotation_system(drawing: Drawing) -> dict[str, Rotation]:
    g = drawing.graph
    system = {v: extract_rotation(drawing, v) for v in g.vertices}
    for v, rot in system.items():
        if not check_bimodal(rot, g):
            raise InternalError(f"extracted rotation at {v!r} is not bimodal: {rot.cycle}")
    return system


def _cmp_left_to_right_up(a, b) -> int:
    # upward directions, leftmost first: b is to the right of a when clockwise of it
    c = _cross(a, b)
    return -1 if c < 0 else (1 if c > 0 else 0)


def _cmp_left_to_right_down(a, b) -> int:
    c = _cross(a, b)
    return -1 if c > 0 else (1 if c < 0 else 0)


def extract_polarization(drawing: Drawing) -> dict[str, Polarization]:
    """Left-to-right orders of incoming and outgoing edges at every vertex."""
    g = drawing.graph
    out = {}
    for v in g.vertices:
        ins = _sorted_edges(drawing, v, g.in_edges(v), _cmp_left_to_right_up)
        outs = _sorted_edges(drawing, v, g.out_edges(v), _cmp_left_to_right_down)
        out[v] = Polarization(v, tuple(ins), tuple(outs))
    return out


# --- combinatorial conversions -------------------------------------------


def _check_incidence(rotation: Rotation, graph: DirectedAcyclicGraph) -> None:
    expected = sorted(graph.incident(rotation.vertex))
    if sorted(rotation.cycle) != expected:
        raise StructuralError(
            f"rotation at {rotation.vertex!r} lists {sorted(rotation.cycle)}, incident edges are {expected}",
            offending=rotation.vertex,
        )


def _in_flags(rotation: Rotation, graph: DirectedAcyclicGraph) -> list[bool]:
    return [graph.edge(e).head == rotation.vertex for e in rotation.cycle]


def check_bimodal(rotation: Rotation, graph: DirectedAcyclicGraph) -> bool:
    """True iff incoming edges form one cyclic interval (and outgoing the other)."""
    _check_incidence(rotation, graph)
    flags = _in_flags(rotation, graph)
    n = len(flags)
    changes = sum(flags[i] != flags[(i + 1) % n] for i in range(n))
    return changes <= 2


def rotation_to_polarization(rotation: Rotation, graph: DirectedAcyclicGraph) -> Polarization:
    v = rotation.vertex
    _check_incidence(rotation, graph)
    cls = classify_vertex(graph, v)
    if cls.kind is not VertexKind.PROCESSIVE and not cls.is_leaf:
        raise DomainError(
            f"vertex {v!r} is a {cls.kind.value} of degree {graph.degree(v)}: "
            "no canonical way to define a polarization from its rotation"
        )
    if not check_bimodal(rotation, graph):
        raise DomainError(f"rotation at {v!r} is not bimodal")
    cyc = list(rotation.cycle)
    flags = _in_flags(rotation, graph)
    if cls.is_leaf:
        return Polarization(v, tuple(cyc) if flags[0] else (), () if flags[0] else tuple(cyc))
    n = len(cyc)
    # start at the in-edge that follows an out-edge
    start = next(i for i in range(n) if flags[i] and not flags[i - 1])
    cyc = cyc[start:] + cyc[:start]
    k = sum(flags)
    return Polarization(v, tuple(cyc[:k]), tuple(reversed(cyc[k:])))


def polarization_to_rotation(polarization: Polarization, graph: DirectedAcyclicGraph | None = None) -> Rotation:
    if graph is not None:
        v = polarization.vertex
        if sorted(polarization.in_order) != sorted(graph.in_edges(v)) or sorted(polarization.out_order) != sorted(graph.out_edges(v)):
            raise StructuralError(f"polarization at {v!r} does not match its incidence", offending=v)
    return Rotation(polarization.vertex, tuple(polarization.in_order) + tuple(reversed(polarization.out_order)))


# --- faces ----------------------------------------------------------------


@dataclass(frozen=True)
class Face:
    walk: tuple[HalfEdge, ...]
    is_outer: bool = False

    def key(self) -> tuple[HalfEdge, ...]:
        return canonical_cycle(self.walk)


def _next_half_edge(h: HalfEdge, rotations: Mapping[str, Rotation], graph: DirectedAcyclicGraph,
                    index: Mapping[str, Mapping[str, int]]) -> HalfEdge:
    eid, d = h
    e = graph.edge(eid)
    v = e.head if d == FORWARD else e.tail
    cyc = rotations[v].cycle
    nxt = cyc[(index[v][eid] + 1) % len(cyc)]
    return (nxt, FORWARD if graph.edge(nxt).tail == v else BACKWARD)


def _trace_all(rotations: Mapping[str, Rotation], graph: DirectedAcyclicGraph) -> list[tuple[HalfEdge, ...]]:
    index = {v: {e: i for i, e in enumerate(r.cycle)} for v, r in rotations.items()}
    seen: set[HalfEdge] = set()
    walks = []
    for e in graph.edges:
        for d in (FORWARD, BACKWARD):
            start = (e.id, d)
            if start in seen:
                continue
            walk = []
            h = start
            while h not in seen:
                seen.add(h)
                walk.append(h)
                h = _next_half_edge(h, rotations, graph, index)
            if h != start:
                raise InternalError("face tracing did not close up; rotation system is inconsistent")
            walks.append(tuple(walk))
    return walks


def trace_faces(rotations: Mapping[str, Rotation], graph: DirectedAcyclicGraph,
                drawing: Drawing | None = None) -> list[list[Face]]:
    """Faces of each connected component (components ordered by smallest vertex).

    Outer faces are flagged only when the drawing is supplied, since the
    rotation system alone cannot tell which walk bounds the unbounded region.
    """
    iso = graph.isolated_vertices()
    if iso:
        raise DomainError(f"isolated vertex {iso[0]!r}: virtualize isolated vertices before tracing faces")
    if set(rotations) != set(graph.vertices):
        raise StructuralError("rotation system must cover every vertex")
    for r in rotations.values():
        _check_incidence(r, graph)
    walks = _trace_all(rotations, graph)
    comps = graph.components()
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    grouped: list[list[tuple[HalfEdge, ...]]] = [[] for _ in comps]
    for w in walks:
        grouped[comp_of[graph.edge(w[0][0]).tail]].append(w)
    result = []
    for ci, ws in enumerate(grouped):
        outer = None
        if drawing is not None:
            outer = _outer_half_edge(drawing, _component_segments(drawing, comps[ci]))
        faces = [Face(w, outer is not None and outer in w) for w in ws]
        result.append(sorted(faces, key=Face.key))
    return result


def euler_counts(rotations: Mapping[str, Rotation], graph: DirectedAcyclicGraph, drawing: Drawing) -> dict[str, int]:
    """V, E, bounded face count F_b, merged face count F = F_b + 1, and components C.

    All component outer faces are one unbounded region, so the identity to
    check is ``V - E + F == 1 + C``.
    """
    faces = trace_faces(rotations, graph, drawing)
    bounded = sum(1 for comp in faces for f in comp if not f.is_outer)
    outers = sum(1 for comp in faces for f in comp if f.is_outer)
    if outers != len(faces):
        raise InternalError(f"expected one outer face per component, found {outers} for {len(faces)}")
    return {"V": len(graph.vertices), "E": len(graph.edges), "F_bounded": bounded,
            "F": bounded + 1, "C": len(faces)}


# --- ray casting ----------------------------------------------------------


def _component_segments(drawing: Drawing, vertices: Sequence[str]):
    vs = set(vertices)
    segs = []
    for e in drawing.graph.edges:
        if e.tail in vs:
            pl = drawing.polyline(e.id)
            for i in range(len(pl) - 1):
                segs.append((e.id, pl[i], pl[i + 1]))
    return segs


def _cast(p: Point, segs) -> HalfEdge:
    """Half-edge whose left face contains p, found by shooting a ray from p into a segment.

    The ray aims at a point k/(n+2) along some segment not on a line through
    p. Each of the n segment endpoints rules out at most one k, so some k in
    1..n+1 gives a ray that passes through no endpoint.
    """
    points = {a for _, a, _ in segs} | {b for _, _, b in segs}
    n = len(points)
    for _, a, b in segs:
        if orient(p, a, b) == 0:
            continue
        for k in range(1, n + 2):
            t = Fraction(k, n + 2)
            q = Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
            d = (q.x - p.x, q.y - p.y)
            if any(orient(p, q, w) == 0 and (w.x - p.x) * d[0] + (w.y - p.y) * d[1] > 0 for w in points):
                continue
            best = None
            for eid, a2, b2 in segs:
                if orient(p, q, a2) == orient(p, q, b2):
                    continue
                seg = (b2.x - a2.x, b2.y - a2.y)
                s = _cross((a2.x - p.x, a2.y - p.y), seg) / _cross(d, seg)
                if s > 0 and (best is None or s < best[0]):
                    best = (s, eid, a2, b2)
            _, eid, a2, b2 = best
            return (eid, FORWARD if orient(a2, b2, p) > 0 else BACKWARD)
    # every segment lies on one line through p: a straight path, whose only face is the outer one
    return (segs[0][0], FORWARD)


def _outer_half_edge(drawing: Drawing, segs) -> HalfEdge:
    xs = [a.x for _, a, _ in segs] + [b.x for _, _, b in segs]
    ys = [a.y for _, a, _ in segs] + [b.y for _, _, b in segs]
    return _cast(Point(min(xs) - 1, min(ys) - 1), segs)


def locate_face(drawing: Drawing, component: Sequence[str], p: Point) -> HalfEdge:
    """A half-edge of the component whose left face contains point p (p off the component)."""
    return _cast(p, _component_segments(drawing, component))


def _walk_area2(drawing: Drawing, walk: Sequence[HalfEdge]) -> Fraction:
    pts: list[Point] = []
    for eid, d in walk:
        pl = drawing.polyline(eid)
        if d == BACKWARD:
            pl = pl[::-1]
        pts.extend(pl[:-1])
    n = len(pts)
    return sum((pts[i].x * pts[(i + 1) % n].y - pts[(i + 1) % n].x * pts[i].y for i in range(n)), Fraction(0))


# --- signature -------------------------------------------------------------


@dataclass(frozen=True)
class ComponentSignature:
    key: str
    rotations: tuple[tuple[str, tuple[str, ...]], ...]
    outer_face: tuple[HalfEdge, ...]
    parent: tuple[str, tuple[HalfEdge, ...]] | None


@dataclass(frozen=True)
class EmbeddingSignature:
    components: tuple[ComponentSignature, ...]


def signature(drawing: Drawing) -> EmbeddingSignature:
    """Coordinate-free canonical record of a drawing's plane embedding."""
    g = drawing.graph
    iso = g.isolated_vertices()
    if iso:
        raise DomainError(f"isolated vertex {iso[0]!r}: call virtualize_isolated before computing a signature")
    rotations = extract_rotation_system(drawing)
    comps = g.components()
    walks = _trace_all(rotations, g)
    face_of: dict[HalfEdge, tuple[HalfEdge, ...]] = {}
    for w in walks:
        for h in w:
            face_of[h] = w
    segs = [_component_segments(drawing, c) for c in comps]
    outer = [face_of[_outer_half_edge(drawing, s)] for s in segs]
    boxes = []
    for s in segs:
        xs = [a.x for _, a, _ in s] + [b.x for _, _, b in s]
        ys = [a.y for _, a, _ in s] + [b.y for _, _, b in s]
        boxes.append((min(xs), max(xs), min(ys), max(ys)))

    records = []
    for ci, comp in enumerate(comps):
        anchor_v = min(comp, key=lambda v: (-drawing.position[v].y, v))
        p = drawing.position[anchor_v]
        parent = None
        best_area = None
        for cj, other in enumerate(comps):
            if cj == ci:
                continue
            x0, x1, y0, y1 = boxes[cj]
            if not (x0 < p.x < x1 and y0 < p.y < y1):
                continue
            walk = face_of[_cast(p, segs[cj])]
            if walk is outer[cj]:
                continue
            area = _walk_area2(drawing, walk)
            if best_area is None or area < best_area:
                best_area = area
                parent = (other[0], canonical_cycle(walk))
        records.append(ComponentSignature(
            key=comp[0],
            rotations=tuple((v, rotations[v].canonical()) for v in comp),
            outer_face=canonical_cycle(outer[ci]),
            parent=parent,
        ))
    return EmbeddingSignature(tuple(records))

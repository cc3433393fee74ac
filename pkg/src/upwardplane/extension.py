"""Geometric NPP-extension: vertical stubs on non-leaf sources and sinks.

Stub and virtual-edge lengths come from the local clearance of the vertex,
so the extended drawing is valid without any global assumption about what
lies above or below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .embedding import Polarization, extract_rotation_system, rotation_to_polarization
from .errors import DomainError, InternalError
from .geometry import Drawing, Point, point_clearance, require_valid, sqrt_lower, to_fraction, validate_drawing
from .graph import DirectedAcyclicGraph, ExtensionMapping, VirtualEntry, np_extend, np_restrict, virtualize_isolated

__all__ = [
    "ExtendedDrawing",
    "npp_extend",
    "npp_extend_auto",
    "npp_restrict",
    "virtualize_drawing",
    "devirtualize_drawing",
    "polarization_via_npp",
]


@dataclass(frozen=True)
class ExtendedDrawing:
    drawing: Drawing
    mapping: ExtensionMapping
    stub_scale: Fraction
    virtual: dict[str, VirtualEntry] = field(default_factory=dict)


def _clearance_length(drawing: Drawing, p: Point) -> Fraction:
    d2 = point_clearance(drawing, p)
    if d2 == math.inf:
        return Fraction(1)
    return sqrt_lower(d2)


def npp_extend(drawing: Drawing, stub_scale=Fraction(1, 2)) -> ExtendedDrawing:
    """Attach a vertical input stub above each non-leaf source and an output stub below each non-leaf sink.

    The stub at vertex s has length ``stub_scale * r`` where r is a decimal
    lower bound on the distance from s to the nearest non-incident feature
    (1 when there is none). A source directly below a non-leaf sink shares
    the vertical gap with it, so r is additionally capped at half that gap.
    """
    stub_scale = to_fraction(stub_scale)
    if not 0 < stub_scale < 1:
        raise DomainError(f"stub_scale must lie in (0, 1), got {stub_scale}")
    require_valid(drawing)
    graph, mapping = np_extend(drawing.graph)

    pos = drawing.position
    entries = mapping.entries
    ups = {v: pos[v] for v, s in entries.items() if s.direction == "input"}
    downs = {v: pos[v] for v, s in entries.items() if s.direction == "output"}

    position = dict(pos)
    for v, stub in entries.items():
        p = pos[v]
        r = _clearance_length(drawing, p)
        if stub.direction == "input":
            for q in downs.values():
                if q.x == p.x and q.y > p.y:
                    r = min(r, (q.y - p.y) / 2)
            position[stub.leaf] = Point(p.x, p.y + stub_scale * r)
        else:
            for q in ups.values():
                if q.x == p.x and q.y < p.y:
                    r = min(r, (p.y - q.y) / 2)
            position[stub.leaf] = Point(p.x, p.y - stub_scale * r)

    extended = Drawing(graph, position, drawing.route)
    report = validate_drawing(extended)
    if not report.ok:
        raise InternalError(f"NPP-extension produced an invalid drawing: {report.violations[0].message}")
    return ExtendedDrawing(extended, mapping, stub_scale)


def npp_restrict(extended: ExtendedDrawing) -> Drawing:
    """Delete the stubs (and undo virtualization) to recover the input drawing."""
    d = extended.drawing.restrict(np_restrict(extended.drawing.graph, extended.mapping))
    if extended.virtual:
        d = devirtualize_drawing(d, extended.virtual)
    return d


def virtualize_drawing(drawing: Drawing) -> tuple[Drawing, dict[str, VirtualEntry]]:
    """Replace every isolated vertex by a short vertical edge centred on it.

    The half-length is half a decimal lower bound on the distance to the
    nearest other feature (1/2 when there is none), so two virtual edges can
    never touch.
    """
    require_valid(drawing)
    graph, mapping = virtualize_isolated(drawing.graph)
    if not mapping:
        return drawing, {}
    position = {v: p for v, p in drawing.position.items() if v not in mapping}
    for v, m in mapping.items():
        p = drawing.position[v]
        h = _clearance_length(drawing, p) / 2
        position[m.top] = Point(p.x, p.y + h)
        position[m.bottom] = Point(p.x, p.y - h)
    out = Drawing(graph, position, drawing.route)
    report = validate_drawing(out)
    if not report.ok:
        raise InternalError(f"virtualization produced an invalid drawing: {report.violations[0].message}")
    return out, mapping


def devirtualize_drawing(drawing: Drawing, mapping: dict[str, VirtualEntry]) -> Drawing:
    g = drawing.graph
    drop_v = {x for m in mapping.values() for x in (m.top, m.bottom)}
    drop_e = {m.edge for m in mapping.values()}
    graph = DirectedAcyclicGraph(
        tuple(v for v in g.vertices if v not in drop_v) + tuple(mapping),
        tuple(e for e in g.edges if e.id not in drop_e),
    )
    position = {v: p for v, p in drawing.position.items() if v not in drop_v}
    for v, m in mapping.items():
        top, bot = drawing.position[m.top], drawing.position[m.bottom]
        position[v] = Point((top.x + bot.x) / 2, (top.y + bot.y) / 2)
    return Drawing(graph, position, {e: b for e, b in drawing.route.items() if e not in drop_e})


def npp_extend_auto(drawing: Drawing, stub_scale=Fraction(1, 2)) -> ExtendedDrawing:
    """Virtualize isolated vertices, then NPP-extend. Both mappings are kept."""
    virt, vmap = virtualize_drawing(drawing)
    ext = npp_extend(virt, stub_scale)
    return ExtendedDrawing(ext.drawing, ext.mapping, ext.stub_scale, vmap)


def polarization_via_npp(drawing: Drawing, stub_scale=Fraction(1, 2), auto_virtualize: bool = False) -> dict[str, Polarization]:
    """Polarization structure read off the rotations of the NPP-extension.

    Every original vertex is processive or a leaf in the extension, so its
    rotation converts to a polarization; stub edges are then dropped. With
    ``auto_virtualize`` isolated vertices are allowed and get the empty
    polarization.
    """
    g = drawing.graph
    if auto_virtualize:
        ext = npp_extend_auto(drawing, stub_scale)
    else:
        if g.isolated_vertices():
            raise DomainError(f"isolated vertex {g.isolated_vertices()[0]!r}: virtualize first")
        ext = npp_extend(drawing, stub_scale)
    xg = ext.drawing.graph
    rotations = extract_rotation_system(ext.drawing)
    stubs = {s.edge for s in ext.mapping.entries.values()}
    out = {}
    for v in g.vertices:
        if v in ext.virtual:
            out[v] = Polarization(v, (), ())
            continue
        pol = rotation_to_polarization(rotations[v], xg)
        out[v] = Polarization(
            v,
            tuple(e for e in pol.in_order if e not in stubs),
            tuple(e for e in pol.out_order if e not in stubs),
        )
    return out

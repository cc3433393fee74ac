"""JSON document formats: drawings, polarizations, reports and chains.

Coordinates are written as exact decimal strings. Values without a finite
decimal expansion (e.g. a stub of length 1/3) are written as ``"p/q"``;
both forms parse exactly. The canonical serializer sorts keys and ids and
uses two-space indentation, so a canonical document round-trips byte for
byte.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .canonical import FORMAT_VERSION, signature_document
from .embedding import EmbeddingSignature, Polarization
from .equivalence import ChainCheck, DeformationChain, EquivalenceReport, PerturbStep
from .errors import ParseError, StructuralError
from .extension import ExtendedDrawing
from .geometry import Drawing, Point, ValidationReport
from .graph import DirectedAcyclicGraph, Edge, ExtensionMapping, StubEntry, VirtualEntry

__all__ = [
    "format_number",
    "parse_number",
    "drawing_to_obj",
    "drawing_from_obj",
    "parse_drawing",
    "serialize_drawing",
    "parse_extended",
    "serialize_extended",
    "dumps",
    "report_to_obj",
    "polarization_to_obj",
    "equivalence_to_obj",
    "chain_to_obj",
    "parse_chain",
    "serialize_chain",
    "signature_document",
]


def format_number(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    k = max(twos, fives)
    scaled = abs(q.numerator) * 10**k // q.denominator
    digits = str(scaled).rjust(k + 1, "0")
    text = (digits[:-k] + "." + digits[-k:]).rstrip("0").rstrip(".")
    return ("-" if q < 0 else "") + text


def parse_number(text, where: str) -> Fraction:
    if not isinstance(text, str):
        raise ParseError(f"{where}: coordinates must be decimal strings, got {type(text).__name__}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{where}: not an exact number: {text!r}") from None


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None


def _pt(p: Point) -> list[str]:
    return [format_number(p.x), format_number(p.y)]


def drawing_to_obj(d: Drawing) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "vertices": [{"id": v, "x": format_number(d.position[v].x), "y": format_number(d.position[v].y)}
                     for v in d.graph.vertices],
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head, "bends": [_pt(b) for b in d.route[e.id]]}
                  for e in d.graph.edges],
    }


def _require(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise ParseError(f"{where}: field {key!r} has the wrong type")
    return val


def drawing_from_obj(obj) -> Drawing:
    if not isinstance(obj, dict):
        raise ParseError("drawing document must be a JSON object")
    version = obj.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {version!r}")
    vertices = _require(obj, "vertices", list, "document")
    edges = _require(obj, "edges", list, "document")
    position: dict[str, Point] = {}
    for i, v in enumerate(vertices):
        where = f"vertices[{i}]"
        vid = _require(v, "id", str, where)
        if vid in position:
            raise StructuralError(f"duplicate vertex id {vid!r}", offending=vid)
        position[vid] = Point(parse_number(_require(v, "x", str, where), where),
                              parse_number(_require(v, "y", str, where), where))
    edge_list = []
    route = {}
    for i, e in enumerate(edges):
        where = f"edges[{i}]"
        eid = _require(e, "id", str, where)
        if eid in route:
            raise StructuralError(f"duplicate edge id {eid!r}", offending=eid)
        bends = []
        for j, b in enumerate(e.get("bends", [])):
            if not isinstance(b, list) or len(b) != 2:
                raise ParseError(f"{where}.bends[{j}]: expected an [x, y] pair")
            bends.append(Point(parse_number(b[0], where), parse_number(b[1], where)))
        route[eid] = tuple(bends)
        edge_list.append(Edge(eid, _require(e, "tail", str, where), _require(e, "head", str, where)))
    graph = DirectedAcyclicGraph(tuple(position), tuple(edge_list))
    return Drawing(graph, position, route)


def parse_drawing(text: str) -> Drawing:
    return drawing_from_obj(_loads(text))


def serialize_drawing(d: Drawing) -> str:
    return dumps(drawing_to_obj(d))


def extended_to_obj(ext: ExtendedDrawing) -> dict:
    obj = drawing_to_obj(ext.drawing)
    obj["extension_mapping"] = [
        {"vertex": v, "leaf": s.leaf, "edge": s.edge, "direction": s.direction}
        for v, s in sorted(ext.mapping.entries.items())
    ]
    obj["stub_scale"] = format_number(ext.stub_scale)
    if ext.virtual:
        obj["virtualization_mapping"] = virtualization_to_obj(ext.virtual)
    return obj


def virtualization_to_obj(mapping: dict[str, VirtualEntry]) -> list:
    return [{"vertex": v, "top": m.top, "bottom": m.bottom, "edge": m.edge} for v, m in sorted(mapping.items())]


def serialize_extended(ext: ExtendedDrawing) -> str:
    return dumps(extended_to_obj(ext))


def parse_extended(text: str) -> ExtendedDrawing:
    obj = _loads(text)
    d = drawing_from_obj(obj)
    entries = {}
    for m in obj.get("extension_mapping", []):
        entries[m["vertex"]] = StubEntry(m["leaf"], m["edge"], m["direction"])
    virtual = {m["vertex"]: VirtualEntry(m["top"], m["bottom"], m["edge"]) for m in obj.get("virtualization_mapping", [])}
    scale = parse_number(obj.get("stub_scale", "1/2"), "stub_scale")
    return ExtendedDrawing(d, ExtensionMapping(entries), scale, virtual)


def report_to_obj(report: ValidationReport) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "ok": report.ok,
        "violations": [
            {"code": v.code, "ids": list(v.ids), "points": [_pt(p) for p in v.points], "message": v.message}
            for v in report.violations
        ],
    }


def polarization_to_obj(pols: dict[str, Polarization]) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "polarization": {v: {"in": list(p.in_order), "out": list(p.out_order)} for v, p in sorted(pols.items())},
    }


def equivalence_to_obj(report: EquivalenceReport) -> dict:
    return {"format_version": FORMAT_VERSION, "verdict": report.verdict.value, "evidence": report.evidence}


def chain_to_obj(chain: DeformationChain) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "frames": [drawing_to_obj(d) for d in chain.frames],
        "steps": [
            {"move": s.move, "max_displacement2": format_number(s.max_displacement2), "fallback": s.fallback}
            for s in chain.steps
        ],
    }


def serialize_chain(chain: DeformationChain) -> str:
    return dumps(chain_to_obj(chain))


def parse_chain(text: str) -> DeformationChain:
    obj = _loads(text)
    frames = _require(obj, "frames", list, "chain")
    drawings = tuple(drawing_from_obj(f) for f in frames)
    steps = []
    for i, s in enumerate(obj.get("steps", [])):
        if i + 1 >= len(drawings):
            break
        steps.append(PerturbStep(drawings[i + 1], s.get("move", "unknown"),
                                 parse_number(s.get("max_displacement2", "0"), f"steps[{i}]"),
                                 bool(s.get("fallback", False))))
    return DeformationChain(drawings, tuple(steps))


def chain_check_to_obj(check: ChainCheck) -> dict:
    return {"format_version": FORMAT_VERSION, "ok": check.ok, "first_failure": check.first_failure,
            "reason": check.reason}

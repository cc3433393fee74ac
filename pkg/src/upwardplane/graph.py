"""Labeled acyclic directed multigraphs, vertex classification and NP-extension.

Vertex ids and edge ids live in separate namespaces. Both are nonempty
strings; every ordering in this package is plain string ordering so results
do not depend on insertion order.
"""

from __future__ import annotations

import heapq
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum

from .errors import CycleError, DomainError, StructuralError

__all__ = [
    "Edge",
    "DirectedAcyclicGraph",
    "VertexKind",
    "VertexClass",
    "AcyclicityResult",
    "StubEntry",
    "ExtensionMapping",
    "VirtualEntry",
    "check_acyclic",
    "classify_vertex",
    "is_processive_graph",
    "np_extend",
    "np_restrict",
    "virtualize_isolated",
]


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    tail: str
    head: str


def _check_structure(vertices: Iterable[str], edges: Iterable[Edge]) -> tuple[tuple[str, ...], tuple[Edge, ...]]:
    seen_v: set[str] = set()
    for v in vertices:
        if not isinstance(v, str) or not v:
            raise StructuralError(f"vertex id must be a nonempty string, got {v!r}", offending=str(v))
        if v in seen_v:
            raise StructuralError(f"duplicate vertex id {v!r}", offending=v)
        seen_v.add(v)
    seen_e: set[str] = set()
    edge_list = []
    for e in edges:
        if not isinstance(e.id, str) or not e.id:
            raise StructuralError(f"edge id must be a nonempty string, got {e.id!r}", offending=str(e.id))
        if e.id in seen_e:
            raise StructuralError(f"duplicate edge id {e.id!r}", offending=e.id)
        seen_e.add(e.id)
        for end in (e.tail, e.head):
            if end not in seen_v:
                raise StructuralError(f"edge {e.id!r} references unknown vertex {end!r}", offending=end)
        if e.tail == e.head:
            raise StructuralError(f"edge {e.id!r} is a self-loop at {e.tail!r}", offending=e.id)
        edge_list.append(e)
    return tuple(sorted(seen_v)), tuple(sorted(edge_list, key=lambda e: e.id))


@dataclass(frozen=True)
class AcyclicityResult:
    order: tuple[str, ...] | None = None
    cycle: tuple[str, ...] | None = None

    @property
    def acyclic(self) -> bool:
        return self.cycle is None


def check_acyclic(vertices: Iterable[str], edges: Iterable[Edge]) -> AcyclicityResult:
    """Topologically sort, or return a directed cycle as a list of edge ids.

    Raises StructuralError on duplicate or dangling ids. Self-loops are
    reported as one-edge cycles rather than structural errors here.
    """
    vertices = list(vertices)
    edges = list(edges)
    seen = set()
    for v in vertices:
        if v in seen or not isinstance(v, str) or not v:
            raise StructuralError(f"bad or duplicate vertex id {v!r}", offending=str(v))
        seen.add(v)
    ids = set()
    out: dict[str, list[Edge]] = {v: [] for v in vertices}
    indeg = {v: 0 for v in vertices}
    for e in edges:
        if e.id in ids or not isinstance(e.id, str) or not e.id:
            raise StructuralError(f"bad or duplicate edge id {e.id!r}", offending=str(e.id))
        ids.add(e.id)
        for end in (e.tail, e.head):
            if end not in seen:
                raise StructuralError(f"edge {e.id!r} references unknown vertex {end!r}", offending=end)
        out[e.tail].append(e)
        indeg[e.head] += 1
    for lst in out.values():
        lst.sort(key=lambda e: e.id)

    heap = [v for v in vertices if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for e in out[v]:
            indeg[e.head] -= 1
            if indeg[e.head] == 0:
                heapq.heappush(heap, e.head)
    if len(order) == len(vertices):
        return AcyclicityResult(order=tuple(order))
    return AcyclicityResult(cycle=tuple(_find_cycle(sorted(vertices), out)))


def _find_cycle(vertices: list[str], out: Mapping[str, list[Edge]]) -> list[str]:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in vertices}
    for root in vertices:
        if color[root] != WHITE:
            continue
        # iterative DFS; path holds the edges leading to the current vertex
        path: list[Edge] = []
        stack = [(root, iter(out[root]))]
        color[root] = GRAY
        while stack:
            v, it = stack[-1]
            e = next(it, None)
            if e is None:
                color[v] = BLACK
                stack.pop()
                if path:
                    path.pop()
                continue
            w = e.head
            if color[w] == GRAY:
                # cycle: from w along path to v, then e
                start = 0
                verts = [s[0] for s in stack]
                start = verts.index(w)
                return [p.id for p in path[start:]] + [e.id]
            if color[w] == WHITE:
                color[w] = GRAY
                path.append(e)
                stack.append((w, iter(out[w])))
    raise AssertionError("no cycle found in a graph that failed topological sort")


@dataclass(frozen=True)
class DirectedAcyclicGraph:
    """Immutable labeled DAG. Vertices and edges are stored sorted by id."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    _edge_map: dict = field(init=False, repr=False, compare=False, hash=False)
    _in: dict = field(init=False, repr=False, compare=False, hash=False)
    _out: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        vertices, edges = _check_structure(self.vertices, self.edges)
        result = check_acyclic(vertices, edges)
        if not result.acyclic:
            raise CycleError(list(result.cycle))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        ins: dict[str, list[str]] = {v: [] for v in vertices}
        outs: dict[str, list[str]] = {v: [] for v in vertices}
        for e in edges:
            outs[e.tail].append(e.id)
            ins[e.head].append(e.id)
        object.__setattr__(self, "_edge_map", {e.id: e for e in edges})
        object.__setattr__(self, "_in", {v: tuple(x) for v, x in ins.items()})
        object.__setattr__(self, "_out", {v: tuple(x) for v, x in outs.items()})

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, str] | Edge]) -> "DirectedAcyclicGraph":
        """Convenience constructor taking ``(id, tail, head)`` triples."""
        es = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
        return cls(tuple(vertices), tuple(es))

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge_map[eid]
        except KeyError:
            raise StructuralError(f"unknown edge {eid!r}", offending=eid) from None

    def has_vertex(self, v: str) -> bool:
        return v in self._in

    def has_edge(self, eid: str) -> bool:
        return eid in self._edge_map

    def _require(self, v: str) -> None:
        if v not in self._in:
            raise StructuralError(f"unknown vertex {v!r}", offending=v)

    def in_edges(self, v: str) -> tuple[str, ...]:
        self._require(v)
        return self._in[v]

    def out_edges(self, v: str) -> tuple[str, ...]:
        self._require(v)
        return self._out[v]

    def incident(self, v: str) -> tuple[str, ...]:
        return tuple(sorted(self.in_edges(v) + self.out_edges(v)))

    def degree(self, v: str) -> int:
        return len(self.in_edges(v)) + len(self.out_edges(v))

    def other_end(self, eid: str, v: str) -> str:
        e = self.edge(eid)
        return e.head if e.tail == v else e.tail

    def isolated_vertices(self) -> list[str]:
        return [v for v in self.vertices if not self._in[v] and not self._out[v]]

    def topological_order(self) -> tuple[str, ...]:
        return check_acyclic(self.vertices, self.edges).order

    def components(self) -> list[tuple[str, ...]]:
        """Weakly connected components, each sorted, listed by smallest vertex."""
        parent = {v: v for v in self.vertices}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            a, b = find(e.tail), find(e.head)
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: dict[str, list[str]] = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return sorted(tuple(sorted(g)) for g in groups.values())

    def without(self, vertices: Iterable[str] = (), edges: Iterable[str] = ()) -> "DirectedAcyclicGraph":
        drop_v = set(vertices)
        drop_e = set(edges)
        return DirectedAcyclicGraph(
            tuple(v for v in self.vertices if v not in drop_v),
            tuple(e for e in self.edges if e.id not in drop_e),
        )


class VertexKind(str, Enum):
    SOURCE = "source"
    SINK = "sink"
    PROCESSIVE = "processive"
    ISOLATED = "isolated"


@dataclass(frozen=True)
class VertexClass:
    kind: VertexKind
    is_leaf: bool


def classify_vertex(graph: DirectedAcyclicGraph, v: str) -> VertexClass:
    ins, outs = graph.in_edges(v), graph.out_edges(v)
    if ins and outs:
        kind = VertexKind.PROCESSIVE
    elif outs:
        kind = VertexKind.SOURCE
    elif ins:
        kind = VertexKind.SINK
    else:
        kind = VertexKind.ISOLATED
    return VertexClass(kind, len(ins) + len(outs) == 1)


def is_processive_graph(graph: DirectedAcyclicGraph) -> tuple[bool, list[str]]:
    """Whether every source and sink is a leaf; returns ``(ok, violators)``."""
    if not graph.vertices:
        raise DomainError("a processive graph must be non-empty")
    bad = []
    for v in graph.vertices:
        c = classify_vertex(graph, v)
        if c.kind is not VertexKind.PROCESSIVE and not c.is_leaf:
            bad.append(v)
    return not bad, bad


@dataclass(frozen=True)
class StubEntry:
    leaf: str
    edge: str
    direction: str  # "input" (leaf -> v) or "output" (v -> leaf)


@dataclass(frozen=True)
class ExtensionMapping:
    entries: Mapping[str, StubEntry] = field(default_factory=dict)

    @property
    def added_leaves(self) -> dict[str, str]:
        return {v: s.leaf for v, s in self.entries.items()}

    @property
    def added_edges(self) -> dict[str, str]:
        return {v: s.edge for v, s in self.entries.items()}

    def __len__(self) -> int:
        return len(self.entries)


def _fresh(graph: DirectedAcyclicGraph, new_vertices: Iterable[str], new_edges: Iterable[str]) -> None:
    for v in new_vertices:
        if graph.has_vertex(v):
            raise StructuralError(f"generated vertex id {v!r} collides with an existing vertex", offending=v)
    for e in new_edges:
        if graph.has_edge(e):
            raise StructuralError(f"generated edge id {e!r} collides with an existing edge", offending=e)


def np_extend(graph: DirectedAcyclicGraph) -> tuple[DirectedAcyclicGraph, ExtensionMapping]:
    """Add an input stub above every non-leaf source and an output stub below every non-leaf sink."""
    iso = graph.isolated_vertices()
    if iso:
        raise DomainError(f"isolated vertex {iso[0]!r} has no NP-extension; virtualize it first")
    entries: dict[str, StubEntry] = {}
    new_edges = []
    for v in graph.vertices:
        c = classify_vertex(graph, v)
        if c.is_leaf:
            continue
        if c.kind is VertexKind.SOURCE:
            entry = StubEntry(f"{v}__in_leaf", f"{v}__in_stub", "input")
            new_edges.append(Edge(entry.edge, entry.leaf, v))
        elif c.kind is VertexKind.SINK:
            entry = StubEntry(f"{v}__out_leaf", f"{v}__out_stub", "output")
            new_edges.append(Edge(entry.edge, v, entry.leaf))
        else:
            continue
        entries[v] = entry
    _fresh(graph, (s.leaf for s in entries.values()), (s.edge for s in entries.values()))
    extended = DirectedAcyclicGraph(
        graph.vertices + tuple(s.leaf for s in entries.values()),
        graph.edges + tuple(new_edges),
    )
    return extended, ExtensionMapping(entries)


def np_restrict(extended: DirectedAcyclicGraph, mapping: ExtensionMapping) -> DirectedAcyclicGraph:
    """Inverse of np_extend: delete the mapped leaves and stub edges."""
    return extended.without(
        vertices=(s.leaf for s in mapping.entries.values()),
        edges=(s.edge for s in mapping.entries.values()),
    )


@dataclass(frozen=True)
class VirtualEntry:
    top: str
    bottom: str
    edge: str


def virtualize_isolated(graph: DirectedAcyclicGraph) -> tuple[DirectedAcyclicGraph, dict[str, VirtualEntry]]:
    """Replace each isolated vertex ``v`` by an edge ``v__top -> v__bot`` named ``v__virt``."""
    iso = graph.isolated_vertices()
    if not iso:
        return graph, {}
    mapping = {v: VirtualEntry(f"{v}__top", f"{v}__bot", f"{v}__virt") for v in iso}
    new_vertices = [x for m in mapping.values() for x in (m.top, m.bottom)]
    remaining = graph.without(vertices=iso)
    _fresh(remaining, new_vertices, (m.edge for m in mapping.values()))
    if len(set(new_vertices)) != len(new_vertices):
        raise StructuralError("virtualization produced duplicate vertex ids")
    out = DirectedAcyclicGraph(
        remaining.vertices + tuple(new_vertices),
        remaining.edges + tuple(Edge(m.edge, m.top, m.bottom) for m in mapping.values()),
    )
    return out, mapping

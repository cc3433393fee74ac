from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import boxed_diagram, parallel_pair
from upwardplane.errors import CycleError, DomainError, StructuralError
from upwardplane.graph import (
    DirectedAcyclicGraph,
    Edge,
    VertexKind,
    check_acyclic,
    classify_vertex,
    is_processive_graph,
    np_extend,
    np_restrict,
    virtualize_isolated,
)

DIAMOND = DirectedAcyclicGraph.build("abcd", [("e1", "a", "b"), ("e2", "a", "c"), ("e3", "b", "d"), ("e4", "c", "d")])


def test_check_acyclic_path():
    res = check_acyclic("abc", [Edge("e1", "a", "b"), Edge("e2", "b", "c")])
    assert res.order == ("a", "b", "c")


def test_check_acyclic_two_cycle():
    res = check_acyclic("ab", [Edge("e1", "a", "b"), Edge("e2", "b", "a")])
    assert not res.acyclic
    assert res.cycle == ("e1", "e2")


def test_check_acyclic_parallel_pair_graph_order_is_topological():
    g = parallel_pair().graph
    order = check_acyclic(g.vertices, g.edges).order
    rank = {v: i for i, v in enumerate(order)}
    assert len(g.vertices) == 9 and len(g.edges) == 13
    assert all(rank[e.tail] < rank[e.head] for e in g.edges)


@pytest.mark.parametrize("vertices,edges,bad", [
    ("ab", [Edge("e1", "a", "z")], "z"),
    ("ab", [Edge("e1", "a", "b"), Edge("e1", "a", "b")], "e1"),
    ("aab", [], "a"),
])
def test_check_acyclic_structural_errors(vertices, edges, bad):
    with pytest.raises(StructuralError) as exc:
        check_acyclic(vertices, edges)
    assert exc.value.offending == bad


def test_graph_rejects_cycles_and_loops():
    with pytest.raises(CycleError):
        DirectedAcyclicGraph.build("ab", [("e1", "a", "b"), ("e2", "b", "a")])
    with pytest.raises(StructuralError):
        DirectedAcyclicGraph.build("a", [("e1", "a", "a")])


def test_parallel_edges_allowed():
    g = DirectedAcyclicGraph.build("ab", [("x", "a", "b"), ("y", "a", "b")])
    assert g.out_edges("a") == ("x", "y")


def _closure_irreflexive(vertices, edges) -> bool:
    reach = {v: set() for v in vertices}
    for e in edges:
        reach[e.tail].add(e.head)
    changed = True
    while changed:
        changed = False
        for v in vertices:
            new = set().union(*(reach[w] for w in reach[v])) - reach[v] if reach[v] else set()
            if new:
                reach[v] |= new
                changed = True
    return all(v not in reach[v] for v in vertices)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=14))))
def test_check_acyclic_agrees_with_transitive_closure(data):
    n, pairs = data
    vertices = [f"v{i}" for i in range(n)]
    edges = [Edge(f"e{k}", f"v{a}", f"v{b}") for k, (a, b) in enumerate(pairs)]
    res = check_acyclic(vertices, edges)
    assert res.acyclic == _closure_irreflexive(vertices, edges)
    if res.acyclic:
        rank = {v: i for i, v in enumerate(res.order)}
        assert all(rank[e.tail] < rank[e.head] for e in edges)
    else:
        by_id = {e.id: e for e in edges}
        cyc = [by_id[i] for i in res.cycle]
        assert all(cyc[k].head == cyc[(k + 1) % len(cyc)].tail for k in range(len(cyc)))


def test_classify_vertex():
    g = DirectedAcyclicGraph.build("vxyzs", [("e1", "x", "v"), ("e2", "v", "y"), ("e3", "v", "z"), ("e", "s", "x")])
    assert classify_vertex(g, "v").kind is VertexKind.PROCESSIVE and not classify_vertex(g, "v").is_leaf
    assert classify_vertex(g, "s").kind is VertexKind.SOURCE and classify_vertex(g, "s").is_leaf
    iso = DirectedAcyclicGraph.build("q", [])
    assert classify_vertex(iso, "q").kind is VertexKind.ISOLATED
    with pytest.raises(StructuralError):
        classify_vertex(g, "nope")


def test_is_processive_graph():
    assert is_processive_graph(DirectedAcyclicGraph.build("ab", [("e", "a", "b")])) == (True, [])
    assert is_processive_graph(DIAMOND) == (False, ["a", "d"])
    assert is_processive_graph(np_extend(DIAMOND)[0])[0]
    with pytest.raises(DomainError):
        is_processive_graph(DirectedAcyclicGraph((), ()))


def test_np_extend_single_edge_unchanged():
    g = DirectedAcyclicGraph.build("ab", [("e", "a", "b")])
    ext, mapping = np_extend(g)
    assert ext == g and len(mapping) == 0


def test_np_extend_diamond():
    ext, mapping = np_extend(DIAMOND)
    assert len(ext.vertices) == 6 and len(ext.edges) == 6
    assert ext.edge("a__in_stub") == Edge("a__in_stub", "a__in_leaf", "a")
    assert ext.edge("d__out_stub") == Edge("d__out_stub", "d", "d__out_leaf")
    assert ext.out_edges("a__in_leaf") == ("a__in_stub",) == ext.in_edges("a")
    assert ext.in_edges("d__out_leaf") == ("d__out_stub",) == ext.out_edges("d")
    assert mapping.added_leaves == {"a": "a__in_leaf", "d": "d__out_leaf"}


def test_np_extend_parallel_pair_graph_counts():
    g = parallel_pair().graph
    ext, mapping = np_extend(g)
    assert len(ext.vertices) - len(g.vertices) == 5
    assert len(ext.edges) - len(g.edges) == 5
    assert sorted(mapping.entries) == ["v2", "v3", "v4", "v8", "v9"]


def test_np_extend_rejects_isolated():
    with pytest.raises(DomainError, match="q"):
        np_extend(DirectedAcyclicGraph.build("abq", [("e", "a", "b")]))


def test_np_extend_rejects_id_collision():
    g = DirectedAcyclicGraph.build(["a", "b", "c", "a__in_leaf"], [("e1", "a", "b"), ("e2", "a", "c"), ("e3", "a__in_leaf", "b")])
    with pytest.raises(StructuralError):
        np_extend(g)


def test_virtualize_isolated():
    g, m = virtualize_isolated(DirectedAcyclicGraph.build("v", []))
    assert g.vertices == ("v__bot", "v__top")
    assert [e.id for e in g.edges] == ["v__virt"]
    assert m["v"].top == "v__top"
    h = DIAMOND
    assert virtualize_isolated(h) == (h, {})


def test_virtualize_boxed_diagram_counts():
    g = boxed_diagram().graph
    out, m = virtualize_isolated(g)
    assert len(m) == 4
    assert len(out.vertices) - len(g.vertices) == 4
    assert len(out.edges) - len(g.edges) == 4
    assert not out.isolated_vertices()


def test_virtualize_collision():
    g = DirectedAcyclicGraph.build(["v", "v__top", "x"], [("e", "v__top", "x")])
    with pytest.raises(StructuralError):
        virtualize_isolated(g)


@st.composite
def dags(draw, allow_isolated=True):
    n = draw(st.integers(1, 8))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=14))
    edges = [(f"e{k}", f"v{min(a, b)}", f"v{max(a, b)}") for k, (a, b) in enumerate(pairs) if a != b]
    return DirectedAcyclicGraph.build([f"v{i}" for i in range(n)], edges)


@settings(max_examples=150, deadline=None)
@given(dags())
def test_np_extend_properties(g):
    virt, _ = virtualize_isolated(g)
    assert not virt.isolated_vertices()
    assert virt.topological_order() is not None
    ext, mapping = np_extend(virt)
    assert is_processive_graph(ext)[0]
    assert np_restrict(ext, mapping) == virt
    for v, stub in mapping.entries.items():
        assert classify_vertex(virt, v).kind in (VertexKind.SOURCE, VertexKind.SINK)
        assert not classify_vertex(virt, v).is_leaf


def test_components():
    g = DirectedAcyclicGraph.build("abcd", [("e1", "a", "b"), ("e2", "c", "d")])
    assert g.components() == [("a", "b"), ("c", "d")]
    assert list(itertools.chain(*g.components())) == ["a", "b", "c", "d"]

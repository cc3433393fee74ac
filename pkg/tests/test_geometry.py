from __future__ import annotations

import math
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import boxed_diagram, cross, diamond, make, parallel_pair, single_edge, tree
from upwardplane.errors import DomainError, PreconditionError
from upwardplane.generate import corpus
from upwardplane.geometry import (
    Drawing,
    PlaneBox,
    Point,
    min_clearance,
    mirror_x,
    scale_positive,
    segment_intersection,
    translate,
    validate_drawing,
    validate_progressive,
)
from upwardplane.graph import DirectedAcyclicGraph

P = Point.of
CORPUS = [d for _, d in corpus(range(0, 500, 5))]


# --- independent oracles -------------------------------------------------


def oracle_intersection(a, b, c, d):
    """Set-valued intersection via Cramer's rule: None, a point, or a (lo, hi) interval of points."""
    r = (b.x - a.x, b.y - a.y)
    s = (d.x - c.x, d.y - c.y)
    det = r[0] * (-s[1]) - r[1] * (-s[0])
    w = (c.x - a.x, c.y - a.y)
    if det != 0:
        u = (w[0] * (-s[1]) - w[1] * (-s[0])) / det
        v = (r[0] * w[1] - r[1] * w[0]) / det
        if 0 <= u <= 1 and 0 <= v <= 1:
            return Point(a.x + u * r[0], a.y + u * r[1])
        return None
    if r[0] * w[1] - r[1] * w[0] != 0:
        return None  # parallel, distinct lines
    rr = r[0] ** 2 + r[1] ** 2
    t0 = (w[0] * r[0] + w[1] * r[1]) / rr
    t1 = ((d.x - a.x) * r[0] + (d.y - a.y) * r[1]) / rr
    lo, hi = max(F(0), min(t0, t1)), min(F(1), max(t0, t1))
    if lo > hi:
        return None
    p = Point(a.x + lo * r[0], a.y + lo * r[1])
    q = Point(a.x + hi * r[0], a.y + hi * r[1])
    return p if lo == hi else (p, q)


def oracle_bad_pairs(d: Drawing) -> set[frozenset]:
    vertex_points = set(d.position.values())
    segs = [(e.id, i, pl[i], pl[i + 1]) for e in d.graph.edges for pl in [d.polyline(e.id)] for i in range(len(pl) - 1)]
    bad = set()
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            e1, i1, a, b = segs[i]
            e2, i2, c, dd = segs[j]
            hit = oracle_intersection(a, b, c, dd)
            if hit is None:
                continue
            if isinstance(hit, tuple) and not isinstance(hit, Point):
                bad.add((e1, e2))
                continue
            if e1 == e2 and abs(i1 - i2) == 1 and hit == (b if i2 > i1 else a):
                continue
            if e1 != e2 and hit in vertex_points and hit in (a, b) and hit in (c, dd):
                continue
            bad.add((e1, e2))
    return bad


def _d2(p, q):
    return (p.x - q.x) ** 2 + (p.y - q.y) ** 2


def _pt_seg(p, a, b):
    # minimise |a + t(b - a) - p|^2 over t in [0, 1] by checking the vertex of the parabola and the ends
    cands = [F(0), F(1)]
    den = _d2(a, b)
    t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / den
    if 0 < t < 1:
        cands.append(t)
    return min(_d2(Point(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)), p) for s in cands)


def oracle_clearance(d: Drawing):
    points = d.all_points()
    segs = [(s.a, s.b) for s in d.segments()]
    best = math.inf
    for i, p in enumerate(points):
        for q in points[i + 1:]:
            if (p, q) in segs or (q, p) in segs:
                continue
            best = min(best, _d2(p, q))
        for a, b in segs:
            if p not in (a, b):
                best = min(best, _pt_seg(p, a, b))
    for i, (a, b) in enumerate(segs):
        for c, dd in segs[i + 1:]:
            if {a, b} & {c, dd}:
                continue
            best = min(best, _pt_seg(a, c, dd), _pt_seg(b, c, dd), _pt_seg(c, a, b), _pt_seg(dd, a, b))
    return best


# --- validate_drawing ------------------------------------------------------


def test_tree_is_valid():
    assert validate_drawing(tree()).ok


def test_bend_going_up_is_not_monotone():
    d = make({"a": (0, 4), "b": (0, 2), "c": (-1, 0), "d": (1, 0)},
             [("e1", "a", "b"), ("e2", "b", "c"), ("e3", "b", "d")], {"e2": [(0, 3)]})
    rep = validate_drawing(d)
    assert "not-monotone" in rep.codes()
    v = next(v for v in rep.violations if v.code == "not-monotone")
    assert v.ids == ("e2",) and v.points == (P(0, 2), P(0, 3))


def test_cross_reports_crossing_point():
    rep = validate_drawing(cross())
    assert rep.codes() == ["crossing"]
    assert rep.violations[0].points == (P(0, 1),)
    assert oracle_intersection(P(-1, 2), P(1, 0), P(1, 2), P(-1, 0)) == P(0, 1)


def test_overlap_and_vertex_violations():
    g = {"a": (0, 2), "b": (0, 0), "c": (0, 1), "x": (1, 2), "y": (1, 0)}
    d = make(g, [("e1", "a", "b"), ("e2", "x", "y")])
    assert validate_drawing(d).codes() == ["vertex-on-edge"]
    par = make({"a": (0, 2), "b": (0, 0)}, [("e1", "a", "b"), ("e2", "a", "b")])
    assert validate_drawing(par).codes() == ["overlap"]
    par_ok = make({"a": (0, 2), "b": (0, 0)}, [("e1", "a", "b"), ("e2", "a", "b")], {"e2": [(1, 1)]})
    assert validate_drawing(par_ok).ok
    same = make({"a": (0, 2), "b": (0, 2)}, [])
    assert validate_drawing(same).codes() == ["vertex-overlap"]
    bend = make({"a": (0, 2), "b": (0, 0), "c": (1, 1)}, [("e1", "a", "b")], {"e1": [(1, 1)]})
    assert "bend-on-vertex" in validate_drawing(bend).codes()
    horiz = make({"a": (0, 0), "b": (1, 0)}, [("e1", "a", "b")])
    assert validate_drawing(horiz).codes() == ["not-monotone"]


def test_violation_order_is_deterministic():
    d = make({"a": (-1, 2), "b": (-1, 0), "c": (1, 2), "d": (1, 0), "p": (-2, 2), "q": (2, 0)},
             [("z", "a", "d"), ("y", "c", "b"), ("x", "p", "q")])
    rep = validate_drawing(d)
    assert [v.ids for v in rep.violations] == [("x", "y"), ("x", "z"), ("y", "z")]
    assert rep == validate_drawing(d)


def test_fixture_drawings_valid():
    assert validate_drawing(parallel_pair()).ok
    assert validate_drawing(boxed_diagram()).ok


coords = st.integers(-4, 4)


@st.composite
def random_drawings(draw):
    n = draw(st.integers(2, 6))
    ys = draw(st.lists(coords, min_size=n, max_size=n))
    xs = draw(st.lists(coords, min_size=n, max_size=n))
    vs = {f"v{i}": (xs[i], ys[i]) for i in range(n)}
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=6))
    edges, bends = [], {}
    for k, (i, j) in enumerate(pairs):
        if i == j:
            continue
        a, b = min(i, j), max(i, j)
        eid = f"e{k}"
        edges.append((eid, f"v{a}", f"v{b}"))
        bends[eid] = draw(st.lists(st.tuples(coords, coords), max_size=2))
    return make(vs, edges, bends)


@settings(max_examples=300, deadline=None)
@given(random_drawings())
def test_crossing_detection_matches_oracle(d):
    assume(all(s.a != s.b for s in d.segments()))
    rep = validate_drawing(d)
    flagged = {v.ids for v in rep.violations if v.code in ("crossing", "overlap")}
    assert flagged == oracle_bad_pairs(d)


def test_crossing_oracle_agrees_on_corpus_and_fixtures():
    for d in CORPUS + [tree(), diamond(), cross(), parallel_pair(), boxed_diagram()]:
        flagged = {v.ids for v in validate_drawing(d).violations if v.code in ("crossing", "overlap")}
        assert flagged == oracle_bad_pairs(d)


def test_segment_intersection_kinds():
    assert segment_intersection(P(0, 0), P(2, 0), P(1, 0), P(3, 0)) == ("overlap", (P(1, 0), P(2, 0)))
    assert segment_intersection(P(0, 0), P(1, 0), P(1, 0), P(2, 0)) == ("point", P(1, 0))
    assert segment_intersection(P(0, 0), P(0, 1), P(1, 0), P(1, 1)) is None


# --- progressive ------------------------------------------------------------


def test_progressive_tree_ok():
    assert validate_progressive(tree(), PlaneBox(-2, 2, 0, 4)).ok


def test_progressive_vertex_on_vertical_boundary():
    d = make({"a": (0, 4), "b": (-2, 2), "c": (-1, 0), "d": (1, 0)},
             [("e1", "a", "b"), ("e2", "b", "c"), ("e3", "b", "d")])
    assert validate_progressive(d, PlaneBox(-2, 2, 0, 4)).codes() == ["vertex-on-vertical-boundary"]


def test_progressive_points_below_box():
    rep = validate_progressive(tree(), PlaneBox(-2, 2, 1, 4))
    assert set(rep.codes()) == {"outside-box"}


def test_progressive_non_leaf_on_boundary():
    d = make({"a": (0, 4), "b": (-1, 2), "c": (1, 2), "d": (0, 0)},
             [("e1", "a", "b"), ("e2", "a", "c"), ("e3", "b", "d"), ("e4", "c", "d")])
    assert "boundary-vertex-not-leaf" in validate_progressive(d, PlaneBox(-2, 2, 0, 4)).codes()


def test_progressive_boxed_diagram():
    assert validate_progressive(boxed_diagram(), PlaneBox("-3", "8.5", "-6.5", "1.5")).ok


def test_progressive_requires_valid():
    with pytest.raises(PreconditionError):
        validate_progressive(cross(), PlaneBox(-5, 5, -5, 5))
    with pytest.raises(DomainError):
        PlaneBox(1, 1, 0, 1)


# --- clearance --------------------------------------------------------------


def test_clearance_parallel_edges():
    d = make({"a": (0, 1), "b": (0, 0), "c": (1, 1), "d": (1, 0)}, [("e1", "a", "b"), ("e2", "c", "d")])
    assert min_clearance(d) == 1


def test_clearance_tree():
    assert oracle_clearance(tree()) == F(16, 5)
    assert min_clearance(tree()) == F(16, 5)


def test_clearance_single_edge_is_infinite():
    assert min_clearance(single_edge()) == math.inf


def test_clearance_matches_oracle():
    for d in CORPUS + [diamond(), parallel_pair(), boxed_diagram()]:
        c = min_clearance(d)
        assert c == oracle_clearance(d)
        if c != math.inf:
            assert c > 0


def test_clearance_invalid_drawing():
    with pytest.raises(PreconditionError):
        min_clearance(cross())


# --- transforms -----------------------------------------------------------


def test_translate_and_scale_keep_validity():
    for d in CORPUS[:40] + [tree(), parallel_pair()]:
        c = min_clearance(d)
        t = translate(d, "5.5", -3)
        assert validate_drawing(t).ok and min_clearance(t) == c
        s = scale_positive(d, 2, "0.5")
        assert validate_drawing(s).ok
        if c != math.inf:
            assert F(1, 4) * c <= min_clearance(s) <= 4 * c


def test_mirror_keeps_validity():
    for d in CORPUS[:40] + [tree(), parallel_pair()]:
        assert validate_drawing(mirror_x(d)).ok


def test_bad_scale():
    with pytest.raises(DomainError):
        scale_positive(tree(), 0, 1)


def test_translate_exact():
    d = translate(tree(), "0.1", "0.2")
    assert d.position["a"] == Point(F(1, 10), F(21, 5))


def test_floats_rejected():
    with pytest.raises(TypeError):
        Point.of(0.1, 0)


def test_empty_graph_drawing():
    d = Drawing(DirectedAcyclicGraph((), ()), {})
    assert validate_drawing(d).ok

from __future__ import annotations

import sys

import pytest

from upwardplane.geometry import Drawing
from upwardplane.graph import DirectedAcyclicGraph


def make(vertices: dict, edges: list, bends: dict | None = None) -> Drawing:
    """Build a drawing from ``{id: (x, y)}`` and ``[(eid, tail, head)]`` using decimal strings."""
    g = DirectedAcyclicGraph.build(vertices, edges)
    pos = {v: (str(x), str(y)) for v, (x, y) in vertices.items()}
    route = {e: [(str(x), str(y)) for x, y in bs] for e, bs in (bends or {}).items()}
    return Drawing(g, pos, route)


def tree() -> Drawing:
    return make({"a": (0, 4), "b": (0, 2), "c": (-1, 0), "d": (1, 0)},
                [("e1", "a", "b"), ("e2", "b", "c"), ("e3", "b", "d")])


def diamond() -> Drawing:
    return make({"a": (0, 4), "b": (-1, 2), "c": (1, 2), "d": (0, 0)},
                [("e1", "a", "b"), ("e2", "a", "c"), ("e3", "b", "d"), ("e4", "c", "d")])


def cross() -> Drawing:
    return make({"a": (-1, 2), "b": (-1, 0), "c": (1, 2), "d": (1, 0)},
                [("e1", "a", "d"), ("e2", "c", "b")])


def single_edge() -> Drawing:
    return make({"a": (0, 1), "b": (0, 0)}, [("e", "a", "b")])


def two_edges() -> Drawing:
    return make({"a": (0, 1), "b": (0, 0), "c": (3, 1), "d": (3, 0)}, [("e1", "a", "b"), ("e2", "c", "d")])


def parallel_pair() -> Drawing:
    """Nine vertices, thirteen edges; a13 runs parallel to a09 as a 3-bend polyline."""
    v = {"v1": (-3, -3), "v2": ("0.5", 2), "v3": (3, "-2.5"), "v4": (7, 0), "v5": ("-0.5", "-7.5"),
         "v6": ("3.5", "-5.5"), "v7": (6, "-8.5"), "v8": ("0.5", -2), "v9": (2, -11)}
    e = [("a01", "v2", "v1"), ("a02", "v2", "v3"), ("a03", "v4", "v3"), ("a04", "v6", "v5"),
         ("a05", "v6", "v7"), ("a06", "v1", "v5"), ("a07", "v8", "v5"), ("a08", "v8", "v6"),
         ("a09", "v4", "v7"), ("a10", "v7", "v9"), ("a11", "v5", "v9"), ("a12", "v4", "v6"),
         ("a13", "v4", "v7")]
    return make(v, e, {"a13": [(8, "-2.5"), ("8.5", "-5.5"), ("7.5", "-7.5")]})


def boxed_diagram() -> Drawing:
    """A boxed diagram with four isolated vertices, inside [-3, 8.5] x [-6.5, 1.5]."""
    v = {"p1": (-1, "1.5"), "p2": (0, -1), "p3": ("1.5", "0.5"), "p4": ("0.5", "-3.5"), "p5": ("0.5", "-6.5"),
         "p6": ("-1.5", "-4.5"), "p7": (4, "1.5"), "p8": (4, -2), "p9": (3, "-5.5"), "p10": (2, "-3.5"),
         "q1": ("6.5", "1.5"), "q2": ("6.5", "-6.5"),
         "i1": ("5.5", -1), "i2": ("2.7", "-1.7"), "i3": ("0.35", "0.45"), "i4": ("5.5", "-4.5")}
    e = [("b01", "p1", "p2"), ("b02", "p3", "p2"), ("b03", "p3", "p4"), ("b04", "p4", "p5"),
         ("b05", "p2", "p6"), ("b06", "p2", "p4"), ("b07", "p7", "p8"), ("b08", "p3", "p8"),
         ("b09", "p4", "p9"), ("b10", "p8", "p9"), ("b11", "p3", "p10"), ("b12", "p8", "p10"),
         ("b13", "q1", "q2"), ("b14", "p8", "p9")]
    return make(v, e, {"b14": [("4.5", -3), (4, "-4.5")]})


@pytest.fixture
def d_tree() -> Drawing:
    return tree()


@pytest.fixture
def d_diamond() -> Drawing:
    return diamond()


@pytest.fixture
def d_cross() -> Drawing:
    return cross()


@pytest.fixture
def d_single() -> Drawing:
    return single_edge()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)

"""Seeded random upward planar drawings for property testing."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .geometry import Drawing, Point, validate_drawing
from .graph import DirectedAcyclicGraph, Edge

__all__ = ["GeneratorConfig", "generate", "corpus_config", "corpus"]


@dataclass(frozen=True)
class GeneratorConfig:
    vertex_count: int
    target_edge_count: int
    seed: int
    max_attempts: int = 200
    coord_min: int = -50
    coord_max: int = 50

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise ValueError("vertex_count must be at least 1")
        if self.target_edge_count < 0:
            raise ValueError("target_edge_count must be non-negative")
        if self.coord_max - self.coord_min + 1 < self.vertex_count:
            raise ValueError("coordinate range too small for distinct y values")


def _orient(a, b, c) -> int:
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def _within(p, a, b) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def _touches(a, b, c, d, shared_ok: bool) -> bool:
    """Whether closed segments ab and cd meet anywhere other than an allowed shared endpoint."""
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if o1 == o2 == 0:
        if not (_within(c, a, b) or _within(d, a, b) or _within(a, c, d)):
            return False
        # collinear pieces that share only the common endpoint and point away from each other
        if shared_ok:
            common = a if a in (c, d) else b
            other1 = b if common == a else a
            other2 = d if common == c else c
            dot = (other1[0] - common[0]) * (other2[0] - common[0]) + (other1[1] - common[1]) * (other2[1] - common[1])
            return dot > 0
        return True
    if o1 * o2 > 0 or o3 * o4 > 0:
        return False
    if shared_ok:
        return False  # non-collinear segments with a common endpoint meet only there
    return True


def generate(config: GeneratorConfig) -> Drawing:
    """Random points with distinct y, then straight edges added while they cross nothing.

    Edges always point from the higher to the lower endpoint, so the result
    is acyclic. Fewer than ``target_edge_count`` edges may be produced.
    """
    rng = random.Random(config.seed)
    n = config.vertex_count
    ys = rng.sample(range(config.coord_min, config.coord_max + 1), n)
    ids = [f"v{i}" for i in range(n)]
    pts = {v: (rng.randint(config.coord_min, config.coord_max), y) for v, y in zip(ids, ys)}

    edges: list[Edge] = []
    placed: list[tuple[str, str]] = []
    blocked: set[tuple[str, str]] = set()

    def free(u: str, v: str) -> bool:
        a, b = pts[u], pts[v]
        for w, p in pts.items():
            if w != u and w != v and _orient(a, b, p) == 0 and _within(p, a, b):
                return False
        for s, t in placed:
            shared = len({u, v} & {s, t})
            if shared == 2 or _touches(a, b, pts[s], pts[t], shared == 1):
                return False
        return True

    while len(edges) < config.target_edge_count and n >= 2:
        for _ in range(config.max_attempts):
            u, v = rng.sample(ids, 2)
            if pts[u][1] < pts[v][1]:
                u, v = v, u
            if (u, v) in blocked:
                continue
            if free(u, v):
                edges.append(Edge(f"e{len(edges)}", u, v))
                placed.append((u, v))
                break
            blocked.add((u, v))
        else:
            break

    position = {v: Point.of(*p) for v, p in pts.items()}
    drawing = Drawing(DirectedAcyclicGraph(tuple(ids), tuple(edges)), position)
    report = validate_drawing(drawing)
    assert report.ok, report.violations
    return drawing


def corpus_config(seed: int) -> GeneratorConfig:
    """The property-test corpus: 1 to 12 vertices, 0 to 20 target edges."""
    return GeneratorConfig(vertex_count=1 + seed % 12, target_edge_count=(3 * seed + seed // 12) % 21, seed=seed)


def corpus(seeds=range(500)):
    for s in seeds:
        yield s, generate(corpus_config(s))

"""Deciding deformation equivalence, and deformation chains as positive witnesses.

Two drawings of the same labeled graph are deformation equivalent exactly
when the signatures of their NPP-extensions agree.

A chain certifies a deformation because of two facts about linear
interpolation between consecutive frames. A convex combination of strictly
negative y-steps is strictly negative, so every intermediate polyline stays
strictly downward. And when every point moves less than c/4, with c the
clearance of the earlier frame, two non-incident features that started at
least c apart stay more than c/2 apart, so nothing can cross or touch.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from enum import Enum

from .canonical import signature_digest
from .embedding import extract_polarization, signature
from .errors import InternalError
from .extension import npp_extend_auto
from .geometry import Drawing, Point, min_clearance, orient, require_valid, sqrt_lower, to_fraction, validate_drawing

__all__ = [
    "Verdict",
    "EquivalenceReport",
    "equivalent",
    "PerturbStep",
    "DeformationChain",
    "ChainCheck",
    "perturb_step",
    "make_chain",
    "verify_chain",
    "interpolate",
]

log = logging.getLogger(__name__)


class Verdict(str, Enum):
    EQUIVALENT = "equivalent"
    NOT_EQUIVALENT = "not-equivalent"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class EquivalenceReport:
    verdict: Verdict
    evidence: dict = field(default_factory=dict)


def _pol_obj(p) -> dict:
    return {"in": list(p.in_order), "out": list(p.out_order)}


def equivalent(a: Drawing, b: Drawing) -> EquivalenceReport:
    if a.graph != b.graph:
        return EquivalenceReport(Verdict.INCOMPARABLE, {"reason": "the drawings are of different labeled graphs"})
    require_valid(a)
    require_valid(b)
    sa = signature(npp_extend_auto(a).drawing)
    sb = signature(npp_extend_auto(b).drawing)
    pa, pb = extract_polarization(a), extract_polarization(b)
    if sa == sb:
        if pa != pb:
            raise InternalError("equal NPP signatures but different polarization structures")
        da = signature_digest(sa)
        return EquivalenceReport(Verdict.EQUIVALENT, {"digests": [da, signature_digest(sb)]})

    for v in sorted(pa):
        if pa[v] != pb[v]:
            return EquivalenceReport(Verdict.NOT_EQUIVALENT, {
                "kind": "polarization", "vertex": v, "a": _pol_obj(pa[v]), "b": _pol_obj(pb[v]),
            })
    for ca, cb in zip(sa.components, sb.components):
        if ca.outer_face != cb.outer_face:
            return EquivalenceReport(Verdict.NOT_EQUIVALENT, {
                "kind": "outer-face", "component": ca.key,
                "a": [list(h) for h in ca.outer_face], "b": [list(h) for h in cb.outer_face],
            })
        if ca.parent != cb.parent:
            def enc(p):
                return None if p is None else {"component": p[0], "face": [list(h) for h in p[1]]}
            return EquivalenceReport(Verdict.NOT_EQUIVALENT, {
                "kind": "containment", "component": ca.key, "a": enc(ca.parent), "b": enc(cb.parent),
            })
        if ca.rotations != cb.rotations:
            for (v, ra), (_, rb) in zip(ca.rotations, cb.rotations):
                if ra != rb:
                    return EquivalenceReport(Verdict.NOT_EQUIVALENT, {
                        "kind": "rotation", "vertex": v, "a": list(ra), "b": list(rb),
                    })
    raise InternalError("signatures differ but no differing record was found")


# --- deformation chains ----------------------------------------------------


MOVES = ("jitter", "jitter", "jitter", "translate", "scale", "bend-insert", "bend-remove")


@dataclass(frozen=True)
class PerturbStep:
    drawing: Drawing
    move: str
    max_displacement2: Fraction
    fallback: bool = False


@dataclass(frozen=True)
class DeformationChain:
    frames: tuple[Drawing, ...]
    steps: tuple[PerturbStep, ...] = ()


@dataclass(frozen=True)
class ChainCheck:
    ok: bool
    first_failure: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _points(d: Drawing):
    """All points keyed by a stable handle: ("v", id) or ("b", edge, index)."""
    out = {("v", v): p for v, p in d.position.items()}
    for e, bends in d.route.items():
        for i, b in enumerate(bends):
            out[("b", e, i)] = b
    return out


def _max_disp2(d0: Drawing, d1: Drawing) -> Fraction:
    p0, p1 = _points(d0), _points(d1)
    return max(((p1[k].x - p.x) ** 2 + (p1[k].y - p.y) ** 2 for k, p in p0.items()), default=Fraction(0))


def _move_all(d: Drawing, fn) -> Drawing:
    return d.replace(
        position={v: fn(("v", v), p) for v, p in d.position.items()},
        route={e: tuple(fn(("b", e, i), b) for i, b in enumerate(bs)) for e, bs in d.route.items()},
    )


def _rng(seed: int, step_index: int) -> random.Random:
    return random.Random(f"upwardplane-perturb:{seed}:{step_index}")


def _offset(rng: random.Random, half: Fraction) -> Fraction:
    return half * Fraction(rng.randint(-1000, 1000), 1000)


def _try_move(d: Drawing, move: str, rng: random.Random, budget: Fraction) -> Drawing | None:
    """One candidate move; budget bounds each coordinate offset (so |displacement| < 2**0.5 * budget)."""
    if not d.position:
        return None
    if move == "jitter":
        keys = sorted(_points(d))
        target = keys[rng.randrange(len(keys))]
        dx, dy = _offset(rng, budget), _offset(rng, budget)
        return _move_all(d, lambda k, p: Point(p.x + dx, p.y + dy) if k == target else p)
    if move == "translate":
        dx, dy = _offset(rng, budget), _offset(rng, budget)
        return _move_all(d, lambda k, p: Point(p.x + dx, p.y + dy))
    if move == "scale":
        pts = _points(d).values()
        m = max(max(abs(p.x), abs(p.y)) for p in pts)
        if m == 0:
            return None
        dmax = min(budget / m, Fraction(1, 2))
        sx, sy = 1 + _offset(rng, dmax), 1 + _offset(rng, dmax)
        return _move_all(d, lambda k, p: Point(p.x * sx, p.y * sy))
    if move == "bend-insert":
        segs = list(d.segments())
        if not segs:
            return None
        s = segs[rng.randrange(len(segs))]
        mid = Point((s.a.x + s.b.x) / 2, (s.a.y + s.b.y) / 2)
        bends = list(d.route[s.edge])
        bends.insert(s.index, mid)
        return d.replace(route={**d.route, s.edge: tuple(bends)})
    if move == "bend-remove":
        candidates = []
        for e in d.graph.edges:
            pl = d.polyline(e.id)
            for i in range(1, len(pl) - 1):
                if orient(pl[i - 1], pl[i], pl[i + 1]) == 0:
                    candidates.append((e.id, i - 1))
        if not candidates:
            return None
        eid, i = candidates[rng.randrange(len(candidates))]
        bends = list(d.route[eid])
        del bends[i]
        return d.replace(route={**d.route, eid: tuple(bends)})
    raise ValueError(f"unknown move {move!r}")


def perturb_step(drawing: Drawing, seed: int, step_index: int, max_retries: int = 32) -> PerturbStep:
    """One seeded random deformation move that keeps the drawing valid.

    Coordinate moves displace every point by less than a quarter of the
    clearance. A rejected candidate is resampled; after ``max_retries``
    failures the input is returned unchanged with ``fallback`` set.
    """
    require_valid(drawing)
    rng = _rng(seed, step_index)
    c2 = min_clearance(drawing)
    bound2 = None if c2 == math.inf else c2 / 16
    budget = Fraction(1, 2) if c2 == math.inf else sqrt_lower(c2) / 8
    for attempt in range(max_retries):
        move = MOVES[rng.randrange(len(MOVES))]
        cand = _try_move(drawing, move, rng, budget)
        if cand is None:
            continue
        if move.startswith("bend"):
            disp2 = Fraction(0)
        else:
            disp2 = _max_disp2(drawing, cand)
            if bound2 is not None and not disp2 < bound2:
                budget /= 2
                continue
        if not validate_drawing(cand).ok:
            budget /= 2
            continue
        return PerturbStep(cand, move, disp2)
    log.debug("perturb_step fell back to identity at step %d", step_index)
    return PerturbStep(drawing, "identity", Fraction(0), fallback=True)


def make_chain(drawing: Drawing, steps: int, seed: int) -> DeformationChain:
    if steps < 0:
        raise ValueError("steps must be non-negative")
    frames = [drawing]
    records = []
    for i in range(steps):
        st = perturb_step(frames[-1], seed, i)
        frames.append(st.drawing)
        records.append(st)
    return DeformationChain(tuple(frames), tuple(records))


def _bend_counts(d: Drawing) -> dict[str, int]:
    return {e: len(b) for e, b in d.route.items()}


def _strictly_inside(p: Point, a: Point, b: Point) -> bool:
    return (orient(a, b, p) == 0 and p != a and p != b
            and min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y))


def _check_refinement(d0: Drawing, d1: Drawing) -> str:
    """Empty string if d1 is d0 with one bend inserted or removed on a straight run."""
    if d0.position != d1.position:
        return "vertex moved during a bend insertion/removal step"
    changed = [e for e in d0.route if d0.route[e] != d1.route[e]]
    if len(changed) != 1:
        return "more than one edge changed in a bend step"
    e = changed[0]
    short, long_ = (d0, d1) if len(d0.route[e]) < len(d1.route[e]) else (d1, d0)
    ps, pl = short.polyline(e), long_.polyline(e)
    if len(pl) != len(ps) + 1:
        return "bend count changed by more than one"
    for i in range(1, len(pl) - 1):
        if pl[:i] + pl[i + 1:] == ps:
            if _strictly_inside(pl[i], pl[i - 1], pl[i + 1]):
                return ""
            return "inserted/removed bend is not on the segment it splits"
    return "edge geometry changed beyond a single bend"


def verify_chain(chain: DeformationChain) -> ChainCheck:
    frames = chain.frames
    if not frames:
        return ChainCheck(False, 0, "empty chain")
    for i, d in enumerate(frames):
        rep = validate_drawing(d)
        if not rep.ok:
            return ChainCheck(False, i, f"frame {i} invalid: {rep.violations[0].code}")
        if i == 0:
            continue
        prev = frames[i - 1]
        if d.graph != prev.graph:
            return ChainCheck(False, i, "graph changed between frames")
        if _bend_counts(d) == _bend_counts(prev):
            c2 = min_clearance(prev)
            if c2 != math.inf and not _max_disp2(prev, d) < c2 / 16:
                return ChainCheck(False, i, "displacement bound violated")
        else:
            why = _check_refinement(prev, d)
            if why:
                return ChainCheck(False, i, why)
    return ChainCheck(True)


def interpolate(d0: Drawing, d1: Drawing, t) -> Drawing:
    """Linear interpolation between two frames with the same polyline structure."""
    t = to_fraction(t)
    p1 = _points(d1)
    return _move_all(d0, lambda k, p: Point(p.x + t * (p1[k].x - p.x), p.y + t * (p1[k].y - p.y)))

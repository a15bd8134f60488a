"""Break regions with holes (and islands inside holes) into simply connected regions.

Nesting decides what is filled: a curve inside an odd number of other
curves bounds a hole, so outer boundaries are made counterclockwise and
holes clockwise before merging.

A merged outer boundary passes twice through the point where the hole was
attached (a pinch node).  Such curves still have segments meeting only at
nodes, which is all that the downstream stages require.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bezulate import normalize_ccw
from .errors import CrossingCurves, IntersectionOverlap, MergeFailure, OnBoundary
from .geometry import (ClosedCurve, CubicSegment, Hit, curve_point, curves_intersect,
                       intersections, signed_area, straight_segment, subpath_between)
from .winding import winding_number

MIN_DELTA = 1e-6


@dataclass(frozen=True)
class CurveGroup:
    toplevel: ClosedCurve
    inner: tuple[ClosedCurve, ...] = ()


@dataclass(frozen=True)
class MergeContext:
    """State of one probe: hole point ``A``, outer point ``B`` and the step to ``C``."""

    A: tuple
    B: tuple
    t_A: float
    t_B: float
    delta: float
    C: tuple | None = None


def _test_points(curve: ClosedCurve):
    for s in curve.segments:
        yield s.p0
    for s in curve.segments:
        if not s.is_null:
            yield curve_point(curve, curve.segments.index(s) + 0.5)


def contains(outer: ClosedCurve, other: ClosedCurve) -> bool:
    """Whether ``other`` lies inside ``outer`` (nonzero winding at a point of ``other``)."""
    for p in _test_points(other):
        try:
            return winding_number(outer, p) != 0
        except OnBoundary:
            continue
    return False


def check_crossings(curves: list[ClosedCurve]) -> None:
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            if curves_intersect(curves[i], curves[j]):
                raise CrossingCurves(f"curves {i} and {j} intersect", pair=(i, j))


def sort_curves(curves: list[ClosedCurve], *, check: bool = True) -> list[CurveGroup]:
    """Group every top-level curve with all the curves nested inside it."""
    curves = list(curves)
    if check:
        check_crossings(curves)
    inside_of = [[j for j in range(len(curves)) if j != i and contains(curves[j], curves[i])]
                 for i in range(len(curves))]
    groups = []
    for t in range(len(curves)):
        if inside_of[t]:
            continue
        members = tuple(curves[i] for i in range(len(curves)) if t in inside_of[i])
        groups.append(CurveGroup(curves[t], members))
    return groups


def _hole_orientation(curve: ClosedCurve) -> ClosedCurve:
    return curve.reversed() if signed_area(curve) > 0 else curve


def _node_distance(a: ClosedCurve, b: ClosedCurve) -> float:
    return min(math.dist(p, q) for p in a.nodes for q in b.nodes)


def _count(curve: ClosedCurve, a, b) -> int | None:
    try:
        return len(intersections(curve, a, b))
    except IntersectionOverlap:
        return None


def _region_blocked(region: ClosedCurve, probes) -> bool:
    for p in probes:
        try:
            if winding_number(region, p) != 0:
                return True
        except OnBoundary:
            return True
    return False


def _try_probe(outer: ClosedCurve, inner: ClosedCurve, others: list[ClosedCurve], k: int):
    A0 = inner.segments[k].p0
    B0 = min((s.p0 for s in outer.segments), key=lambda q: math.dist(A0, q))
    if A0 == B0:
        return None
    entries: list[tuple[float, str, Hit]] = []
    try:
        entries += [(h.s, "I", h) for h in intersections(inner, A0, B0)]
        entries += [(h.s, "O", h) for h in intersections(outer, A0, B0)]
        for o in others:
            entries += [(h.s, "X", h) for h in intersections(o, A0, B0)]
    except IntersectionOverlap:
        return None
    entries.sort(key=lambda e: e[0])
    pair = next(((e1[2], e2[2]) for e1, e2 in zip(entries, entries[1:])
                 if e1[1] == "I" and e2[1] == "O" and e2[0] > e1[0]), None)
    if pair is None:
        return None
    hit_a, hit_b = pair
    ctx = MergeContext(A=None, B=None, t_A=hit_a.segment + hit_a.t,
                       t_B=hit_b.segment + hit_b.t, delta=1.0)
    A = curve_point(inner, ctx.t_A)
    B = curve_point(outer, ctx.t_B)
    far_inner = curve_point(inner, ctx.t_A + len(inner) / 2)
    other_probes = [o.segments[0].p0 for o in others]

    delta = 1.0
    while delta >= MIN_DELTA:
        if delta >= len(outer):
            delta /= 2
            continue
        t_C = ctx.t_B + delta
        C = curve_point(outer, t_C)
        delta_used = delta
        delta /= 2
        if C == A or C == B:
            continue
        if (n := _count(outer, A, C)) is None or n > 1:
            continue
        try:
            ihits = intersections(inner, A, C)
        except IntersectionOverlap:
            continue
        if len(ihits) != 1 or ihits[0].s > 1e-9:
            continue
        if any(_count(o, A, C) != 0 for o in others):
            continue
        ab = straight_segment(A, B)
        ca = straight_segment(C, A)
        arc = subpath_between(outer, ctx.t_B, t_C, start=B, end=C)
        region = ClosedCurve([ab] + arc + [ca], validate=False)
        if signed_area(region) <= 0:
            continue
        if _region_blocked(region, other_probes + [far_inner]):
            continue
        rest = subpath_between(outer, t_C, ctx.t_B, start=C, end=B)
        loop = subpath_between(inner, ctx.t_A, ctx.t_A, start=A, end=A)
        merged = ClosedCurve(rest + [ab.reversed()] + loop + [ca.reversed()], validate=False)
        done = MergeContext(A=A, B=B, t_A=ctx.t_A, t_B=ctx.t_B, delta=delta_used, C=C)
        return region, merged, done
    return None


def merge(outer: ClosedCurve, inners: list[ClosedCurve]) -> list[ClosedCurve]:
    """Cut the holes ``inners`` out of ``outer``, one extracted region per hole.

    Returns the extracted regions followed by the final outer boundary, all
    counterclockwise.  Holes nearer the outer boundary are merged first; when
    no probe works for one hole the next is tried before giving up.
    """
    outer = normalize_ccw(outer)
    remaining = sorted((_hole_orientation(c) for c in inners),
                       key=lambda c: _node_distance(c, outer))
    pieces: list[ClosedCurve] = []
    while remaining:
        for idx, inner in enumerate(remaining):
            others = remaining[:idx] + remaining[idx + 1:]
            order = sorted(range(len(inner)),
                           key=lambda k: min(math.dist(inner.segments[k].p0, s.p0)
                                             for s in outer.segments))
            result = None
            for k in order:
                if inner.segments[k].is_null:
                    continue
                result = _try_probe(outer, inner, others, k)
                if result is not None:
                    break
            if result is not None:
                region, outer, _ = result
                pieces.append(region)
                remaining.pop(idx)
                break
        else:
            raise MergeFailure(f"no admissible cut found for any of {len(remaining)} holes")
    pieces.append(outer)
    return pieces


def partition(curves: list[ClosedCurve], *, check: bool = True) -> list[ClosedCurve]:
    """Simply connected closed curves covering the region bounded by ``curves``."""
    out: list[ClosedCurve] = []
    for group in sort_curves(curves, check=check):
        inner_groups = sort_curves(list(group.inner), check=False)
        for h in inner_groups:
            out.extend(partition(list(h.inner), check=False))
        out.extend(merge(group.toplevel, [h.toplevel for h in inner_groups]))
    return out


def filled(curves: list[ClosedCurve], z) -> bool:
    """Membership by nesting parity: inside an odd number of the curves."""
    depth = 0
    for c in curves:
        if winding_number(c, z) != 0:
            depth += 1
    return depth % 2 == 1

"""Split a simply connected curved region into pieces of at most four segments."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IntersectionOverlap, RefinementLimitExceeded
from .geometry import (ClosedCurve, CubicSegment, intersections, lerp, refine_midpoints,
                       signed_area, straight_segment, subpath)
from .winding import strictly_inside


@dataclass(frozen=True)
class BezulateLimits:
    max_refinements: int = 8

    def __post_init__(self):
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be at least 1")


def chord_admissible(curve: ClosedCurve, i: int, n: int) -> CubicSegment | None:
    """Straight chord from node ``i`` to node ``i + n`` if it lies inside ``curve``.

    The chord must meet the curve only at its two end nodes and its midpoint
    must be strictly inside.
    """
    m = len(curve)
    a = curve.segments[i % m].p0
    b = curve.segments[(i + n) % m].p0
    if a == b:
        return None
    try:
        hits = intersections(curve, a, b)
    except IntersectionOverlap:
        return None
    if len(hits) != 2:
        return None
    if not strictly_inside(curve, lerp(a, b, 0.5)):
        return None
    return straight_segment(a, b)


def normalize_ccw(curve: ClosedCurve) -> ClosedCurve:
    return curve.reversed() if signed_area(curve) < 0 else curve


def bezulate_with_count(curve: ClosedCurve, limits: BezulateLimits | None = None
                        ) -> tuple[list[ClosedCurve], int, list[CubicSegment]]:
    """Like :func:`bezulate`, also returning the refinement count and the chords cut."""
    limits = limits or BezulateLimits()
    current = normalize_ccw(curve)
    pieces: list[ClosedCurve] = []
    chords: list[CubicSegment] = []
    refinements = 0
    while len(current) > 4:
        found = False
        for n in (3, 2):
            for i in range(len(current)):
                chord = chord_admissible(current, i, n)
                if chord is None:
                    continue
                p = subpath(current, i, i + n)
                q = subpath(current, i + n, i) if n < len(current) else []
                pieces.append(ClosedCurve(p + [chord.reversed()], validate=False))
                current = ClosedCurve([chord] + q, validate=False)
                chords.append(chord)
                found = True
                break
            if found:
                break
        if not found:
            if refinements >= limits.max_refinements:
                raise RefinementLimitExceeded(
                    f"no admissible chord after {refinements} refinements "
                    f"({len(current)} segments)")
            current = refine_midpoints(current)
            refinements += 1
    pieces.append(current)
    return pieces, refinements, chords


def bezulate(curve: ClosedCurve, limits: BezulateLimits | None = None) -> list[ClosedCurve]:
    """Partition the region bounded by ``curve`` into closed curves of 1 to 4 segments.

    Chords between nodes three apart are tried before chords two apart, node
    index ascending, first admissible chord taken.  When none qualifies every
    segment is halved and the scan restarts.  Output is counterclockwise.
    """
    return bezulate_with_count(curve, limits)[0]

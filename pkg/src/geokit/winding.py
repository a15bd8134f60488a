"""Winding numbers of closed piecewise-cubic curves.

A segment whose control box excludes the query point can be deformed into
its chord without sweeping over the point, so only the rare segments whose
box contains the point are subdivided.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Iterable

from .errors import OnBoundary
from .geometry import ClosedCurve, CubicSegment, is_straight, split_segment

_EPS = 2.0 ** -53
_CCW_ERRBOUND = (3.0 + 16.0 * _EPS) * _EPS
STOP_RATIO = 1e-13
MAX_DEPTH = 200


class FillRule(enum.Enum):
    NONZERO = "nonzero"
    EVENODD = "evenodd"


def orient2d(a, b, c) -> int:
    """Sign of the turn a -> b -> c: +1 left, -1 right, 0 colinear (exact)."""
    detleft = (a[0] - c[0]) * (b[1] - c[1])
    detright = (a[1] - c[1]) * (b[0] - c[0])
    det = detleft - detright
    bound = _CCW_ERRBOUND * (abs(detleft) + abs(detright))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    ax, ay, bx, by, cx, cy = (Fraction(v) for v in (a[0], a[1], b[0], b[1], c[0], c[1]))
    exact = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)
    return (exact > 0) - (exact < 0)


def straight_contribution(p, q, z) -> int:
    """Crossing of edge p -> q with the ray from ``z`` toward +x.

    Upward edges (p.y <= z.y < q.y) with ``z`` on their left count +1,
    downward edges with ``z`` on their right count -1.
    """
    o = orient2d(p, q, z)
    if o == 0 and min(p[0], q[0]) <= z[0] <= max(p[0], q[0]) \
            and min(p[1], q[1]) <= z[1] <= max(p[1], q[1]):
        raise OnBoundary(f"point {tuple(z)} lies on edge {tuple(p)} -> {tuple(q)}")
    if p[1] <= z[1] < q[1]:
        return 1 if o > 0 else 0
    if q[1] <= z[1] < p[1]:
        return -1 if o < 0 else 0
    return 0


def _box_diag(seg) -> float:
    xs = (seg[0][0], seg[1][0], seg[2][0], seg[3][0])
    ys = (seg[0][1], seg[1][1], seg[2][1], seg[3][1])
    return math.hypot(max(xs) - min(xs), max(ys) - min(ys))


def curved_contribution(seg: CubicSegment, z, depth: int = MAX_DEPTH,
                        scale: float | None = None) -> int:
    """Winding contribution of one Bézier segment about ``z``.

    Subdivides at the parametric midpoint while ``z`` lies within or on the
    control-point box.  Once the box diagonal drops below
    ``STOP_RATIO * scale`` (or ``depth`` levels are used up) the point is
    indistinguishable from the curve and :class:`OnBoundary` is raised.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if scale is None:
        scale = _box_diag(seg)
    stop = STOP_RATIO * scale
    zx, zy = z[0], z[1]
    total = 0
    stack = [(seg, depth)]
    while stack:
        s, d = stack.pop()
        p0, p1, p2, p3 = s
        if (zx < min(p0[0], p1[0], p2[0], p3[0]) or zx > max(p0[0], p1[0], p2[0], p3[0])
                or zy < min(p0[1], p1[1], p2[1], p3[1]) or zy > max(p0[1], p1[1], p2[1], p3[1])):
            total += straight_contribution(p0, p3, z)
            continue
        if p0 == p1 == p2 == p3:
            if p0[0] == zx and p0[1] == zy:
                raise OnBoundary(f"point {tuple(z)} is a node of the curve")
            continue
        if d == 0 or _box_diag(s) < stop:
            raise OnBoundary(f"point {tuple(z)} is within machine precision of the curve")
        left, right = split_segment(s, 0.5)
        stack.append((left, d - 1))
        stack.append((right, d - 1))
    return total


def winding_number(curve: ClosedCurve, z) -> int:
    box = curve.bbox()
    scale = box.diagonal
    w = 0
    for seg in curve.segments:
        if seg.is_null:
            if seg.p0[0] == z[0] and seg.p0[1] == z[1]:
                raise OnBoundary(f"point {tuple(z)} is a node of the curve")
            continue
        if is_straight(seg):
            w += straight_contribution(seg.p0, seg.p3, z)
        else:
            w += curved_contribution(seg, z, MAX_DEPTH, scale)
    return w


def total_winding(curves: ClosedCurve | Iterable[ClosedCurve], z) -> int:
    if isinstance(curves, ClosedCurve):
        curves = [curves]
    return sum(winding_number(c, z) for c in curves)


def inside(curves: ClosedCurve | Iterable[ClosedCurve], z,
           rule: FillRule = FillRule.NONZERO) -> bool:
    w = total_winding(curves, z)
    if rule is FillRule.EVENODD:
        return w % 2 == 1
    return w != 0


def strictly_inside(curves, z, rule: FillRule = FillRule.NONZERO) -> bool:
    """Like :func:`inside` but points on a boundary count as outside."""
    try:
        return inside(curves, z, rule)
    except OnBoundary:
        return False

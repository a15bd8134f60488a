"""Planar cubic Bézier segments, closed curves and bicubic patches.

Points are plain named tuples so that curves stay cheap to copy and hash.
Patches carry a read-only ``(4, 4, 3)`` numpy array indexed ``[i, j]`` with
``i`` running along ``u`` and ``j`` along ``v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import IntersectionOverlap, OutlineError

PARAM_TOL = 1e-10
DEDUP_TOL = 1e-9
NODE_SNAP = 1e-12


class Point2(NamedTuple):
    x: float
    y: float


class Point3(NamedTuple):
    x: float
    y: float
    z: float


class Rect(NamedTuple):
    min: Point2
    max: Point2

    @property
    def diagonal(self) -> float:
        return math.hypot(self.max.x - self.min.x, self.max.y - self.min.y)

    def contains(self, p, eps: float = 0.0) -> bool:
        return (self.min.x - eps <= p[0] <= self.max.x + eps
                and self.min.y - eps <= p[1] <= self.max.y + eps)

    def union(self, other: Rect) -> Rect:
        return Rect(Point2(min(self.min.x, other.min.x), min(self.min.y, other.min.y)),
                    Point2(max(self.max.x, other.max.x), max(self.max.y, other.max.y)))


class Box3(NamedTuple):
    min: Point3
    max: Point3

    @property
    def diagonal(self) -> float:
        return math.dist(self.min, self.max)


def as_point(p) -> Point2:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise OutlineError(f"non-finite coordinate {p!r}")
    return Point2(x, y)


def lerp(a, b, t: float) -> Point2:
    return Point2(a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def cross(p, q) -> float:
    """Scalar 2D cross product ``p x q``."""
    return p[0] * q[1] - p[1] * q[0]


class CubicSegment(NamedTuple):
    p0: Point2
    p1: Point2
    p2: Point2
    p3: Point2

    @classmethod
    def of(cls, *pts) -> CubicSegment:
        if len(pts) == 1:
            pts = tuple(pts[0])
        if len(pts) != 4:
            raise OutlineError(f"a cubic segment needs 4 control points, got {len(pts)}")
        return cls(*(as_point(p) for p in pts))

    def reversed(self) -> CubicSegment:
        return CubicSegment(self.p3, self.p2, self.p1, self.p0)

    @property
    def is_null(self) -> bool:
        return self.p0 == self.p1 == self.p2 == self.p3


def straight_segment(a, b) -> CubicSegment:
    """Straight cubic from ``a`` to ``b`` with interior points at 1/3 and 2/3."""
    a, b = as_point(a), as_point(b)
    return CubicSegment(a, lerp(a, b, 1 / 3), lerp(a, b, 2 / 3), b)


def null_segment(p) -> CubicSegment:
    p = as_point(p)
    return CubicSegment(p, p, p, p)


def bernstein3(t: float) -> tuple[float, float, float, float]:
    s = 1.0 - t
    return (s * s * s, 3.0 * t * s * s, 3.0 * t * t * s, t * t * t)


def eval_segment(seg: CubicSegment, t: float) -> Point2:
    """Point at parameter ``t`` by de Casteljau's algorithm."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"parameter {t} outside [0, 1]")
    if t == 0.0:
        return seg.p0
    if t == 1.0:
        return seg.p3
    p0, p1, p2, p3 = seg
    a, b, c = lerp(p0, p1, t), lerp(p1, p2, t), lerp(p2, p3, t)
    d, e = lerp(a, b, t), lerp(b, c, t)
    return lerp(d, e, t)


def derivative(seg: CubicSegment, t: float) -> Point2:
    p0, p1, p2, p3 = seg
    s = 1.0 - t
    w0, w1, w2 = 3 * s * s, 6 * s * t, 3 * t * t
    return Point2(w0 * (p1.x - p0.x) + w1 * (p2.x - p1.x) + w2 * (p3.x - p2.x),
                  w0 * (p1.y - p0.y) + w1 * (p2.y - p1.y) + w2 * (p3.y - p2.y))


def split_segment(seg: CubicSegment, t: float = 0.5) -> tuple[CubicSegment, CubicSegment]:
    """Subdivide at ``t``; both halves share the split point exactly."""
    if not 0.0 < t < 1.0:
        raise ValueError(f"split parameter {t} must lie in (0, 1)")
    p0, p1, p2, p3 = seg
    a, b, c = lerp(p0, p1, t), lerp(p1, p2, t), lerp(p2, p3, t)
    d, e = lerp(a, b, t), lerp(b, c, t)
    m = lerp(d, e, t)
    return CubicSegment(p0, a, d, m), CubicSegment(m, e, c, p3)


def segment_piece(seg: CubicSegment, t0: float, t1: float) -> CubicSegment:
    """The part of ``seg`` between parameters ``t0 < t1``."""
    if t0 <= 0.0 and t1 >= 1.0:
        return seg
    if t1 < 1.0:
        seg = split_segment(seg, t1)[0]
        t0 = t0 / t1
    if t0 > 0.0:
        seg = split_segment(seg, t0)[1]
    return seg


def control_bbox(seg: CubicSegment) -> Rect:
    xs = (seg.p0.x, seg.p1.x, seg.p2.x, seg.p3.x)
    ys = (seg.p0.y, seg.p1.y, seg.p2.y, seg.p3.y)
    return Rect(Point2(min(xs), min(ys)), Point2(max(xs), max(ys)))


def _extrema_params(c0, c1, c2, c3) -> list[float]:
    # derivative / 3 = a t^2 + b t + c
    from .roots import solve_quadratic

    a = -c0 + 3 * c1 - 3 * c2 + c3
    b = 2 * (c0 - 2 * c1 + c2)
    c = c1 - c0
    if a == 0 and b == 0:
        return []
    return [t for t in solve_quadratic((c, b, a)) if 0.0 < t < 1.0]


def segment_bbox(seg: CubicSegment) -> Rect:
    """Tight bounding box from the endpoints and the interior extrema."""
    ts = [0.0, 1.0]
    ts += _extrema_params(*(p.x for p in seg))
    ts += _extrema_params(*(p.y for p in seg))
    pts = [eval_segment(seg, t) for t in ts]
    return Rect(Point2(min(p.x for p in pts), min(p.y for p in pts)),
                Point2(max(p.x for p in pts), max(p.y for p in pts)))


def is_straight(seg: CubicSegment, rtol: float = 1e-12) -> bool:
    """Colinear control points in index order with a nonvanishing derivative."""
    p0, p1, p2, p3 = seg
    chord = (p3.x - p0.x, p3.y - p0.y)
    length2 = chord[0] ** 2 + chord[1] ** 2
    if length2 == 0.0:
        return False
    diffs = [(q.x - p.x, q.y - p.y) for p, q in ((p0, p1), (p1, p2), (p2, p3))]
    for d in diffs:
        if abs(cross(chord, d)) > rtol * length2:
            return False
        if chord[0] * d[0] + chord[1] * d[1] < 0.0:
            return False
    # derivative 3[(1-t)^2 d0 + 2t(1-t) d1 + t^2 d2] vanishes only when an end difference does
    return diffs[0] != (0.0, 0.0) and diffs[2] != (0.0, 0.0)


# --- closed curves -------------------------------------------------------

class ClosedCurve:
    """Closed piecewise-cubic curve whose consecutive segments share nodes exactly."""

    __slots__ = ("segments",)

    def __init__(self, segments: Iterable, *, validate: bool = True):
        segs = tuple(s if isinstance(s, CubicSegment) else CubicSegment.of(*s) for s in segments)
        if not segs:
            raise OutlineError("a closed curve needs at least one segment")
        if validate:
            for k, s in enumerate(segs):
                for p in s:
                    if not (math.isfinite(p.x) and math.isfinite(p.y)):
                        raise OutlineError(f"segment {k} has a non-finite coordinate")
                nxt = segs[(k + 1) % len(segs)]
                if s.p3 != nxt.p0:
                    raise OutlineError(
                        f"segment {k} ends at {tuple(s.p3)} but segment "
                        f"{(k + 1) % len(segs)} starts at {tuple(nxt.p0)}")
        self.segments = segs

    @classmethod
    def from_polygon(cls, vertices: Sequence) -> ClosedCurve:
        pts = [as_point(v) for v in vertices]
        return cls(straight_segment(pts[k], pts[(k + 1) % len(pts)]) for k in range(len(pts)))

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def __getitem__(self, k):
        return self.segments[k]

    def __eq__(self, other) -> bool:
        return isinstance(other, ClosedCurve) and self.segments == other.segments

    def __hash__(self) -> int:
        return hash(self.segments)

    def __repr__(self) -> str:
        return f"ClosedCurve({len(self.segments)} segments)"

    @property
    def nodes(self) -> list[Point2]:
        return [s.p0 for s in self.segments]

    def reversed(self) -> ClosedCurve:
        return ClosedCurve((s.reversed() for s in reversed(self.segments)), validate=False)

    def rotated(self, k: int) -> ClosedCurve:
        """Same curve with node ``k`` as the first node."""
        k %= len(self.segments)
        return ClosedCurve(self.segments[k:] + self.segments[:k], validate=False)

    def bbox(self) -> Rect:
        box = control_bbox(self.segments[0])
        for s in self.segments[1:]:
            box = box.union(control_bbox(s))
        return box

    def to_lists(self) -> list:
        return [[list(p) for p in s] for s in self.segments]


def without_nulls(curve: ClosedCurve) -> ClosedCurve:
    segs = [s for s in curve.segments if not s.is_null]
    return ClosedCurve(segs, validate=False) if segs else curve


def _area_kernel():
    # K[i][j] = integral over [0,1] of B_i(t) B_j'(t) dt, computed exactly
    from math import comb

    def poly_b(i):
        c = [Fraction(0)] * 4
        for k in range(3 - i + 1):
            c[i + k] += Fraction(comb(3, i) * comb(3 - i, k) * (-1) ** k)
        return c

    def mul(a, b):
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    basis = [poly_b(i) for i in range(4)]
    dbasis = [[k * c for k, c in enumerate(b)][1:] for b in basis]
    return [[float(sum(c / (k + 1) for k, c in enumerate(mul(basis[i], dbasis[j]))))
             for j in range(4)] for i in range(4)]


_AREA_K = _area_kernel()


def segment_area(seg: CubicSegment) -> float:
    """Contribution ``1/2 integral (x dy - y dx)`` of one segment."""
    total = 0.0
    for i, pi in enumerate(seg):
        row = _AREA_K[i]
        for j, pj in enumerate(seg):
            total += row[j] * (pi.x * pj.y - pi.y * pj.x)
    return 0.5 * total


def signed_area(curve: ClosedCurve) -> float:
    return math.fsum(segment_area(s) for s in curve.segments)


def subpath(curve: ClosedCurve, i: int, j: int) -> list[CubicSegment]:
    """Segments from node ``i`` forward to node ``j`` (indices modulo the node count)."""
    n = len(curve)
    i %= n
    j %= n
    if i == j:
        raise ValueError("subpath needs two distinct nodes")
    count = (j - i) % n
    return [curve.segments[(i + k) % n] for k in range(count)]


def refine_midpoints(curve: ClosedCurve) -> ClosedCurve:
    out = []
    for s in curve.segments:
        out.extend(split_segment(s, 0.5))
    return ClosedCurve(out, validate=False)


# --- parameters in node units ------------------------------------------

def locate(curve: ClosedCurve, T: float) -> tuple[int, float]:
    """Map a node-unit parameter to ``(segment index, local t)`` with node snapping."""
    n = len(curve)
    T = T % n
    k = int(math.floor(T))
    t = T - k
    if k >= n:
        k, t = 0, 0.0
    if t < NODE_SNAP:
        t = 0.0
    elif t > 1.0 - NODE_SNAP:
        k, t = (k + 1) % n, 0.0
    return k, t


def curve_point(curve: ClosedCurve, T: float) -> Point2:
    k, t = locate(curve, T)
    return eval_segment(curve.segments[k], t)


def subpath_between(curve: ClosedCurve, T0: float, T1: float,
                    start=None, end=None) -> list[CubicSegment]:
    """Segments running forward from parameter ``T0`` to ``T1`` (node units).

    ``T1`` is taken modulo the curve length ahead of ``T0``; equal parameters
    give the full loop. Endpoints are snapped to ``start``/``end`` when given
    so that callers can share split points bitwise.
    """
    n = len(curve)
    k0, t0 = locate(curve, T0)
    k1, t1 = locate(curve, T1)
    a = k0 + t0
    b = k1 + t1
    if b <= a:
        b += n
    out: list[CubicSegment] = []
    pos = a
    while pos < b - 1e-15:
        k = int(math.floor(pos + 1e-15))
        lt0 = max(0.0, pos - k)
        lt1 = min(1.0, b - k)
        if lt1 - lt0 > 0.0:
            piece = segment_piece(curve.segments[k % n], lt0, lt1)
            out.append(piece)
        pos = k + 1.0
    if not out:
        return out
    if start is not None:
        s = out[0]
        out[0] = CubicSegment(as_point(start), s.p1, s.p2, s.p3)
    if end is not None:
        s = out[-1]
        out[-1] = CubicSegment(s.p0, s.p1, s.p2, as_point(end))
    return out


# --- curve / line-segment intersection ---------------------------------

class Hit(NamedTuple):
    segment: int
    t: float
    s: float  # parameter along the query segment
    point: Point2


def _split_scalar(c):
    c0, c1, c2, c3 = c
    a, b, d = (c0 + c1) / 2, (c1 + c2) / 2, (c2 + c3) / 2
    e, f = (a + b) / 2, (b + d) / 2
    m = (e + f) / 2
    return (c0, a, e, m), (m, f, d, c3)


def _bernstein_value(c, t):
    s = 1.0 - t
    return c[0] * s * s * s + 3 * c[1] * t * s * s + 3 * c[2] * t * t * s + c[3] * t * t * t


def _bracketed_root(d, lo, hi):
    """Root in ``[lo, hi]`` of the local Bernstein cubic ``d`` (``d[0]``, ``d[3]`` of opposite sign).

    Bisection runs on ``d`` itself so that the bracketing signs are exactly
    the ones the isolation step saw.
    """
    a, b = 0.0, 1.0
    fa = d[0]
    for _ in range(200):
        m = 0.5 * (a + b)
        if m in (a, b) or (b - a) * (hi - lo) <= 1e-16:
            break
        fm = _bernstein_value(d, m)
        if fm == 0.0:
            return lo + m * (hi - lo)
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return lo + 0.5 * (a + b) * (hi - lo)


def bernstein_roots(c, tol: float = PARAM_TOL) -> list[float]:
    """Parameters in ``(0, 1)`` where the cubic Bernstein polynomial ``c`` vanishes.

    Isolation by de Casteljau subdivision (variation diminishing property);
    a single sign change of the control polygon brackets exactly one root,
    which is then refined by bisection on that local piece.
    """
    out: list[float] = []
    stack = [(tuple(c), 0.0, 1.0)]
    while stack:
        d, lo, hi = stack.pop()
        mn, mx = min(d), max(d)
        if not (mn < 0.0 < mx):
            continue
        if hi - lo <= tol:
            out.append(0.5 * (lo + hi))
            continue
        nz = [v for v in d if v != 0.0]
        changes = sum(1 for u, v in zip(nz, nz[1:]) if (u > 0) != (v > 0))
        if changes == 1 and d[0] != 0.0 and d[3] != 0.0:
            out.append(_bracketed_root(d, lo, hi))
            continue
        left, right = _split_scalar(d)
        mid = 0.5 * (lo + hi)
        if left[3] == 0.0:
            out.append(mid)
        stack.append((left, lo, mid))
        stack.append((right, mid, hi))
    return sorted(out)


def _canonical_node(curve: ClosedCurve, k: int) -> int:
    n = len(curve)
    for _ in range(n):
        if not curve.segments[k % n].is_null:
            return k % n
        k += 1
    return k % n


def intersections(curve: ClosedCurve, a, b) -> list[Hit]:
    """All points where ``curve`` meets the closed line segment ``ab``.

    Hits within ``DEDUP_TOL`` in parameter on one segment are merged and
    hits at a node are reported once, as ``t = 0`` of the segment leaving
    it.  Raises :class:`IntersectionOverlap` when a segment runs along
    ``ab`` for a positive length.
    """
    a, b = as_point(a), as_point(b)
    if a == b:
        raise ValueError("query segment has zero length")
    dx, dy = b.x - a.x, b.y - a.y
    len2 = dx * dx + dy * dy
    qbox = Rect(Point2(min(a.x, b.x), min(a.y, b.y)), Point2(max(a.x, b.x), max(a.y, b.y)))
    raw: list[tuple[int, float]] = []
    for k, seg in enumerate(curve.segments):
        if seg.is_null:
            continue
        box = control_bbox(seg)
        if (box.max.x < qbox.min.x or box.min.x > qbox.max.x
                or box.max.y < qbox.min.y or box.min.y > qbox.max.y):
            continue
        c = tuple(dx * (p.y - a.y) - dy * (p.x - a.x) for p in seg)
        if c[0] == c[1] == c[2] == c[3] == 0.0:
            ss = [((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 for p in seg]
            lo, hi = max(min(ss), 0.0), min(max(ss), 1.0)
            if hi > lo:
                raise IntersectionOverlap(f"segment {k} overlaps the query segment")
            if hi == lo:
                if ss[0] == lo:
                    raw.append((k, 0.0))
                elif ss[3] == lo:
                    raw.append((k, 1.0))
            continue
        if c[0] == 0.0:
            raw.append((k, 0.0))
        if c[3] == 0.0:
            raw.append((k, 1.0))
        raw.extend((k, t) for t in bernstein_roots(c))

    hits: list[tuple[int, float]] = []
    for k, t in raw:
        if t <= DEDUP_TOL:
            hits.append((_canonical_node(curve, k), 0.0))
        elif t >= 1.0 - DEDUP_TOL:
            hits.append((_canonical_node(curve, k + 1), 0.0))
        else:
            hits.append((k, t))
    hits.sort()

    clusters: list[list[tuple[int, float]]] = []
    for h in hits:
        if clusters and clusters[-1][-1][0] == h[0] and h[1] - clusters[-1][-1][1] <= DEDUP_TOL:
            clusters[-1].append(h)
        else:
            clusters.append([h])

    out: list[Hit] = []
    tol_s = 1e-9
    for cl in clusters:
        k, t = cl[len(cl) // 2]
        if any(tt == 0.0 for _, tt in cl):
            t = 0.0
        p = eval_segment(curve.segments[k], t)
        s = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2
        if -tol_s <= s <= 1.0 + tol_s:
            out.append(Hit(k, t, min(max(s, 0.0), 1.0), p))
    return out


# --- simplicity ----------------------------------------------------------

def _boxes_overlap(r1: Rect, r2: Rect) -> bool:
    return not (r1.max.x < r2.min.x or r2.max.x < r1.min.x
                or r1.max.y < r2.min.y or r2.max.y < r1.min.y)


def _shared_corners(s1: CubicSegment, s2: CubicSegment):
    out = []
    for ta, pa in ((0.0, s1.p0), (1.0, s1.p3)):
        for tb, pb in ((0.0, s2.p0), (1.0, s2.p3)):
            if pa == pb:
                out.append((ta, tb))
    return out


def segments_meet(s1: CubicSegment, s2: CubicSegment, *, ignore_shared: bool = True,
                  tol: float = DEDUP_TOL, budget: int = 20000) -> bool:
    """True if the two segments intersect anywhere other than at shared end nodes.

    Recursive control-box subdivision down to ``tol`` in parameter.  Leaf
    pairs within ``100 * tol`` of a shared end node are ignored.  Runaway
    subdivision (overlapping stretches) counts as an intersection.
    """
    shared = _shared_corners(s1, s2) if ignore_shared else []
    near = 100 * tol
    stack = [(s1, 0.0, 1.0, s2, 0.0, 1.0)]
    work = 0
    while stack:
        a, a0, a1, b, b0, b1 = stack.pop()
        if not _boxes_overlap(control_bbox(a), control_bbox(b)):
            continue
        work += 1
        if work > budget:
            return True
        wa, wb = a1 - a0, b1 - b0
        if wa <= tol and wb <= tol:
            ta, tb = 0.5 * (a0 + a1), 0.5 * (b0 + b1)
            if any(abs(ta - ca) <= near and abs(tb - cb) <= near for ca, cb in shared):
                continue
            return True
        if wa >= wb:
            l, r = split_segment(a, 0.5)
            m = 0.5 * (a0 + a1)
            stack.append((l, a0, m, b, b0, b1))
            stack.append((r, m, a1, b, b0, b1))
        else:
            l, r = split_segment(b, 0.5)
            m = 0.5 * (b0 + b1)
            stack.append((a, a0, a1, l, b0, m))
            stack.append((a, a0, a1, r, m, b1))
    return False


def _monotone(seg: CubicSegment) -> bool:
    """Nonzero control differences lie in an open half-plane, so some direction
    increases strictly along the segment and it cannot cross itself."""
    ds = [(b[0] - a[0], b[1] - a[1]) for a, b in zip(seg[:-1], seg[1:])]
    ds = [d for d in ds if d != (0.0, 0.0)]
    if not ds:
        return True
    angles = sorted(math.atan2(d[1], d[0]) for d in ds)
    gaps = [b - a for a, b in zip(angles, angles[1:])]
    gaps.append(angles[0] + 2.0 * math.pi - angles[-1])
    return max(gaps) > math.pi


def segment_self_intersects(seg: CubicSegment, max_depth: int = 24) -> bool:
    """True if the segment crosses or touches itself away from a shared end point."""
    stack = [(seg, 0)]
    while stack:
        s, depth = stack.pop()
        if _monotone(s) or depth >= max_depth:
            continue
        left, right = split_segment(s, 0.5)
        if segments_meet(left, right):
            return True
        stack.append((left, depth + 1))
        stack.append((right, depth + 1))
    return False


def is_simple(curve: ClosedCurve) -> bool:
    """No two segments meet except at common end nodes.

    A curve may pass through the same node twice (a pinch point); segments
    may touch there but must not cross or overlap elsewhere.
    """
    segs = [s for s in curve.segments if not s.is_null]
    if not segs:
        return False
    if any(segment_self_intersects(s) for s in segs):
        return False
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            if segments_meet(segs[i], segs[j]):
                return False
    return True


def curves_intersect(c1: ClosedCurve, c2: ClosedCurve) -> bool:
    if not _boxes_overlap(c1.bbox(), c2.bbox()):
        return False
    for s1 in c1.segments:
        if s1.is_null:
            continue
        for s2 in c2.segments:
            if s2.is_null:
                continue
            if segments_meet(s1, s2, ignore_shared=False):
                return True
    return False


# --- patches -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Patch:
    """Bicubic Bézier patch with control net ``control[i, j]`` (shape 4x4x3)."""

    control: np.ndarray
    orientation: int = 1

    def __post_init__(self):
        arr = np.array(self.control, dtype=float)
        if arr.shape == (4, 4, 2):
            arr = np.concatenate([arr, np.zeros((4, 4, 1))], axis=2)
        if arr.shape != (4, 4, 3):
            raise ValueError(f"control net must have shape (4, 4, 3), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("control net has non-finite coordinates")
        arr.setflags(write=False)
        object.__setattr__(self, "control", arr)
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    def corners(self) -> np.ndarray:
        c = self.control
        return np.array([c[0, 0], c[3, 0], c[3, 3], c[0, 3]])

    def with_orientation(self, orientation: int) -> Patch:
        return Patch(self.control, orientation)


def bernstein_matrix(ts) -> np.ndarray:
    ts = np.asarray(ts, dtype=float)
    s = 1.0 - ts
    return np.stack([s ** 3, 3 * ts * s * s, 3 * ts * ts * s, ts ** 3], axis=-1)


def eval_patch(patch: Patch, u: float, v: float) -> np.ndarray:
    bu = np.array(bernstein3(u))
    bv = np.array(bernstein3(v))
    return np.einsum("i,j,ijk->k", bu, bv, patch.control)


def sample_patch(patch: Patch, us, vs) -> np.ndarray:
    """Surface points on the grid ``us x vs``; shape ``(len(us), len(vs), 3)``."""
    return np.einsum("ai,bj,ijk->abk", bernstein_matrix(us), bernstein_matrix(vs), patch.control)


def patch_boundary(patch: Patch) -> ClosedCurve:
    """The four planar edge curves, counterclockwise in parameter space."""
    c = patch.control[:, :, :2]
    pts = [[Point2(float(x), float(y)) for x, y in row] for row in c.tolist()]
    s0 = CubicSegment(*(pts[i][0] for i in range(4)))
    s1 = CubicSegment(*(pts[3][j] for j in range(4)))
    s2 = CubicSegment(*(pts[3 - i][3] for i in range(4)))
    s3 = CubicSegment(*(pts[0][3 - j] for j in range(4)))
    return ClosedCurve([s0, s1, s2, s3], validate=False)

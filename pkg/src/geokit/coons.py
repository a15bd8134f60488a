"""Coons patches from closed curves of at most four segments, with degeneracy repair.

A patch is degenerate when its Jacobian changes sign on the unit square.
The 36 Bernstein coefficients ``T[p, q]`` of the (degree 5 x 5) Jacobian
sharing one sign is a sufficient test.  Boundary degeneracy is located
exactly: along ``v = 0`` the Jacobian is ``3 f(u)`` with ``f`` a quintic, so
its interior minima are roots of the quartic ``f'``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .bezulate import bezulate, normalize_ccw
from .errors import BisectorMiss, IntersectionOverlap, SplitDepthExceeded
from .geometry import (ClosedCurve, CubicSegment, Patch, bernstein_matrix, curve_point,
                       derivative, intersections, is_straight, locate, null_segment,
                       refine_midpoints, signed_area, straight_segment, subpath_between,
                       without_nulls)
from .roots import roots_in_open_unit_interval

ZERO_RTOL = 1e-12
MAX_SPLIT_DEPTH = 16
PROBE_GRID = 41
REFLEX_TOL = 1e-12
CUSP_TOL = 1e-9  # tangents this close to antiparallel form a cusp, not a reflex node
SLIVER_RTOL = 1e-7  # pieces thinner than this (relative to the input size) are dropped
# boundary cuts this close (in parameter) to a corner only shave slivers off it
CORNER_MARGIN = 0.02

# M[i][j] = (B_i'' B_j + B_i' B_j') / 3, ascending powers of u.
M_TABLE = (
    ((5, -20, 30, -20, 5), (-3, 24, -54, 48, -15), (0, -6, 27, -36, 15), (0, 0, -3, 8, -5)),
    ((-7, 36, -66, 52, -15), (3, -36, 108, -120, 45), (0, 6, -45, 84, -45), (0, 0, 3, -16, 15)),
    ((2, -18, 45, -44, 15), (0, 12, -63, 96, -45), (0, 0, 18, -60, 45), (0, 0, 0, 8, -15)),
    ((0, 2, -9, 12, -5), (0, 0, 9, -24, 15), (0, 0, 0, 12, -15), (0, 0, 0, 0, 5)),
)
_M = np.array(M_TABLE, dtype=float)


def _cross(p, q) -> float:
    return p[0] * q[1] - p[1] * q[0]


# --- node tangents and reflex splitting ------------------------------------

def _out_tangent(seg: CubicSegment):
    for q in (seg.p1, seg.p2, seg.p3):
        d = (q[0] - seg.p0[0], q[1] - seg.p0[1])
        if d != (0.0, 0.0):
            return d
    return None


def _in_tangent(seg: CubicSegment):
    for q in (seg.p2, seg.p1, seg.p0):
        d = (seg.p3[0] - q[0], seg.p3[1] - q[1])
        if d != (0.0, 0.0):
            return d
    return None


def node_tangents(curve: ClosedCurve, k: int):
    """Incoming and outgoing tangent directions at node ``k``, skipping null segments."""
    n = len(curve)
    t_in = t_out = None
    for step in range(n):
        t_in = _in_tangent(curve.segments[(k - 1 - step) % n])
        if t_in is not None:
            break
    for step in range(n):
        t_out = _out_tangent(curve.segments[(k + step) % n])
        if t_out is not None:
            break
    return t_in, t_out


def turn_angle(curve: ClosedCurve, k: int) -> float:
    """Signed turn from the incoming to the outgoing tangent at node ``k``."""
    t_in, t_out = node_tangents(curve, k)
    if t_in is None or t_out is None:
        return 0.0
    c = _cross(t_in, t_out)
    d = t_in[0] * t_out[0] + t_in[1] * t_out[1]
    a = math.atan2(c, d)
    if math.pi - abs(a) <= CUSP_TOL:
        return math.pi
    return a


def interior_angle(curve: ClosedCurve, k: int) -> float:
    """Interior angle at node ``k`` of a counterclockwise curve, in radians."""
    return math.pi - turn_angle(curve, k)


def reflex_nodes(curve: ClosedCurve) -> list[int]:
    return [k for k in range(len(curve))
            if not curve.segments[k].is_null and turn_angle(curve, k) < -REFLEX_TOL]


def _ray_length(curve: ClosedCurve) -> float:
    return 4.0 * curve.bbox().diagonal + 1.0


def split_along_ray(curve: ClosedCurve, T: float, direction, error=BisectorMiss):
    """Cut ``curve`` by the segment from its point at parameter ``T`` along ``direction``
    to the first boundary point the ray meets.  Returns the two closed curves."""
    q = curve_point(curve, T)
    norm = math.hypot(*direction)
    if norm == 0.0:
        raise error("zero-length split direction")
    L = _ray_length(curve) / norm
    far = (q[0] + L * direction[0], q[1] + L * direction[1])
    try:
        hits = intersections(curve, q, far)
    except IntersectionOverlap as exc:
        raise error(f"split ray overlaps the boundary: {exc}") from exc
    k0, t0 = locate(curve, T)
    here = k0 + t0
    ahead = [h for h in hits if h.s > 1e-9
             and abs((h.segment + h.t) - here) > 1e-12 and h.point != q]
    if not ahead:
        raise error(f"split ray from {tuple(q)} found no boundary intersection")
    h = min(ahead, key=lambda x: x.s)
    T_h = h.segment + h.t
    hp = curve_point(curve, T_h)
    chord = straight_segment(q, hp)
    first = subpath_between(curve, T, T_h, start=q, end=hp)
    second = subpath_between(curve, T_h, T, start=hp, end=q)
    return (ClosedCurve(first + [chord.reversed()], validate=False),
            ClosedCurve(second + [chord], validate=False))


def _split_reflex_once(curve: ClosedCurve, k: int):
    t_in, t_out = node_tangents(curve, k)
    phi = interior_angle(curve, k)
    a = math.atan2(t_out[1], t_out[0]) + 0.5 * phi
    return split_along_ray(curve, float(k), (math.cos(a), math.sin(a)))


def split_reflex_nodes(curve: ClosedCurve, max_splits: int = 64) -> list[ClosedCurve]:
    """Cut every reflex node along its interior angle bisector.

    Pieces can exceed four segments; callers re-run bezulate on those.
    """
    todo = [normalize_ccw(curve)]
    done: list[ClosedCurve] = []
    splits = 0
    while todo:
        c = todo.pop(0)
        reflex = reflex_nodes(c)
        if not reflex:
            done.append(c)
            continue
        if splits >= max_splits:
            raise BisectorMiss(f"reflex splitting did not settle after {splits} cuts")
        todo.extend(_split_reflex_once(c, reflex[0]))
        splits += 1
    return done


# --- padding and the Coons net ---------------------------------------------

def pad_to_four(curve: ClosedCurve) -> ClosedCurve:
    """Insert null segments at the widest nodes until there are exactly four segments."""
    n = len(curve)
    if n > 4:
        raise ValueError(f"curve has {n} segments; at most 4 allowed")
    if n == 4:
        return curve
    order = sorted(range(n), key=lambda k: (-interior_angle(curve, k), k))
    picks = [order[i % n] for i in range(4 - n)]
    segs: list[CubicSegment] = []
    for k, s in enumerate(curve.segments):
        segs.extend(null_segment(s.p0) for _ in range(picks.count(k)))
        segs.append(s)
    return ClosedCurve(segs, validate=False)


def _net_from_curve(curve: ClosedCurve) -> np.ndarray:
    s0, s1, s2, s3 = curve.segments
    P = np.zeros((4, 4, 2))
    for i in range(4):
        P[i, 0] = s0[i]
        P[3, i] = s1[i]
        P[3 - i, 3] = s2[i]
        P[0, 3 - i] = s3[i]
    return P


def coons_interior(P: np.ndarray) -> np.ndarray:
    """Fill the four interior points of ``P`` from its twelve boundary points."""
    P = np.array(P, dtype=float)
    P[1, 1] = (-4 * P[0, 0] + 6 * (P[0, 1] + P[1, 0]) - 2 * (P[0, 3] + P[3, 0])
               + 3 * (P[3, 1] + P[1, 3]) - P[3, 3]) / 9
    P[1, 2] = (-4 * P[0, 3] + 6 * (P[0, 2] + P[1, 3]) - 2 * (P[0, 0] + P[3, 3])
               + 3 * (P[3, 2] + P[1, 0]) - P[3, 0]) / 9
    P[2, 1] = (-4 * P[3, 0] + 6 * (P[3, 1] + P[2, 0]) - 2 * (P[3, 3] + P[0, 0])
               + 3 * (P[0, 1] + P[2, 3]) - P[0, 3]) / 9
    P[2, 2] = (-4 * P[3, 3] + 6 * (P[3, 2] + P[2, 3]) - 2 * (P[3, 0] + P[0, 3])
               + 3 * (P[0, 2] + P[2, 0]) - P[0, 0]) / 9
    return P


def coons_patch(curve: ClosedCurve) -> Patch:
    if len(curve) != 4:
        raise ValueError(f"Coons patch needs exactly 4 segments, got {len(curve)}")
    return Patch(coons_interior(_net_from_curve(curve)))


# --- Jacobian and the T table -----------------------------------------------

def _dbernstein(t: float) -> np.ndarray:
    s = 1.0 - t
    return np.array([-3 * s * s, 3 * s * s - 6 * t * s, 6 * t * s - 3 * t * t, 3 * t * t])


def partials(patch: Patch, u: float, v: float):
    P = patch.control
    bu, bv = bernstein_matrix(u), bernstein_matrix(v)
    du, dv = _dbernstein(u), _dbernstein(v)
    su = np.einsum("i,j,ijk->k", du, bv, P)
    sv = np.einsum("i,j,ijk->k", bu, dv, P)
    return su, sv


def jacobian(patch: Patch, u: float, v: float) -> float:
    """``x_u y_v - y_u x_v`` of the planar projection; 1 for the unit-square patch."""
    su, sv = partials(patch, u, v)
    return float(su[0] * sv[1] - su[1] * sv[0])


def tpq_table(patch: Patch) -> np.ndarray:
    """Degree-5 Bernstein-type coefficients of the Jacobian.

    ``J(u, v) = sum T[p, q] u^p v^q (1-u)^(5-p) (1-v)^(5-q)``; the factor 9
    from the two degree-lowering derivatives is included.
    """
    P = patch.control[:, :, :2]
    U = P[1:, :, :] - P[:-1, :, :]   # (3, 4, 2)
    V = P[:, 1:, :] - P[:, :-1, :]   # (4, 3, 2)
    T = np.zeros((6, 6))
    for i in range(3):
        for j in range(4):
            for k in range(4):
                for l in range(3):
                    c = U[i, j, 0] * V[k, l, 1] - U[i, j, 1] * V[k, l, 0]
                    T[i + k, j + l] += c * comb(2, i) * comb(3, k) * comb(3, j) * comb(2, l)
    return 9.0 * T


def reconstruct_jacobian(T: np.ndarray, u: float, v: float) -> float:
    pu = np.array([u ** p * (1 - u) ** (5 - p) for p in range(6)])
    pv = np.array([v ** q * (1 - v) ** (5 - q) for q in range(6)])
    return float(pu @ T @ pv)


def table_sign(T: np.ndarray) -> int:
    """+1 or -1 if all strict entries share that sign, else 0.

    Entries within ``ZERO_RTOL * max|T|`` of zero count as neutral.
    """
    big = float(np.max(np.abs(T)))
    if big == 0.0:
        return 0
    tol = ZERO_RTOL * big
    pos = bool(np.any(T > tol))
    neg = bool(np.any(T < -tol))
    if pos and not neg:
        return 1
    if neg and not pos:
        return -1
    return 0


def is_nondegenerate(patch: Patch) -> bool:
    return table_sign(tpq_table(patch)) != 0


# --- boundary scan -----------------------------------------------------------

def rotate_net(P: np.ndarray) -> np.ndarray:
    """Reindex so the edge at ``u = 1`` becomes the edge at ``v = 0``."""
    return np.asarray(P)[::-1].transpose(1, 0, 2)


def canonical_edge(patch: Patch, edge: int) -> np.ndarray:
    """Control net rotated so that ``edge`` (0..3 counterclockwise from ``v = 0``) sits at ``v = 0``."""
    P = patch.control
    for _ in range(edge % 4):
        P = rotate_net(P)
    return P


def _edge_products(P: np.ndarray) -> np.ndarray:
    c = np.zeros((4, 4))
    for i in range(4):
        for j in range(4):
            d = P[j, 1] - P[j, 0]
            c[i, j] = P[i, 0, 0] * d[1] - P[i, 0, 1] * d[0]
    return c


def boundary_f(P: np.ndarray, u: float) -> float:
    """The quintic ``f`` whose triple is the Jacobian along ``v = 0``."""
    return float(_dbernstein(u) @ _edge_products(P) @ bernstein_matrix(u))


def boundary_fprime_coeffs(P: np.ndarray) -> np.ndarray:
    """Ascending coefficients of the quartic ``f'`` built from the M table."""
    return 3.0 * np.einsum("ij,ijk->k", _edge_products(P), _M)


def _scale2(patch: Patch) -> float:
    P = patch.control[:, :, :2].reshape(-1, 2)
    d = float(np.hypot(*(P.max(axis=0) - P.min(axis=0))))
    return d * d


def boundary_degeneracy(patch: Patch, edge: int) -> tuple[float, float] | None:
    """``(u*, J)`` at the most negative interior critical point of J along ``edge``.

    ``u*`` is measured along the edge in the curve's direction.  Returns None
    when the edge is a point or J is nonnegative at every critical point.
    """
    P = canonical_edge(patch, edge)
    row = P[:, 0, :2]
    if np.all(row == row[0]):
        return None
    tol = ZERO_RTOL * _scale2(patch)
    best = None
    for u in roots_in_open_unit_interval(boundary_fprime_coeffs(P)):
        J = 3.0 * boundary_f(P, u)
        if J < -tol and (best is None or J < best[1]):
            best = (u, J)
    return best


def worst_boundary_point(patch: Patch) -> tuple[int, float, float] | None:
    """``(edge, u*, J)`` for the most negative boundary Jacobian over all edges."""
    best = None
    for e in range(4):
        r = boundary_degeneracy(patch, e)
        if r is not None and (best is None or r[1] < best[2]):
            best = (e, r[0], r[1])
    return best


@dataclass
class CoonsDiagnostics:
    T: np.ndarray
    boundary_f_coeffs: list = field(default_factory=list)
    min_jacobian_probe: tuple | None = None


def diagnostics(patch: Patch, grid: int = PROBE_GRID) -> CoonsDiagnostics:
    coeffs = [boundary_fprime_coeffs(canonical_edge(patch, e)) for e in range(4)]
    return CoonsDiagnostics(tpq_table(patch), coeffs, min_jacobian(patch, grid))


def min_jacobian(patch: Patch, grid: int = PROBE_GRID) -> tuple[float, float, float]:
    """``(u, v, J)`` at the smallest Jacobian on a ``grid x grid`` probe lattice."""
    ts = np.linspace(0.0, 1.0, grid)
    P = patch.control[:, :, :2]
    B, D = bernstein_matrix(ts), np.array([_dbernstein(t) for t in ts])
    su = np.einsum("ai,bj,ijk->abk", D, B, P)
    sv = np.einsum("ai,bj,ijk->abk", B, D, P)
    J = su[..., 0] * sv[..., 1] - su[..., 1] * sv[..., 0]
    a, b = np.unravel_index(int(np.argmin(J)), J.shape)
    return float(ts[a]), float(ts[b]), float(J[a, b])


def probe_accepts(patch: Patch) -> bool:
    """Accept a mixed-sign table when the edges pass the boundary scan and a
    probe grid shows a clearly positive Jacobian."""
    if worst_boundary_point(patch) is not None:
        return False
    return min_jacobian(patch)[2] > 1e-9 * _scale2(patch)


# --- repair ------------------------------------------------------------------

@dataclass
class RepairResult:
    kept: list[Patch]
    discarded: list[Patch]
    history: list[str]
    regions: list[ClosedCurve]


def _inward(d):
    return (-d[1], d[0])


def _perimeter(curve: ClosedCurve) -> float:
    # control polygon length, an upper bound on the arc length
    return math.fsum(math.dist(s.p0, s.p1) + math.dist(s.p1, s.p2) + math.dist(s.p2, s.p3)
                     for s in curve.segments)


def _normalize(curve: ClosedCurve, scale: float | None = None) -> list[ClosedCurve]:
    """Counterclockwise, reflex-free curves of one to four segments covering ``curve``.

    Slivers, pieces whose mean width (area over perimeter) is negligible
    relative to ``scale`` (default: the curve's own bbox diagonal), are
    dropped; they come from cuts running nearly along the boundary.
    """
    if scale is None:
        scale = curve.bbox().diagonal
    width = SLIVER_RTOL * scale
    todo = [without_nulls(curve)]
    out = []
    guard = 0
    while todo:
        guard += 1
        if guard > 1000:
            raise SplitDepthExceeded("curve normalization did not settle")
        c = todo.pop(0)
        if abs(signed_area(c)) <= width * _perimeter(c):
            continue
        c = normalize_ccw(c)
        if len(c) == 1:
            c = refine_midpoints(c)
        if len(c) > 4:
            todo.extend(bezulate(c))
            continue
        if reflex_nodes(c):
            todo.extend(split_reflex_nodes(c))
            continue
        out.append(c)
    return out


def _side_split(curve: ClosedCurve):
    """Perpendicular cut from the midpoint of the longest nonstraight side."""
    def length(s):
        return math.dist(s.p0, s.p1) + math.dist(s.p1, s.p2) + math.dist(s.p2, s.p3)

    sides = [k for k, s in enumerate(curve.segments) if not s.is_null]
    curved = [k for k in sides if not is_straight(curve.segments[k])]
    k = max(curved or sides, key=lambda i: (length(curve.segments[i]), -i))
    d = derivative(curve.segments[k], 0.5)
    return split_along_ray(curve, k + 0.5, _inward(d), SplitDepthExceeded)


def _boundary_split(curve: ClosedCurve, edge: int, u: float):
    seg = curve.segments[edge]
    d = derivative(seg, u)
    if d == (0.0, 0.0):
        d = (seg.p3[0] - seg.p0[0], seg.p3[1] - seg.p0[1])
    return split_along_ray(curve, edge + u, _inward(d), SplitDepthExceeded)


def make_nondegenerate(curve: ClosedCurve, strategy: str = "quartic",
                       max_depth: int = MAX_SPLIT_DEPTH, probe: bool = True) -> RepairResult:
    """Split ``curve`` until every piece yields a nondegenerate Coons patch.

    ``strategy="quartic"`` cuts at the most degenerate boundary point found by
    the quartic scan and falls back to side-midpoint cuts for internal
    degeneracy (after which descendants skip the boundary scan).
    ``strategy="midpoint"`` always cuts at side midpoints.
    With ``probe=False`` a mixed-sign table always leads to a split, so every
    kept patch passes the sign test itself.
    """
    if strategy not in ("quartic", "midpoint"):
        raise ValueError(f"unknown strategy {strategy!r}")
    kept: list[Patch] = []
    discarded: list[Patch] = []
    history: list[str] = []
    regions: list[ClosedCurve] = []
    scale = curve.bbox().diagonal
    queue = [(curve, 0, strategy == "midpoint")]
    while queue:
        c, depth, skip_boundary = queue.pop(0)
        for piece in _normalize(c, scale):
            padded = pad_to_four(piece)
            patch = coons_patch(padded)
            sign = table_sign(tpq_table(patch))
            if sign == 0 and probe and probe_accepts(patch):
                sign = 1
                history.append(f"depth {depth}: accepted by probe grid")
            if sign != 0:
                if sign > 0:
                    kept.append(patch)
                    regions.append(piece)
                else:
                    discarded.append(patch.with_orientation(-1))
                continue
            if depth >= max_depth:
                raise SplitDepthExceeded(f"patch still degenerate after {depth} splits")
            worst = None if skip_boundary else worst_boundary_point(patch)
            if worst is not None and not CORNER_MARGIN < worst[1] < 1.0 - CORNER_MARGIN:
                worst = None
            if worst is not None:
                edge, u, J = worst
                history.append(f"depth {depth}: boundary cut on edge {edge} at u={u:.6g}")
                parts = _boundary_split(padded, edge, u)
                queue.extend((p, depth + 1, False) for p in parts)
            else:
                history.append(f"depth {depth}: side-midpoint cut")
                parts = _side_split(padded)
                queue.extend((p, depth + 1, True) for p in parts)
    return RepairResult(kept, discarded, history, regions)


def curve_area(curves) -> float:
    return math.fsum(signed_area(c) for c in curves)

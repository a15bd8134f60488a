"""Global maxima over Bézier patches by pruned subdivision.

A patch lies in the convex hull of its control points and passes through
its four corners.  Corner values therefore raise the running maximum ``M``
and the control net bounds what any subpatch can still contribute; a
subpatch whose bound does not beat ``M`` is dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NonPositiveDepth
from .geometry import Box3, Patch, Point3

DEFAULT_DEPTH = 16

_L = np.array([[1.0, 0.0, 0.0, 0.0],
               [0.5, 0.5, 0.0, 0.0],
               [0.25, 0.5, 0.25, 0.0],
               [0.125, 0.375, 0.375, 0.125]])
_R = _L[::-1, ::-1].copy()
_CORNERS = ((0, 0), (0, 3), (3, 0), (3, 3))
_EDGE_MASK = np.ones((4, 4), dtype=bool)
for _i, _j in _CORNERS:
    _EDGE_MASK[_i, _j] = False


def _net(patch) -> np.ndarray:
    return patch.control if isinstance(patch, Patch) else np.asarray(patch, dtype=float)


def _split_net(P: np.ndarray):
    out = []
    for A in (_L, _R):
        for B in (_L, _R):
            out.append(np.einsum("ia,jb,ab...->ij...", A, B, P))
    return out


def subdivide_patch(patch: Patch) -> list[Patch]:
    """Four subpatches split at ``u = v = 1/2``: (low u, low v), (low u, high v),
    (high u, low v), (high u, high v)."""
    return [Patch(S, patch.orientation) for S in _split_net(patch.control)]


def _cartesian(values: np.ndarray, M: float, depth: int) -> float:
    M = max(M, values[0, 0], values[0, 3], values[3, 0], values[3, 3])
    if depth == 0:
        return M
    if values[_EDGE_MASK].max() <= M:
        return M
    for S in _split_net(values):
        M = max(M, _cartesian(S, M, depth - 1))
    return M


def cartesian_max(axis: int, patch, M: float | None = None, depth: int = DEFAULT_DEPTH,
                  sign: float = 1.0) -> float:
    """Maximum of ``sign * coordinate[axis]`` over the patch, at least ``M``.

    ``M`` defaults to the value at ``P[0][0]``.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    values = sign * _net(patch)[:, :, axis]
    if M is None:
        M = float(values[0, 0])
    return float(_cartesian(values, M, depth))


@dataclass
class BoundsQuery:
    """A function to maximize, its running maximum and the recursion budget.

    ``f`` must be nondecreasing in each coordinate unless ``bound`` is given;
    ``bound(lo, hi)`` returns an upper bound of ``f`` over the box ``[lo, hi]``
    and defaults to ``f(hi)``.
    """

    f: Callable[[np.ndarray], float]
    M: float = -math.inf
    depth: int = DEFAULT_DEPTH
    bound: Callable[[np.ndarray, np.ndarray], float] | None = None

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")


def _function(q: BoundsQuery, P: np.ndarray, M: float, depth: int) -> float:
    f = q.f
    M = max(M, f(P[0, 0]), f(P[0, 3]), f(P[3, 0]), f(P[3, 3]))
    if depth == 0:
        return M
    pts = P.reshape(-1, P.shape[-1])
    hi = pts.max(axis=0)
    V = q.bound(pts.min(axis=0), hi) if q.bound is not None else f(hi)
    if V <= M:
        return M
    for S in _split_net(P):
        M = max(M, _function(q, S, M, depth - 1))
    return M


def function_max(q: BoundsQuery, patch) -> float:
    """Maximum of ``q.M`` and ``q.f`` over the patch; also stores it in ``q.M``."""
    q.M = float(_function(q, _net(patch), q.M, q.depth))
    return q.M


def patch_bbox(patch, depth: int = DEFAULT_DEPTH) -> Box3:
    return surface_bbox([patch], depth)


def surface_bbox(patches: Sequence, depth: int = DEFAULT_DEPTH) -> Box3:
    """Bounding box of a patch set; each extremum seeds the search on the next patch."""
    hi, lo = [], []
    for axis in range(3):
        mx = mn = None
        for p in patches:
            mx = cartesian_max(axis, p, mx, depth)
            mn = cartesian_max(axis, p, mn, depth, sign=-1.0)
        hi.append(mx)
        lo.append(-mn)
    return Box3(Point3(*lo), Point3(*hi))


# --- perspective extent --------------------------------------------------------

def parse_transform(values) -> np.ndarray:
    """A 3x4 row-major affine transform from 12 numbers (or a 3x4 array)."""
    m = np.asarray(values, dtype=float)
    if m.size != 12:
        raise ValueError(f"transform needs 12 numbers, got {m.size}")
    m = m.reshape(3, 4)
    if not np.all(np.isfinite(m)):
        raise ValueError("transform has non-finite entries")
    return m


def apply_transform(transform, net: np.ndarray) -> np.ndarray:
    m = parse_transform(transform)
    return np.einsum("ab,ijb->ija", m[:, :3], net) + m[:, 3]


def _ratio(axis: int):
    def f(p):
        return p[axis] / p[2]

    def bound(lo, hi):
        # x / z with z > 0: large x, and small z when x >= 0, large z when x < 0
        return hi[axis] / (lo[2] if hi[axis] >= 0 else hi[2])

    return f, bound


def perspective_max(patches: Sequence, axis: int, depth: int = DEFAULT_DEPTH,
                    M: float = -math.inf) -> float:
    """Maximum of ``coordinate[axis] / z`` over patches given in eye coordinates (z > 0)."""
    f, bound = _ratio(axis)
    q = BoundsQuery(f, M, depth, bound)
    for p in patches:
        net = _net(p)
        if np.any(net[:, :, 2] <= 0.0):
            raise NonPositiveDepth("a control point has z <= 0 in eye coordinates")
        function_max(q, net)
    return q.M


def _eye_nets(patches, transform) -> list[np.ndarray]:
    nets = [_net(p) if transform is None else apply_transform(transform, _net(p))
            for p in patches]
    for n in nets:
        if np.any(n[:, :, 2] <= 0.0):
            raise NonPositiveDepth("a control point has z <= 0 in eye coordinates")
    return nets


def projected_bbox(patches: Sequence, transform=None, depth: int = DEFAULT_DEPTH):
    """``((xmin, ymin), (xmax, ymax))`` of the perspective image ``(x/z, y/z)``."""
    nets = _eye_nets(patches, transform)
    flip = np.array([-1.0, -1.0, 1.0])
    hi = [perspective_max(nets, a, depth) for a in (0, 1)]
    lo = [-perspective_max([n * flip for n in nets], a, depth) for a in (0, 1)]
    return (lo[0], lo[1]), (hi[0], hi[1])


def fov_angle(patches: Sequence, transform=None, depth: int = DEFAULT_DEPTH) -> float:
    """Full field-of-view angle (radians) of a symmetric square viewport that
    just contains the patches seen from the eye frame given by ``transform``."""
    (x0, y0), (x1, y1) = projected_bbox(patches, transform, depth)
    extent = max(abs(x0), abs(x1), abs(y0), abs(y1))
    return 2.0 * math.atan(extent)

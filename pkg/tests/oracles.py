"""Independent reference computations: dense flattening, quadrature, sampling."""

from __future__ import annotations

import numpy as np

from geokit.geometry import ClosedCurve


def bernstein(t):
    t = np.asarray(t, dtype=float)
    s = 1.0 - t
    return np.stack([s ** 3, 3 * t * s * s, 3 * t * t * s, t ** 3], axis=-1)


def segment_points(seg, t) -> np.ndarray:
    return bernstein(t) @ np.array(seg, dtype=float)


def flatten(curve: ClosedCurve, per_segment: int = 4096) -> np.ndarray:
    """Closed polygon (first vertex not repeated) through dense curve samples."""
    t = np.linspace(0.0, 1.0, per_segment, endpoint=False)
    return np.concatenate([segment_points(s, t) for s in curve.segments])


def polygon_winding(poly: np.ndarray, pts: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Winding numbers of a closed polygon about each point (crossing-count rule)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    a = poly
    b = np.roll(poly, -1, axis=0)
    out = []
    for k in range(0, len(pts), chunk):
        x = pts[k:k + chunk, 0:1]
        y = pts[k:k + chunk, 1:2]
        ay, by = a[:, 1] - y, b[:, 1] - y
        cross = (a[:, 0] - x) * by - (b[:, 0] - x) * ay
        up = (ay <= 0) & (by > 0) & (cross > 0)
        down = (ay > 0) & (by <= 0) & (cross < 0)
        out.append(up.sum(axis=1) - down.sum(axis=1))
    return np.concatenate(out).astype(int) if out else np.zeros(0, dtype=int)


def distance_to_polygon(poly: np.ndarray, pts: np.ndarray, chunk: int = 512) -> np.ndarray:
    """A lower bound on the distance to the polygon: nearest vertex minus half the longest edge."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    half = 0.5 * float(np.sqrt((np.diff(np.vstack([poly, poly[:1]]), axis=0) ** 2).sum(axis=1)).max())
    out = []
    for k in range(0, len(pts), chunk):
        p = pts[k:k + chunk]
        d2 = ((p[:, None, 0] - poly[None, :, 0]) ** 2 + (p[:, None, 1] - poly[None, :, 1]) ** 2)
        out.append(np.sqrt(d2.min(axis=1)) - half)
    return np.concatenate(out) if out else np.zeros(0)


def winding_oracle(curves, pts, per_segment: int = 4096) -> np.ndarray:
    if isinstance(curves, ClosedCurve):
        curves = [curves]
    return sum(polygon_winding(flatten(c, per_segment), pts) for c in curves)


def safe_points(curves, pts, margin: float, per_segment: int = 256) -> np.ndarray:
    """The points farther than ``margin`` from every curve."""
    if isinstance(curves, ClosedCurve):
        curves = [curves]
    pts = np.asarray(pts, dtype=float)
    keep = np.ones(len(pts), dtype=bool)
    for c in curves:
        keep &= distance_to_polygon(flatten(c, per_segment), pts) > margin
    return pts[keep]


_GL_X, _GL_W = np.polynomial.legendre.leggauss(6)


def quadrature_area(curve: ClosedCurve) -> float:
    """Signed area by Gauss-Legendre quadrature of (x y' - y x') / 2, exact for cubics."""
    t = 0.5 * (_GL_X + 1.0)
    w = 0.5 * _GL_W
    total = 0.0
    for s in curve.segments:
        P = np.array(s, dtype=float)
        pos = bernstein(t) @ P
        D = 3.0 * np.diff(P, axis=0)
        s_ = 1.0 - t
        der = np.stack([s_ * s_, 2 * t * s_, t * t], axis=-1) @ D
        total += float(np.sum(w * (pos[:, 0] * der[:, 1] - pos[:, 1] * der[:, 0])))
    return 0.5 * total


def patch_grid(control, n: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, n)
    B = bernstein(t)
    rows = np.tensordot(B, np.asarray(control, dtype=float), axes=(1, 0))  # (n, 4, 3)
    return np.tensordot(rows, B, axes=(1, 1)).transpose(0, 2, 1)


def sampled_max(patch, g, n: int = 1001, refine: int = 201, grid=None) -> float:
    """Max of ``g`` over a dense (u, v) grid, refined on a small window around the best sample.

    ``g`` maps an array of surface points (..., 3) to values; ``grid`` may pass a
    precomputed ``patch_grid(control, n)``.
    """
    control = np.asarray(getattr(patch, "control", patch), dtype=float)
    t = np.linspace(0.0, 1.0, n)
    vals = g(patch_grid(control, n) if grid is None else grid)
    a, b = np.unravel_index(int(np.argmax(vals)), vals.shape)
    h = 2.0 / (n - 1)
    us = np.clip(np.linspace(t[a] - h, t[a] + h, refine), 0, 1)
    vs = np.clip(np.linspace(t[b] - h, t[b] + h, refine), 0, 1)
    fine = np.einsum("ai,bj,ijk->abk", bernstein(us), bernstein(vs), control)
    return max(float(vals[a, b]), float(g(fine).max()))


def jacobian_fd(control, u, v, h=1e-5) -> float:
    """Planar Jacobian by central differences of the patch map."""
    P = np.asarray(control, dtype=float)[:, :, :2]

    def sigma(a, b):
        return bernstein(a) @ np.einsum("j,ijk->ik", bernstein(b), P)

    du = (sigma(u + h, v) - sigma(u - h, v)) / (2 * h)
    dv = (sigma(u, v + h) - sigma(u, v - h)) / (2 * h)
    return float(du[0] * dv[1] - du[1] * dv[0])

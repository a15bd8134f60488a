"""Cubic Bézier approximations of the circle and the sphere."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .geometry import CubicSegment, Patch, sample_patch

# the cubic quarter circle whose midpoint lies on the circle
ARC_CONSTANT = 4.0 / 3.0 * (math.sqrt(2.0) - 1.0)


def quarter_arc() -> CubicSegment:
    a = ARC_CONSTANT
    return CubicSegment.of((1.0, 0.0), (1.0, a), (a, 1.0), (0.0, 1.0))


def sphere_octant() -> Patch:
    """The octant x, y, z >= 0 with the row ``P[:, 3]`` collapsed at the pole."""
    a = ARC_CONSTANT
    pole = (0.0, 0.0, 1.0)
    net = [
        [(1.0, 0.0, 0.0), (1.0, 0.0, a), (a, 0.0, 1.0), pole],
        [(1.0, a, 0.0), (1.0, a, a), (a, a * a, 1.0), pole],
        [(a, 1.0, 0.0), (a, 1.0, a), (a * a, a, 1.0), pole],
        [(0.0, 1.0, 0.0), (0.0, 1.0, a), (0.0, a, 1.0), pole],
    ]
    return Patch(np.array(net))


def reflect(patch: Patch, signs) -> Patch:
    """Mirror through coordinate planes, keeping the normal outward.

    An odd number of sign flips reverses orientation, which the transpose
    of the control net undoes.
    """
    s = np.asarray(signs, dtype=float)
    net = patch.control * s + 0.0  # normalize -0.0 so shared seams compare bitwise
    if np.prod(s) < 0:
        net = net.transpose(1, 0, 2)
    return Patch(net)


def unit_sphere() -> list[Patch]:
    """Eight octant patches, ordered by the sign pattern (+++, ++-, ..., ---)."""
    first = sphere_octant()
    out = []
    for signs in itertools.product((1.0, -1.0), repeat=3):
        out.append(first if signs == (1.0, 1.0, 1.0) else reflect(first, signs))
    return out


def radius_error(patches, n_samples: int = 101) -> float:
    """Largest deviation of ``|sigma(u, v)|`` from 1 on an ``n x n`` grid per patch."""
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    ts = np.linspace(0.0, 1.0, n_samples)
    worst = 0.0
    for p in patches:
        r = np.linalg.norm(sample_patch(p, ts, ts), axis=-1)
        worst = max(worst, float(np.max(np.abs(r - 1.0))))
    return worst

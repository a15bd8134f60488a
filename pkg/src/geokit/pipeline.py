"""Outline curves to oriented, nondegenerate Coons patches, and placement in 3D."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .bezulate import bezulate_with_count
from .coons import make_nondegenerate
from .errors import GeokitError, PipelineError
from .geometry import ClosedCurve, CubicSegment, Patch
from .partition import partition

IDENTITY_PLANE = {"origin": [0.0, 0.0, 0.0], "u": [1.0, 0.0, 0.0], "v": [0.0, 1.0, 0.0]}


@dataclass
class PatchSetDocument:
    """Patches with their provenance; ``regions`` and ``chords`` only feed diagnostics."""

    patches: list[Patch]
    provenance: list[dict]
    discarded: list[Patch] = field(default_factory=list)
    plane: dict = field(default_factory=lambda: {k: list(v) for k, v in IDENTITY_PLANE.items()})
    regions: list[ClosedCurve] = field(default_factory=list)
    chords: list[CubicSegment] = field(default_factory=list)
    leaves: list[ClosedCurve] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "patches": [
                {"control": p.control.tolist(), "orientation": p.orientation, "provenance": prov}
                for p, prov in zip(self.patches, self.provenance)
            ],
            "discarded": [{"control": p.control.tolist(), "orientation": p.orientation}
                          for p in self.discarded],
            "plane": self.plane,
        }


def _stage(name: str, fn, *args, curve=None, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineError:
        raise
    except GeokitError as exc:
        raise PipelineError(name, exc, curve.to_lists() if curve is not None else None) from exc


def region_to_patches(curves: list[ClosedCurve], strategy: str = "quartic") -> PatchSetDocument:
    """Partition, bezulate, then split each piece into nondegenerate patches.

    Provenance records, per patch, the partition region it came from, the
    bezulate piece within that region and the cuts made while repairing it.
    """
    regions = _stage("partition", partition, list(curves))
    doc = PatchSetDocument([], [], regions=regions)
    for r, region in enumerate(regions):
        pieces, _, chords = _stage("bezulate", bezulate_with_count, region, curve=region)
        doc.chords.extend(chords)
        for k, piece in enumerate(pieces):
            result = _stage("coons", make_nondegenerate, piece, strategy, curve=piece)
            for patch in result.kept:
                doc.patches.append(patch)
                doc.provenance.append({"region": r, "piece": k, "splits": list(result.history)})
            doc.discarded.extend(result.discarded)
            doc.leaves.extend(result.regions)
    return doc


def _apply(m: np.ndarray, net: np.ndarray) -> np.ndarray:
    return np.einsum("ab,ijb->ija", m[:, :3], net) + m[:, 3]


def place_in_3d(doc: PatchSetDocument, transform) -> PatchSetDocument:
    """Map every control point by the 3x4 affine ``transform``.

    A reflection (negative determinant) flips each orientation flag.
    """
    m = np.asarray(transform, dtype=float).reshape(3, 4)
    flip = -1 if np.linalg.det(m[:, :3]) < 0 else 1
    patches = [Patch(_apply(m, p.control), p.orientation * flip) for p in doc.patches]
    discarded = [Patch(_apply(m, p.control), p.orientation * flip) for p in doc.discarded]
    origin = m[:, :3] @ np.asarray(doc.plane["origin"]) + m[:, 3]
    axes = {}
    for key in ("u", "v"):
        a = m[:, :3] @ np.asarray(doc.plane[key])
        axes[key] = (a / np.linalg.norm(a)).tolist()
    plane = {"origin": origin.tolist(), **axes}
    return replace(doc, patches=patches, discarded=discarded, plane=plane)

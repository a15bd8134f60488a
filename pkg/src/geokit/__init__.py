"""Planar regions bounded by cubic Bézier curves, turned into nondegenerate
Coons patches; robust winding numbers and global bounds over patches.

``bezulate`` and ``partition`` live in their same-named submodules; they are
not re-exported here so that the submodules stay importable by name.
"""

from .bezulate import bezulate_with_count
from .bounds import (BoundsQuery, cartesian_max, fov_angle, function_max, patch_bbox,
                     projected_bbox, surface_bbox)
from .coons import (boundary_degeneracy, coons_patch, is_nondegenerate, jacobian,
                    make_nondegenerate, pad_to_four, split_reflex_nodes, tpq_table)
from .errors import (BisectorMiss, CrossingCurves, GeokitError, IntersectionOverlap,
                     MergeFailure, NonPositiveDepth, OnBoundary, OutlineError, PipelineError,
                     RefinementLimitExceeded, SplitDepthExceeded)
from .geometry import (ClosedCurve, CubicSegment, Patch, Point2, Point3, eval_patch,
                       eval_segment, signed_area, split_segment)
from .partition import merge, sort_curves
from .pipeline import PatchSetDocument, place_in_3d, region_to_patches
from .quadric import quarter_arc, radius_error, sphere_octant, unit_sphere
from .roots import solve_cubic, solve_quartic
from .winding import FillRule, inside, total_winding, winding_number

__version__ = "0.1.0"

__all__ = [
    "BisectorMiss", "BoundsQuery", "ClosedCurve", "CrossingCurves", "CubicSegment",
    "FillRule", "GeokitError", "IntersectionOverlap", "MergeFailure", "NonPositiveDepth",
    "OnBoundary", "OutlineError", "Patch", "PatchSetDocument", "PipelineError", "Point2",
    "Point3", "RefinementLimitExceeded", "SplitDepthExceeded",
    "bezulate_with_count", "boundary_degeneracy", "cartesian_max",
    "coons_patch", "eval_patch", "eval_segment", "fov_angle", "function_max", "inside",
    "is_nondegenerate", "jacobian", "make_nondegenerate", "merge", "pad_to_four",
    "patch_bbox", "place_in_3d", "projected_bbox", "quarter_arc",
    "radius_error", "region_to_patches", "signed_area", "solve_cubic", "solve_quartic",
    "sort_curves", "sphere_octant", "split_reflex_nodes", "split_segment",
    "surface_bbox", "total_winding", "tpq_table", "unit_sphere", "winding_number",
]

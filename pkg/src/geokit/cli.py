"""Command-line front end: ``geokit patches|winding|bounds|sphere``.

Exit codes: 0 success, 1 input or pipeline error (JSON description on
stderr), 2 query point on the boundary.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import bounds, quadric
from .errors import GeokitError, OnBoundary, OutlineError, PipelineError
from .geometry import Patch
from .outline import diagnostic_svg, dumps, load_outline, patches_from_json
from .pipeline import region_to_patches
from .winding import total_winding

EXIT_OK, EXIT_ERROR, EXIT_BOUNDARY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is reserved for boundary queries here
    def error(self, message):
        raise UsageError(message)


def _sig(v: float) -> float:
    return float(f"{v:.12g}")


def _error_payload(exc: BaseException) -> dict:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, PipelineError):
        payload["stage"] = exc.stage
        payload["cause"] = type(exc.cause).__name__
        if exc.curve is not None:
            payload["curve"] = exc.curve
        exc = exc.cause
    if isinstance(exc, OutlineError) and exc.curve_index is not None:
        payload["curve_index"] = exc.curve_index
    return payload


def _load_patches(path) -> list[Patch]:
    """Patches from a patch document, or the planar patches of an outline."""
    path = Path(path)
    if path.suffix.lower() != ".svg":
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise OutlineError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise OutlineError(f"invalid JSON in {path}: {exc}") from exc
        if isinstance(data, dict) and "patches" in data:
            return patches_from_json(data)
    return region_to_patches(load_outline(path)).patches


def _parse_projected(text: str):
    parts = [p for p in re.split(r"[\s,]+", text.strip()) if p]
    try:
        return bounds.parse_transform([float(p) for p in parts])
    except ValueError as exc:
        raise UsageError(f"--projected: {exc}") from exc


def cmd_patches(args) -> int:
    curves = load_outline(args.input)
    doc = region_to_patches(curves, strategy=args.strategy)
    sys.stdout.write(dumps(doc.to_dict()))
    if args.emit_svg:
        svg = diagnostic_svg(curves, doc.chords, doc.leaves, doc.patches)
        Path(args.emit_svg).write_text(svg)
    return EXIT_OK


def cmd_winding(args) -> int:
    curves = load_outline(args.input)
    try:
        w = total_winding(curves, (args.x, args.y))
    except OnBoundary as exc:
        sys.stderr.write(dumps(_error_payload(exc)))
        return EXIT_BOUNDARY
    sys.stdout.write(f"{w}\n")
    return EXIT_OK


def cmd_bounds(args) -> int:
    if args.depth < 0:
        raise UsageError("--depth must be nonnegative")
    patches = _load_patches(args.input)
    out = {}
    if args.projected is None and not args.fov:
        box = bounds.surface_bbox(patches, args.depth)
        out["bbox"] = {"min": [_sig(v) for v in box.min], "max": [_sig(v) for v in box.max]}
    else:
        transform = _parse_projected(args.projected) if args.projected is not None else None
        (x0, y0), (x1, y1) = bounds.projected_bbox(patches, transform, args.depth)
        out["projected"] = {"min": [_sig(x0), _sig(y0)], "max": [_sig(x1), _sig(y1)]}
        if args.fov:
            out["fov"] = _sig(bounds.fov_angle(patches, transform, args.depth))
    sys.stdout.write(dumps(out))
    return EXIT_OK


def cmd_sphere(args) -> int:
    if args.accuracy is not None and args.accuracy < 2:
        raise UsageError("--accuracy needs at least 2 samples per direction")
    patches = quadric.unit_sphere()
    doc = {
        "patches": [{"control": p.control.tolist(), "orientation": p.orientation,
                     "provenance": {"octant": k}} for k, p in enumerate(patches)],
    }
    if args.accuracy is not None:
        doc["radius_error"] = quadric.radius_error(patches, args.accuracy)
    sys.stdout.write(dumps(doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="geokit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("patches", help="outline to Coons patch document")
    p.add_argument("--in", dest="input", required=True, help="outline (.json or .svg)")
    p.add_argument("--emit-svg", metavar="FILE", help="also write a diagnostic SVG")
    p.add_argument("--strategy", choices=("quartic", "midpoint"), default="quartic")
    p.set_defaults(func=cmd_patches)

    p = sub.add_parser("winding", help="total winding number of the outline about a point")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("x", type=float)
    p.add_argument("y", type=float)
    p.set_defaults(func=cmd_winding)

    p = sub.add_parser("bounds", help="bounding box, projected extent or field of view")
    p.add_argument("--in", dest="input", required=True, help="patch document or outline")
    p.add_argument("--projected", metavar="M11,...,M34",
                   help="row-major 3x4 transform into eye coordinates")
    p.add_argument("--fov", action="store_true", help="report the full field-of-view angle")
    p.add_argument("--depth", type=int, default=bounds.DEFAULT_DEPTH)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sphere", help="eight-patch unit sphere")
    p.add_argument("--accuracy", type=int, metavar="N",
                   help="report the radius error on an N x N grid per patch")
    p.set_defaults(func=cmd_sphere)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(dumps({"error": "UsageError", "message": str(exc)}))
        return EXIT_ERROR
    except (GeokitError, ValueError) as exc:
        sys.stderr.write(dumps(_error_payload(exc)))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

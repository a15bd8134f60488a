"""Reading outlines (JSON or SVG path data) and writing JSON and SVG output."""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from pathlib import Path

from .errors import OutlineError
from .geometry import ClosedCurve, CubicSegment, Patch, as_point, patch_boundary, straight_segment

_TOKEN = re.compile(r"([A-Za-z])|([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)|([\s,]+)|(.)")
_ARITY = {"M": 2, "L": 2, "C": 6, "Z": 0}


def curves_from_json(data) -> list[ClosedCurve]:
    if not isinstance(data, dict) or not isinstance(data.get("curves"), list):
        raise OutlineError('outline JSON needs a "curves" list')
    curves = []
    for i, c in enumerate(data["curves"]):
        try:
            segs = c["segments"]
            curves.append(ClosedCurve(CubicSegment.of(*s) for s in segs))
        except OutlineError as exc:
            raise OutlineError(f"curve {i}: {exc}", curve_index=i) from exc
        except (KeyError, TypeError, ValueError) as exc:
            raise OutlineError(f"curve {i}: malformed segment list ({exc})", curve_index=i) from exc
    if not curves:
        raise OutlineError("outline has no curves")
    return curves


def curves_to_json(curves) -> dict:
    return {"curves": [{"segments": c.to_lists()} for c in curves]}


def _tokens(d: str):
    for m in _TOKEN.finditer(d):
        cmd, num, _, bad = m.groups()
        if bad is not None:
            raise OutlineError(f"unexpected character {bad!r} in path data")
        if cmd is not None:
            if cmd not in _ARITY:
                raise OutlineError(f"path command {cmd!r} not supported (only absolute M, L, C, Z)")
            yield cmd
        elif num is not None:
            yield float(num)


def parse_path_data(d: str) -> list[ClosedCurve]:
    """Closed curves from SVG path data using absolute M, L, C and Z only.

    ``Z`` adds a straight closing segment when the pen is away from the
    subpath start.  A subpath left open must end exactly at its start.
    """
    toks = list(_tokens(d))
    curves: list[ClosedCurve] = []
    segs: list[CubicSegment] = []
    start = pen = None
    cmd = None
    i = 0

    def finish(closed: bool):
        nonlocal segs
        if start is None:
            return
        if segs or pen != start:
            if pen != start:
                if not closed:
                    raise OutlineError(
                        f"subpath {len(curves)} is not closed: ends at {tuple(pen)}, "
                        f"starts at {tuple(start)}", curve_index=len(curves))
                segs.append(straight_segment(pen, start))
            curves.append(ClosedCurve(segs))
        segs = []

    while i < len(toks):
        t = toks[i]
        if isinstance(t, str):
            cmd = t
            i += 1
            if cmd == "Z":
                finish(True)
                pen = start
                start = None
                continue
        elif cmd is None or cmd == "Z":
            raise OutlineError("path data must start with a command")
        n = _ARITY[cmd]
        args = toks[i:i + n]
        if len(args) < n or any(isinstance(a, str) for a in args):
            raise OutlineError(f"command {cmd} needs {n} numbers")
        i += n
        if cmd == "M":
            finish(False)
            start = pen = as_point(args)
            cmd = "L"  # further pairs are implicit line-tos
        elif cmd == "L":
            if start is None:
                start = pen
            q = as_point(args)
            segs.append(straight_segment(pen, q))
            pen = q
        elif cmd == "C":
            if start is None:
                start = pen
            seg = CubicSegment.of(pen, args[0:2], args[2:4], args[4:6])
            segs.append(seg)
            pen = seg.p3
    finish(False)
    if not curves:
        raise OutlineError("path data has no closed curves")
    return curves


def parse_svg(text: str) -> list[ClosedCurve]:
    """Curves from an SVG document's ``path`` elements, or from bare path data."""
    stripped = text.lstrip()
    if not stripped.startswith("<"):
        return parse_path_data(text)
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise OutlineError(f"invalid SVG: {exc}") from exc
    curves = []
    for el in root.iter():
        if el.tag.rsplit("}", 1)[-1] == "path" and el.get("d"):
            curves.extend(parse_path_data(el.get("d")))
    if not curves:
        raise OutlineError("SVG has no path elements")
    return curves


def load_outline(path) -> list[ClosedCurve]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OutlineError(f"cannot read {path}: {exc}") from exc
    if path.suffix.lower() == ".svg":
        return parse_svg(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OutlineError(f"invalid JSON in {path}: {exc}") from exc
    return curves_from_json(data)


def dumps(obj) -> str:
    """Deterministic JSON: shortest round-trip floats, sorted keys, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def patches_from_json(data) -> list[Patch]:
    if not isinstance(data, dict) or not isinstance(data.get("patches"), list):
        raise OutlineError('patch JSON needs a "patches" list')
    try:
        return [Patch(p["control"], p.get("orientation", 1)) for p in data["patches"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise OutlineError(f"malformed patch list: {exc}") from exc


# --- SVG diagnostics -------------------------------------------------------------

def _num(v: float) -> str:
    return repr(float(v))


def _path_d(segments) -> str:
    segments = list(segments)
    if not segments:
        return ""
    parts = [f"M {_num(segments[0].p0.x)} {_num(segments[0].p0.y)}"]
    for s in segments:
        parts.append("C " + " ".join(f"{_num(p.x)} {_num(p.y)}" for p in (s.p1, s.p2, s.p3)))
    return " ".join(parts)


def diagnostic_svg(curves, chords=(), regions=(), patches=()) -> str:
    """Layered overlay: curves black, chords red, regions gray, patch edges blue."""
    boxes = [c.bbox() for c in curves] or [None]
    x0 = min(b.min.x for b in boxes)
    y0 = min(b.min.y for b in boxes)
    x1 = max(b.max.x for b in boxes)
    y1 = max(b.max.y for b in boxes)
    pad = 0.05 * max(x1 - x0, y1 - y0, 1e-9)
    w, h = x1 - x0 + 2 * pad, y1 - y0 + 2 * pad
    svg = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "viewBox": f"{_num(x0 - pad)} {_num(-(y1 + pad))} {_num(w)} {_num(h)}",
    })
    stroke = _num(w / 400)
    root = ET.SubElement(svg, "g", {"transform": "scale(1,-1)", "stroke-width": stroke})

    def layer(name, attrs, paths):
        g = ET.SubElement(root, "g", {"id": name, **attrs})
        for d in paths:
            ET.SubElement(g, "path", {"d": d})

    layer("regions", {"fill": "#bbbbbb", "fill-opacity": "0.5", "stroke": "none"},
          [_path_d(c.segments) + " Z" for c in regions])
    layer("curves", {"fill": "none", "stroke": "black"},
          [_path_d(c.segments) + " Z" for c in curves])
    layer("chords", {"fill": "none", "stroke": "red"}, [_path_d([s]) for s in chords])
    layer("patches", {"fill": "none", "stroke": "blue"},
          [_path_d(patch_boundary(p).segments) + " Z" for p in patches])
    ET.indent(svg)
    return ET.tostring(svg, encoding="unicode") + "\n"

"""JSON and CSV forms of polynomials, paths and reports.

Complex numbers are written as ``[re, im]`` pairs.
"""
from __future__ import annotations

import json
import math

from .critgeo import pair
from .polycore import Polynomial
from .tracker import Arc, Line, Path, Trajectory

TRAJECTORY_COLUMNS = ("t", "u_re", "u_im", "zeta_re", "zeta_im", "residual", "step")


def parse_pair(obj) -> complex:
    if not (isinstance(obj, (list, tuple)) and len(obj) == 2):
        raise ValueError(f"expected [re, im], got {obj!r}")
    re, im = (float(x) for x in obj)
    if not (math.isfinite(re) and math.isfinite(im)):
        raise ValueError(f"non-finite complex number {obj!r}")
    return complex(re, im)


def parse_complex_arg(text: str) -> complex:
    """``"re,im"`` as used on the command line."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected RE,IM, got {text!r}")
    return parse_pair(parts)


def polynomial_to_json(p: Polynomial) -> dict:
    return {"coeffs": [pair(c) for c in p.coeffs]}


def polynomial_from_json(obj) -> Polynomial:
    cs = obj.get("coeffs") if isinstance(obj, dict) else None
    if not cs:
        raise ValueError("polynomial JSON needs a non-empty 'coeffs' array")
    return Polynomial(tuple(parse_pair(c) for c in cs))


def _segment_to_json(seg) -> dict:
    if isinstance(seg, Line):
        return {"kind": "line", "a": pair(seg.a), "b": pair(seg.b)}
    return {"kind": "arc", "center": pair(seg.center), "radius": seg.radius,
            "angle_start": seg.angle_start, "angle_end": seg.angle_end}


def path_to_json(path: Path) -> dict:
    return {"segments": [_segment_to_json(s) for s in path.segments]}


def path_from_json(obj) -> Path:
    segs = obj.get("segments") if isinstance(obj, dict) else None
    if not segs:
        raise ValueError("path JSON needs a non-empty 'segments' array")
    out = []
    for s in segs:
        kind = s.get("kind")
        if kind == "line":
            out.append(Line(parse_pair(s["a"]), parse_pair(s["b"])))
        elif kind == "arc":
            out.append(Arc(parse_pair(s["center"]), float(s["radius"]),
                           float(s["angle_start"]), float(s["angle_end"])))
        else:
            raise ValueError(f"unknown segment kind {kind!r}")
    return Path(out)


def trajectory_to_csv(tr: Trajectory, header: bool = True) -> str:
    lines = [",".join(TRAJECTORY_COLUMNS)] if header else []
    for t, u, z, r, h in tr.samples:
        lines.append(",".join(repr(float(x)) for x in (t, u.real, u.imag, z.real, z.imag, r, h)))
    for t, kind in tr.events:
        lines.append(f"# event,{float(t)!r},{kind}")
    return "\n".join(lines) + "\n"


def trajectory_from_csv(text: str) -> dict:
    """Parse CSV written by :func:`trajectory_to_csv` into columns and events."""
    cols = {c: [] for c in TRAJECTORY_COLUMNS}
    events = []
    for line in text.splitlines():
        if not line or line.startswith("t,"):
            continue
        if line.startswith("# event,"):
            _, t, kind = line.split(",", 2)
            events.append((float(t), kind))
            continue
        if line.startswith("#"):
            continue
        for c, v in zip(TRAJECTORY_COLUMNS, line.split(",")):
            cols[c].append(float(v))
    cols["events"] = events
    return cols


def trajectory_to_json(tr: Trajectory) -> dict:
    return {
        "samples": [dict(zip(TRAJECTORY_COLUMNS, (t, u.real, u.imag, z.real, z.imag, r, h)))
                    for t, u, z, r, h in tr.samples],
        "events": [{"t": t, "kind": k} for t, k in tr.events],
        "start_zeta": pair(tr.start_zeta),
        "end_zeta": pair(tr.end_zeta),
    }


def blowup_to_csv(scan) -> str:
    width = max((len(r.abs_f) for r in scan.rows), default=0)
    lines = [",".join(["r", "min_abs_f"] + [f"abs_f_{k}" for k in range(width)])]
    for row in scan.rows:
        lines.append(",".join(repr(float(x)) for x in (row.r, row.min_abs_f, *row.abs_f)))
    return "\n".join(lines) + "\n"


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"

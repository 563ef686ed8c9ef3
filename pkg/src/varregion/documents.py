"""
Output documents: metadata plus a payload (curve samples, a point, a disk or a
campaign report), serialised as CSV, JSON or SVG.

Floats are written with 17 significant digits so every double survives a
round trip.  CSV curves use the header ``theta,re,im``; a single point is one
row with an empty theta field.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np


def fmt(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"refusing to serialise non-finite value {x}")
    return format(x, ".17g")


@dataclass
class OutputDocument:
    meta: dict
    payload: dict = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return self.meta.get("kind", "unknown")


def curve_document(meta: dict, thetas, points, extra: dict | None = None) -> OutputDocument:
    meta = dict(meta, kind="curve", samples=len(points))
    payload = {"samples": [{"theta": float(t), "re": float(w.real), "im": float(w.imag)}
                           for t, w in zip(thetas, np.asarray(points, dtype=complex))]}
    if extra:
        payload.update(extra)
    return OutputDocument(meta, payload)


def point_document(meta: dict, value: complex) -> OutputDocument:
    value = complex(value)
    return OutputDocument(dict(meta, kind="point"), {"point": {"re": value.real, "im": value.imag}})


def disk_document(meta: dict, center: complex, radius: float, kind: str = "disk") -> OutputDocument:
    center = complex(center)
    return OutputDocument(dict(meta, kind=kind),
                          {"center": {"re": center.real, "im": center.imag}, "radius": float(radius)})


def curve_points(doc: OutputDocument, key: str = "samples") -> tuple[np.ndarray, np.ndarray]:
    rows = doc.payload[key]
    thetas = np.array([r["theta"] for r in rows], dtype=float)
    pts = np.array([complex(r["re"], r["im"]) for r in rows])
    return thetas, pts


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj.values()):
            return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}"
                                   for k, v in obj.items()) + "}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(obj, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def to_json(doc: OutputDocument) -> str:
    return dumps_json({"meta": doc.meta, **doc.payload})


def from_json(text: str) -> OutputDocument:
    data = json.loads(text)
    meta = data.pop("meta")
    return OutputDocument(meta, data)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def to_csv(doc: OutputDocument) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if doc.kind == "curve":
        w.writerow(["theta", "re", "im"])
        for row in doc.payload["samples"]:
            w.writerow([fmt(row["theta"]), fmt(row["re"]), fmt(row["im"])])
    elif doc.kind == "point":
        w.writerow(["theta", "re", "im"])
        pt = doc.payload["point"]
        w.writerow(["", fmt(pt["re"]), fmt(pt["im"])])
    elif doc.kind in ("disk", "growth"):
        w.writerow(["re", "im", "radius"])
        c = doc.payload["center"]
        w.writerow([fmt(c["re"]), fmt(c["im"]), fmt(doc.payload["radius"])])
    else:
        raise ValueError(f"CSV output is not available for {doc.kind} documents")
    return buf.getvalue()


def from_csv(text: str) -> OutputDocument:
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    if header == ["theta", "re", "im"]:
        if len(body) == 1 and body[0][0] == "":
            return point_document({}, complex(float(body[0][1]), float(body[0][2])))
        thetas = [float(r[0]) for r in body]
        pts = [complex(float(r[1]), float(r[2])) for r in body]
        return curve_document({}, thetas, pts)
    if header == ["re", "im", "radius"]:
        r = body[0]
        return disk_document({}, complex(float(r[0]), float(r[1])), float(r[2]))
    raise ValueError(f"unrecognised CSV header {header}")


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

def to_svg(doc: OutputDocument) -> str:
    """Single closed polyline; viewBox is the bounding box plus a 5% margin, with hairline axes."""
    if doc.kind != "curve":
        raise ValueError("SVG output is only available for curve documents")
    _, pts = curve_points(doc)
    xs = pts.real
    ys = -pts.imag  # SVG y grows downwards
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    span = max(x1 - x0, y1 - y0, 1e-300)
    mx = 0.05 * (x1 - x0 if x1 > x0 else span)
    my = 0.05 * (y1 - y0 if y1 > y0 else span)
    vx, vy = x0 - mx, y0 - my
    vw, vh = (x1 - x0) + 2 * mx, (y1 - y0) + 2 * my
    coords = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in zip(xs, ys))
    coords += f" {fmt(xs[0])},{fmt(ys[0])}"
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{fmt(vx)} {fmt(vy)} {fmt(vw)} {fmt(vh)}">\n'
        f'  <line x1="{fmt(vx)}" y1="0" x2="{fmt(vx + vw)}" y2="0" stroke="#888" '
        'stroke-width="0.5" vector-effect="non-scaling-stroke"/>\n'
        f'  <line x1="0" y1="{fmt(vy)}" x2="0" y2="{fmt(vy + vh)}" stroke="#888" '
        'stroke-width="0.5" vector-effect="non-scaling-stroke"/>\n'
        f'  <polyline points="{coords}" fill="none" stroke="black" '
        'stroke-width="1" vector-effect="non-scaling-stroke"/>\n'
        "</svg>\n"
    )


def render(doc: OutputDocument, fmt_name: str) -> str:
    if fmt_name == "csv":
        return to_csv(doc)
    if fmt_name == "json":
        return to_json(doc)
    if fmt_name == "svg":
        return to_svg(doc)
    raise ValueError(f"unknown format {fmt_name}")

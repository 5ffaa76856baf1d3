"""Text and SVG emitters: RFC-4180 CSV, sorted-key JSON and SVG 1.1 drawings.

All output is a pure function of its input, so identical runs give
byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .errors import OutOfDomain
from .lattice import PathConfig, phase_label, triangle_vertices

JSON_SCHEMA = "twentyv.report/1"

PHASE_COLOURS = {
    "F0": "#f2f2f2", "F1": "#9ecae1", "F2": "#fdae6b", "F3": "#a1d99b",
    "F4": "#bcbddc", "F5": "#636363", "F6": "#fdd0a2", "Liquid": "#ffffff",
}
BRANCH_COLOURS = {"NE": "#d62728", "SE": "#1f77b4", "NW": "#2ca02c"}


def _num(v) -> str:
    """Fixed, locale-free float text; NaN and infinities are spelled out."""
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_num(v) for v in r])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return _num(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return _jsonable(obj.item())
    return obj


def to_json(payload: dict) -> str:
    body = {"schema": JSON_SCHEMA, **payload}
    return json.dumps(_jsonable(body), sort_keys=True, indent=2) + "\n"


def _svg(width, height, body) -> str:
    head = (f'<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{width:.0f}" height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">\n')
    return head + "\n".join(body) + "\n</svg>\n"


# lattice configurations ---------------------------------------------------------

def _phase_cells(config: PathConfig, window: int):
    """Label of every window that fits, keyed by the unit cell at its centre."""
    off = (window - 1) // 2
    out = []
    for (x0, y0) in triangle_vertices(config.m):
        try:
            lab = phase_label(config, (x0, y0), window)
        except OutOfDomain:
            continue
        out.append(((x0 + off, y0 - off), lab))
    return out


def config_svg(config: PathConfig, scale: float = 24.0, phases: bool = False, window: int = 2) -> str:
    """Lattice drawing: domain edges in grey, occupied segments as thick strokes.

    Osculations show up as two paths touching at a vertex without sharing
    a segment.  With ``phases`` the triangle is tiled by square windows
    coloured by their frozen-phase label: each window that fits in the
    domain paints its central unit cell.
    """
    m = config.m
    pad = scale
    size = (m + 1) * scale + 2 * pad

    def px(p):
        return pad + (p[0] + m) * scale, pad + (m - p[1]) * scale

    body = []
    if phases:
        for (x0, y0), lab in _phase_cells(config, window):
            (ax, ay) = px((x0, y0))
            body.append(f'<rect x="{ax:.2f}" y="{ay:.2f}" width="{scale:.2f}" '
                        f'height="{scale:.2f}" fill="{PHASE_COLOURS[lab]}" '
                        f'fill-opacity="0.7"><title>{lab}</title></rect>')
    for s in sorted(config.domain.internal | config.domain.external):
        (ax, ay), (bx, by) = px(s[0]), px(s[1])
        body.append(f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" '
                    f'stroke="#cccccc" stroke-width="1"/>')
    for s in sorted(config.occupied):
        (ax, ay), (bx, by) = px(s[0]), px(s[1])
        body.append(f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" '
                    f'stroke="#000000" stroke-width="3" stroke-linecap="round"/>')
    for v in triangle_vertices(m):
        cx, cy = px(v)
        body.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{scale / 10:.2f}" fill="#555555"/>')
    return _svg(size, size, body)


# arctic curves ----------------------------------------------------------------------

def curve_svg(branches, scale: float = 200.0, title: str = "") -> str:
    """Branches in the rescaled frame, with the domain triangle and the rays to (-1, 1).

    The frame has the SE corner at the origin and the domain
    ``x <= 0, y <= 2, x + y >= 0``.
    """
    pad = 0.15 * scale

    def px(x, y):
        return pad + (x + 2) * scale, pad + (2 - y) * scale

    size = 2 * scale + 2 * pad
    corners = [(0.0, 0.0), (0.0, 2.0), (-2.0, 2.0)]
    pts = " ".join("%.3f,%.3f" % px(*c) for c in corners)
    body = [f'<polygon points="{pts}" fill="none" stroke="#000000" stroke-width="1.5"/>']
    hub = px(-1.0, 1.0)
    for c in corners:
        cx, cy = px(*c)
        body.append(f'<line x1="{hub[0]:.3f}" y1="{hub[1]:.3f}" x2="{cx:.3f}" y2="{cy:.3f}" '
                    f'stroke="#999999" stroke-dasharray="4 4" stroke-width="1"/>')
    for b in branches:
        xy = b.xy
        if not len(xy):
            continue
        path = " ".join("%.4f,%.4f" % px(float(x), float(y)) for x, y in xy)
        colour = BRANCH_COLOURS.get(b.branch, "#000000")
        body.append(f'<polyline points="{path}" fill="none" stroke="{colour}" stroke-width="2">'
                    f'<title>{b.branch}</title></polyline>')
    if title:
        body.append(f'<text x="{pad:.1f}" y="{pad * 0.6:.1f}" font-family="monospace" '
                    f'font-size="{scale / 16:.1f}">{title}</text>')
    return _svg(size, size, body)


__all__ = ["JSON_SCHEMA", "to_csv", "to_json", "config_svg", "curve_svg"]

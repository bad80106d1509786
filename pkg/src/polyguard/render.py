"""Plain SVG pictures of polygons and what was computed on them.

Output is a deterministic string: coordinates are printed with a fixed
precision and elements are emitted in a fixed order.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .geometry import SimplePolygon

PALETTE = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a6cee3", "#f781bf", "#a65628", "#999999", "#dede00"]


def _fmt(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Canvas:
    def __init__(self, P: SimplePolygon, size: int, margin: float = 0.05):
        lo, hi = P.coords.min(axis=0), P.coords.max(axis=0)
        span = float(max(hi - lo)) or 1.0
        self.lo, self.span, self.size = lo - margin * span, span * (1 + 2 * margin), size
        self.unit = size / self.span

    def xy(self, p) -> tuple[str, str]:
        x = (float(p[0]) - self.lo[0]) * self.unit
        y = self.size - (float(p[1]) - self.lo[1]) * self.unit
        return _fmt(x), _fmt(y)

    def points(self, pts) -> str:
        return " ".join(",".join(self.xy(p)) for p in pts)


def render_svg(
    P: SimplePolygon,
    triangulation=None,
    triplets: Optional[Sequence] = None,
    guards: Optional[Sequence] = None,
    territories: Optional[Sequence] = None,
    medial=None,
    agents: Optional[Sequence] = None,
    size: int = 600,
) -> str:
    """SVG text for ``P`` with optional overlays.

    ``territories`` is a list of point arrays, ``agents`` a list of points
    (drawn as small squares), ``medial`` a MedialAxis whose edges are drawn
    as 32-segment polylines.
    """
    c = _Canvas(P, size)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        "<defs>",
        '<pattern id="hatch" width="6" height="6" patternUnits="userSpaceOnUse" patternTransform="rotate(45)">',
        '<line x1="0" y1="0" x2="0" y2="6" stroke="#555" stroke-width="1"/>',
        "</pattern>",
        "</defs>",
        f'<polygon class="polygon" points="{c.points(P.coords)}" fill="#f4f4f4" stroke="#000" stroke-width="1.5"/>',
    ]
    if triangulation is not None:
        colour = {}
        for k, t in enumerate(triplets or []):
            for m in t.members:
                colour.setdefault(m, PALETTE[k % len(PALETTE)])
        for k, tri in enumerate(triangulation.triangles):
            fill = colour.get(k, "none")
            op = ' fill-opacity="0.35"' if k in colour else ""
            out.append(
                f'<polygon class="triangle" points="{c.points(P.coords[list(tri)])}" fill="{fill}"{op} stroke="#888" stroke-width="0.5"/>'
            )
    for k, region in enumerate(territories or []):
        pts = np.asarray(region, dtype=float)
        out.append(
            f'<polygon class="territory" points="{c.points(pts)}" fill="url(#hatch)" '
            f'stroke="{PALETTE[k % len(PALETTE)]}" stroke-width="1"/>'
        )
    if medial is not None:
        for e in medial.edges:
            pts = e.sample(33, include_ends=True)
            out.append(f'<polyline class="medial" points="{c.points(pts)}" fill="none" stroke="#1f78b4" stroke-width="1"/>')
    for p in agents or []:
        x, y = c.xy(p)
        out.append(
            f'<rect class="agent" x="{_fmt(float(x) - 3)}" y="{_fmt(float(y) - 3)}" width="6" height="6" fill="#ff7f00"/>'
        )
    for g in guards or []:
        x, y = c.xy(g)
        out.append(f'<circle class="guard" cx="{x}" cy="{y}" r="4" fill="#d7191c" stroke="#000" stroke-width="0.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

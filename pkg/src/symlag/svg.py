"""SVG pictures of broken tropical curves."""
from __future__ import annotations

import xml.etree.ElementTree as ET
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .tropical import TropicalCurve

SCALE = 40.0
MARGIN = 3
BASE_STROKE = 1.5
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def _anchors(curves: Sequence[TropicalCurve]) -> dict[str, tuple]:
    # anchor legs come first in every curve, in the order of anchors_used
    pts: dict[str, tuple] = {}
    for c in curves:
        for name, e in zip(c.anchors_used, c.edges):
            pts.setdefault(name, e.start)
    return dict(sorted(pts.items()))


def _clip_ray(start, direction, box) -> tuple:
    """Point where the ray leaves the box (start is assumed inside or on it)."""
    xmin, ymin, xmax, ymax = box
    ts = []
    for k, (lo, hi) in enumerate(((xmin, xmax), (ymin, ymax))):
        d = direction[k]
        if d > 0:
            ts.append((hi - start[k]) / d)
        elif d < 0:
            ts.append((lo - start[k]) / d)
    t = max(min(ts), Fraction(0))
    return (start[0] + t * direction[0], start[1] + t * direction[1])


def render_svg(curves: Sequence[TropicalCurve], out=None) -> str:
    """Draw the curves, one ``<g>`` each, and write to ``out`` if given.

    The viewport is the anchors' bounding box grown by three units; rays stop
    at its edge and stroke width grows with edge weight.
    """
    if not curves:
        raise ValueError("nothing to draw")
    anchors = _anchors(curves)
    xs = [p[0] for p in anchors.values()]
    ys = [p[1] for p in anchors.values()]
    box = (min(xs) - MARGIN, min(ys) - MARGIN, max(xs) + MARGIN, max(ys) + MARGIN)
    width = float(box[2] - box[0]) * SCALE
    height = float(box[3] - box[1]) * SCALE

    def px(p) -> str:
        # y grows downward in SVG
        return f"{float(p[0] - box[0]) * SCALE:.3f},{float(box[3] - p[1]) * SCALE:.3f}"

    root = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "width": f"{width:.0f}", "height": f"{height:.0f}",
        "viewBox": f"0 0 {width:.3f} {height:.3f}",
    })
    ET.SubElement(root, "rect", {"x": "0", "y": "0", "width": f"{width:.3f}", "height": f"{height:.3f}",
                                 "fill": "white"})
    for i, curve in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        g = ET.SubElement(root, "g", {"class": "curve", "stroke": color, "fill": "none",
                                      "data-label": curve.label})
        for e in curve.edges:
            end = e.end if e.bounded else _clip_ray(e.start, e.direction, box)
            ET.SubElement(g, "polyline", {
                "points": f"{px(e.start)} {px(end)}",
                "stroke-width": f"{BASE_STROKE * e.weight:g}",
                "data-weight": str(e.weight),
                "class": "ray" if not e.bounded else "edge",
            })
    for name, p in anchors.items():
        x, y = px(p).split(",")
        ET.SubElement(root, "circle", {"cx": x, "cy": y, "r": "4", "fill": "black", "class": "anchor"})
        label = ET.SubElement(root, "text", {"x": f"{float(x) + 6:.3f}", "y": f"{float(y) - 6:.3f}",
                                             "font-size": "12", "font-family": "sans-serif"})
        label.text = name
    text = ET.tostring(root, encoding="unicode")
    if out is not None:
        Path(out).write_text(text + "\n", encoding="utf-8")
    return text

"""SVG output of drawings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Drawing


@dataclass(frozen=True)
class RenderStyle:
    """Stroke and canvas settings. ``canvas`` is the pixel width; the height
    follows the drawing's aspect ratio. Edges in ``highlight`` are drawn on
    top in ``highlight_color``."""

    color: str = "#1f4e9c"
    alpha: float = 0.35
    line_width: float = 1.0
    vertex_radius: float = 1.5
    vertex_color: str = "#202020"
    highlight: frozenset = frozenset()
    highlight_color: str = "#d62728"
    canvas: int = 1000
    margin: float = 0.02

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if not self.line_width > 0 or self.canvas <= 0:
            raise ValueError("line width and canvas size must be positive")
        if self.vertex_radius < 0 or self.margin < 0:
            raise ValueError("vertex radius and margin must be nonnegative")
        object.__setattr__(self, "highlight", frozenset(int(e) for e in self.highlight))


def _num(x: float) -> str:
    # fixed significant digits keep output byte-stable and compact
    s = f"{x:.7g}"
    return "0" if s == "-0" else s


def to_svg(drawing: Drawing, style: RenderStyle | None = None) -> str:
    """One ``<path>`` per polyline (in edge order) and one ``<circle>`` per
    vertex when ``vertex_radius > 0``. The y axis points up in data space."""
    style = style or RenderStyle()
    if len(drawing.positions):
        x0, y0, x1, y1 = drawing.bounds()
    else:
        x0 = y0 = 0.0
        x1 = y1 = 1.0
    ext = max(x1 - x0, y1 - y0) or 1.0
    pad = style.margin * ext
    vx, vy = x0 - pad, -(y1 + pad)
    vw, vh = (x1 - x0) + 2 * pad or ext, (y1 - y0) + 2 * pad or ext
    scale = ext / style.canvas  # data units per pixel
    w = style.canvas
    h = max(1, int(round(w * vh / vw)))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="{_num(vx)} {_num(vy)} {_num(vw)} {_num(vh)}">',
        f'<g fill="none" stroke="{style.color}" stroke-opacity="{_num(style.alpha)}" '
        f'stroke-width="{_num(style.line_width * scale)}" stroke-linecap="round" stroke-linejoin="round">',
    ]
    late = []
    for i, pl in enumerate(drawing.polylines):
        d = "M" + " L".join(f"{_num(x)} {_num(-y)}" for x, y in pl)
        if i in style.highlight:
            late.append(f'<path d="{d}" stroke="{style.highlight_color}" stroke-opacity="1"/>')
        else:
            out.append(f'<path d="{d}"/>')
    out.extend(late)
    out.append("</g>")
    if style.vertex_radius > 0 and len(drawing.positions):
        r = _num(style.vertex_radius * scale)
        out.append(f'<g fill="{style.vertex_color}">')
        for x, y in np.asarray(drawing.positions):
            out.append(f'<circle cx="{_num(x)}" cy="{_num(-y)}" r="{r}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def save_svg(drawing: Drawing, path, style: RenderStyle | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_svg(drawing, style))

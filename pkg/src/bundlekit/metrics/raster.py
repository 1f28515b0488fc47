"""Anti-aliased polyline rasterization and the ink metric."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from ..graph import Drawing


@dataclass(frozen=True, eq=False)
class RasterImage:
    grey: np.ndarray
    threshold: float = 0.5

    def __post_init__(self):
        g = np.asarray(self.grey, dtype=np.float64)
        if g.ndim != 2 or g.shape[0] < 1 or g.shape[1] < 1:
            raise ValueError("raster must be a non-empty 2-d array")
        if g.min() < 0.0 or g.max() > 1.0:
            raise ValueError("grey values must lie in [0, 1]")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("binarization threshold must lie in (0, 1)")
        object.__setattr__(self, "grey", g)

    @property
    def height(self) -> int:
        return self.grey.shape[0]

    @property
    def width(self) -> int:
        return self.grey.shape[1]

    def binary(self) -> np.ndarray:
        return self.grey > self.threshold

    def lit(self) -> int:
        return int(self.binary().sum())

    def save_png(self, path) -> None:
        from PIL import Image

        # ink is dark on a white page
        Image.fromarray(np.round(255 * (1.0 - self.grey)).astype(np.uint8), mode="L").save(path)


@njit(cache=True)
def _draw_segments(img, xs, ys, starts, half):
    h, w = img.shape
    reach = half + 0.5
    for p in range(starts.shape[0] - 1):
        for k in range(starts[p], starts[p + 1] - 1):
            ax, ay, bx, by = xs[k], ys[k], xs[k + 1], ys[k + 1]
            dx, dy = bx - ax, by - ay
            l2 = dx * dx + dy * dy
            i0 = max(0, int(math.floor(min(ay, by) - reach)))
            i1 = min(h - 1, int(math.ceil(max(ay, by) + reach)))
            j0 = max(0, int(math.floor(min(ax, bx) - reach)))
            j1 = min(w - 1, int(math.ceil(max(ax, bx) + reach)))
            slope = dx / dy if dy != 0.0 else 0.0
            # half-width of the row span covering the line's neighbourhood
            span = reach * math.sqrt(l2) / abs(dy) + 1.0 if dy != 0.0 else 0.0
            for i in range(i0, i1 + 1):
                cy = i + 0.5
                lo, hi = j0, j1
                if dy != 0.0:
                    xc = ax + (cy - ay) * slope
                    lo = max(j0, int(math.floor(xc - span)))
                    hi = min(j1, int(math.ceil(xc + span)))
                for j in range(lo, hi + 1):
                    cx = j + 0.5
                    if l2 > 0.0:
                        t = ((cx - ax) * dx + (cy - ay) * dy) / l2
                        t = min(1.0, max(0.0, t))
                    else:
                        t = 0.0
                    dist = math.hypot(cx - (ax + t * dx), cy - (ay + t * dy))
                    # box-filter coverage of a line of width 2*half
                    val = reach - dist
                    if val > 1.0:
                        val = 1.0
                    if val > img[i, j]:
                        img[i, j] = val


def frame(bounds, width: int, line_width: float):
    """Pixel transform ``(scale, x0, y1, pad, height)`` for data ``bounds``."""
    x0, y0, x1, y1 = bounds
    ext = max(x1 - x0, y1 - y0)
    if not ext > 0:
        raise ValueError("degenerate drawing: zero extent")
    pad = int(math.ceil(line_width)) + 1
    scale = (width - 2 * pad - 1) / ext
    height = 2 * pad + 1 + int(math.ceil((y1 - y0) * scale - 1e-9))
    return scale, x0, y1, pad, height


def rasterize(
    drawing: Drawing,
    width: int = 2048,
    line_width: float = 1.0,
    *,
    bounds=None,
    threshold: float = 0.5,
) -> RasterImage:
    """Render every polyline with ink 1 on a 0 background.

    Height follows the aspect ratio of ``bounds`` (default: the drawing's own
    bounding box). Pass shared bounds to compare two drawings pixel for pixel.
    """
    if width < 16:
        raise ValueError("raster width must be at least 16 pixels")
    if not line_width > 0:
        raise ValueError("line width must be positive")
    scale, x0, y1, pad, height = frame(bounds or drawing.bounds(), width, line_width)
    img = np.zeros((height, width))
    if len(drawing.polylines):
        pts = np.concatenate(drawing.polylines)
        starts = np.zeros(len(drawing.polylines) + 1, dtype=np.int64)
        starts[1:] = np.cumsum([len(p) for p in drawing.polylines])
        xs = pad + 0.5 + (pts[:, 0] - x0) * scale
        ys = pad + 0.5 + (y1 - pts[:, 1]) * scale
        _draw_segments(img, xs, ys, starts, line_width / 2.0)
    return RasterImage(img, threshold)


def union_bounds(*drawings: Drawing):
    b = np.array([d.bounds() for d in drawings])
    return (b[:, 0].min(), b[:, 1].min(), b[:, 2].max(), b[:, 3].max())


def ink_reduction(original: RasterImage, bundled: RasterImage) -> float:
    """Lit pixels of ``bundled`` over lit pixels of ``original`` (lower is less ink)."""
    if original.grey.shape != bundled.grey.shape:
        raise ValueError("raster dimensions differ")
    if original.threshold != bundled.threshold:
        raise ValueError("binarization thresholds differ")
    denom = original.lit()
    if denom == 0:
        raise ValueError("original raster has no lit pixels")
    return bundled.lit() / denom

"""Straight-line drawings: imported coordinates or a Fruchterman-Reingold spring embedder."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Drawing, Graph


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class LayoutParams:
    algorithm: str = "force"
    iterations: int = 100
    seed: int = 0
    width: float = 1000.0
    height: float = 1000.0
    reuse_positions: bool = True

    def __post_init__(self):
        if self.algorithm not in ("import", "force"):
            raise ValueError(f"unknown layout algorithm {self.algorithm!r}")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not (self.width > 0 and self.height > 0):
            raise ValueError("layout area must be positive")


def compute_layout(graph: Graph, params: LayoutParams, coordinates=None) -> Drawing:
    """Straight-line drawing of ``graph``.

    ``import`` passes ``coordinates`` (an ``(n, 2)`` array or a Drawing)
    through unchanged; ``force`` ignores them.
    """
    if graph.n == 0:
        raise LayoutError("graph has no vertices")
    if params.algorithm == "import":
        if coordinates is None:
            raise LayoutError("layout algorithm 'import' needs coordinates")
        pos = coordinates.positions if isinstance(coordinates, Drawing) else coordinates
        return Drawing.straight(graph, np.asarray(pos, dtype=np.float64))
    return Drawing.straight(graph, fruchterman_reingold(graph, params))


def fruchterman_reingold(graph: Graph, params: LayoutParams) -> np.ndarray:
    n = graph.n
    w, h = float(params.width), float(params.height)
    rng = np.random.default_rng(params.seed)
    pos = rng.random((n, 2)) * [w, h]
    if n == 1:
        return pos
    k = math.sqrt(w * h / n)
    t0 = w / 10.0
    u, v = graph.u, graph.v
    eye = np.eye(n, dtype=bool)
    for it in range(params.iterations):
        temp = t0 * (1.0 - it / params.iterations)
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt((delta ** 2).sum(axis=-1))
        np.fill_diagonal(dist, 1.0)
        # coincident vertices get a fixed unit push so repulsion stays finite
        tiny = (dist < 1e-9) & ~eye
        if tiny.any():
            i, j = np.nonzero(tiny)
            delta[i, j] = np.where((i < j)[:, None], [1e-6, 0.0], [-1e-6, 0.0])
            dist[i, j] = 1e-6
        rep = (k * k / dist ** 2)[:, :, None] * delta
        rep[eye] = 0.0
        disp = rep.sum(axis=1)
        d = pos[u] - pos[v]
        dl = np.sqrt((d ** 2).sum(axis=1))
        att = (dl / k)[:, None] * d
        np.subtract.at(disp, u, att)
        np.add.at(disp, v, att)
        length = np.sqrt((disp ** 2).sum(axis=1))
        scale = np.minimum(length, temp) / np.where(length > 0, length, 1.0)
        pos = pos + disp * scale[:, None]
        pos[:, 0] = np.clip(pos[:, 0], 0.0, w)
        pos[:, 1] = np.clip(pos[:, 1], 0.0, h)
    return pos

"""Force-directed edge bundling (FDEB) and its effective-resistance variant (SEB)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from ..graph import Drawing
from ..sparsify import EffectiveResistanceMap
from .compat import VARIANTS, compat_graph


FRAME = 1000.0  # solver coordinates: the drawing diagonal measures FRAME units


@dataclass(frozen=True)
class FdebParams:
    """Bundling schedule.

    The solver rescales the drawing so its diagonal measures ``FRAME`` units;
    ``initial_step`` (displacement per unit force) and ``max_move`` (largest
    displacement of a point in one iteration) are in those units, so results
    do not depend on the input coordinate scale. Iterations, step and
    ``max_move`` halve after every cycle while the division points double.
    """

    cycles: int = 6
    iterations_per_cycle: int = 50
    initial_step: float = 1.0
    spring_constant: float = 0.1
    compatibility_threshold: float = 0.05
    max_move: float = 2.0

    def __post_init__(self):
        if self.cycles < 1 or self.iterations_per_cycle < 1:
            raise ValueError("cycles and iterations must be positive")
        if not (self.initial_step > 0 and self.spring_constant > 0 and self.max_move > 0):
            raise ValueError("step size, spring constant and max_move must be positive")
        if not 0.0 <= self.compatibility_threshold <= 1.0:
            raise ValueError("compatibility threshold must lie in [0, 1]")


@njit(cache=True)
def _resample(X, d_new):
    """Place ``d_new`` division points evenly by arc length on each polyline."""
    m, npts = X.shape[0], X.shape[1]
    out = np.empty((m, d_new + 2, 2))
    seg = np.empty(npts - 1)
    for i in range(m):
        total = 0.0
        for k in range(npts - 1):
            seg[k] = math.hypot(X[i, k + 1, 0] - X[i, k, 0], X[i, k + 1, 1] - X[i, k, 1])
            total += seg[k]
        out[i, 0] = X[i, 0]
        out[i, d_new + 1] = X[i, npts - 1]
        step = total / (d_new + 1)
        k = 0
        acc = 0.0
        for s in range(1, d_new + 1):
            target = s * step
            while k < npts - 2 and acc + seg[k] < target:
                acc += seg[k]
                k += 1
            t = (target - acc) / seg[k] if seg[k] > 0.0 else 0.0
            if t > 1.0:
                t = 1.0
            out[i, s, 0] = X[i, k, 0] + t * (X[i, k + 1, 0] - X[i, k, 0])
            out[i, s, 1] = X[i, k, 1] + t * (X[i, k + 1, 1] - X[i, k, 1])
    return out


@njit(parallel=True, cache=True)
def _iterate(X, out, indptr, nbr, score, flip, kp, step, cap):
    m, npts = X.shape[0], X.shape[1]
    d = npts - 2
    for i in prange(m):
        out[i, 0] = X[i, 0]
        out[i, npts - 1] = X[i, npts - 1]
        for k in range(1, d + 1):
            px, py = X[i, k, 0], X[i, k, 1]
            fx = kp[i] * (X[i, k - 1, 0] + X[i, k + 1, 0] - 2.0 * px)
            fy = kp[i] * (X[i, k - 1, 1] + X[i, k + 1, 1] - 2.0 * py)
            for a in range(indptr[i], indptr[i + 1]):
                j = nbr[a]
                kk = npts - 1 - k if flip[a] else k
                dx = X[j, kk, 0] - px
                dy = X[j, kk, 1] - py
                r2 = dx * dx + dy * dy
                if r2 > 1e-24:
                    # magnitude score / r toward q_i
                    fx += score[a] * dx / r2
                    fy += score[a] * dy / r2
            mx, my = step * fx, step * fy
            norm = math.hypot(mx, my)
            if norm > cap:
                mx *= cap / norm
                my *= cap / norm
            out[i, k, 0] = px + mx
            out[i, k, 1] = py + my


def _force_bundle(drawing: Drawing, params: FdebParams, er_values: np.ndarray, variant: int) -> Drawing:
    m = len(drawing.edges)
    if m == 0:
        return drawing
    if not drawing.is_straight():
        raise ValueError("force-directed bundling expects a straight-line drawing")
    pos = drawing.positions
    S = pos[drawing.edges[:, 0]]
    T = pos[drawing.edges[:, 1]]
    x0, y0, x1, y1 = drawing.bounds()
    diag = math.hypot(x1 - x0, y1 - y0)
    if diag == 0.0:
        return drawing
    origin = np.array([x0, y0])
    Sn = (S - origin) * (FRAME / diag)
    Tn = (T - origin) * (FRAME / diag)
    indptr, nbr, score, flip = compat_graph(Sn, Tn, er_values, variant, params.compatibility_threshold)
    lengths = np.hypot(*(Tn - Sn).T)
    kp = np.where(lengths > 0, params.spring_constant / np.where(lengths > 0, lengths, 1.0), 0.0)

    X = np.stack([Sn, Tn], axis=1)
    d = 1
    step = params.initial_step
    cap = params.max_move
    iters = params.iterations_per_cycle
    for _ in range(params.cycles):
        X = _resample(X, d)
        buf = np.empty_like(X)
        for _ in range(iters):
            _iterate(X, buf, indptr, nbr, score, flip, kp, step, cap)
            X, buf = buf, X
        d *= 2
        step /= 2.0
        cap /= 2.0
        iters = max(1, iters // 2)

    lines = []
    for i in range(m):
        pl = X[i] * (diag / FRAME) + origin
        pl[0] = S[i]
        pl[-1] = T[i]
        lines.append(pl)
    return drawing.with_polylines(lines)


def fdeb_bundle(drawing: Drawing, params: FdebParams | None = None) -> Drawing:
    """Force-directed edge bundling of a straight-line drawing.

    Each division point feels a spring toward its polyline neighbours and, for
    every compatible edge ``Q``, an attraction of magnitude ``C_G / r`` toward
    the matching division point of ``Q``. Pairs below the compatibility
    threshold never interact. Endpoints stay fixed.
    """
    params = params or FdebParams()
    ones = np.ones(len(drawing.edges))
    return _force_bundle(drawing, params, ones, VARIANTS["none"])


def seb_bundle(
    drawing: Drawing,
    er: EffectiveResistanceMap,
    variant: str = "er2",
    params: FdebParams | None = None,
) -> Drawing:
    """FDEB with the pairwise weight ``C_G * C_ER`` (``variant`` is ``er1`` or ``er2``)."""
    if variant not in ("er1", "er2"):
        raise ValueError(f"unknown SEB variant {variant!r}")
    if len(er) != len(drawing.edges):
        raise ValueError(
            f"effective resistance map has {len(er)} entries for {len(drawing.edges)} edges"
        )
    params = params or FdebParams()
    return _force_bundle(drawing, params, np.asarray(er.normalized, dtype=np.float64), VARIANTS[variant])

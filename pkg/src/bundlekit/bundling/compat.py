"""Pairwise edge compatibility: the four geometric FDEB terms and the
effective-resistance terms used by SEB."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

VARIANT_NONE, VARIANT_ER1, VARIANT_ER2 = 0, 1, 2
VARIANTS = {"none": VARIANT_NONE, "er1": VARIANT_ER1, "er2": VARIANT_ER2}


@njit(cache=True)
def _visibility(px0, py0, px1, py1, qx0, qy0, qx1, qy1):
    # project Q's endpoints onto the line through P
    dx, dy = px1 - px0, py1 - py0
    l2 = dx * dx + dy * dy
    t0 = ((qx0 - px0) * dx + (qy0 - py0) * dy) / l2
    t1 = ((qx1 - px0) * dx + (qy1 - py0) * dy) / l2
    ix0, iy0 = px0 + t0 * dx, py0 + t0 * dy
    ix1, iy1 = px0 + t1 * dx, py0 + t1 * dy
    ex, ey = ix1 - ix0, iy1 - iy0
    il = math.sqrt(ex * ex + ey * ey)
    if il == 0.0:
        return 0.0
    mx, my = 0.5 * (px0 + px1), 0.5 * (py0 + py1)
    jx, jy = 0.5 * (ix0 + ix1), 0.5 * (iy0 + iy1)
    gx, gy = mx - jx, my - jy
    vis = 1.0 - 2.0 * math.sqrt(gx * gx + gy * gy) / il
    return vis if vis > 0.0 else 0.0


@njit(cache=True)
def _partial_core(pdx, pdy, lp, pmx, pmy, qdx, qdy, lq, qmx, qmy):
    """Angle, scale and position terms from precomputed edge vectors,
    lengths and midpoints."""
    if lp == 0.0 or lq == 0.0:
        return 0.0
    angle = abs(pdx * qdx + pdy * qdy) / (lp * lq)
    if angle > 1.0:
        angle = 1.0
    lavg = 0.5 * (lp + lq)
    scale = 2.0 / (lavg / min(lp, lq) + max(lp, lq) / lavg)
    ex, ey = pmx - qmx, pmy - qmy
    position = lavg / (lavg + math.sqrt(ex * ex + ey * ey))
    return angle * scale * position


@njit(cache=True)
def _partial_compat(px0, py0, px1, py1, qx0, qy0, qx1, qy1):
    pdx, pdy = px1 - px0, py1 - py0
    qdx, qdy = qx1 - qx0, qy1 - qy0
    return _partial_core(
        pdx, pdy, math.sqrt(pdx * pdx + pdy * pdy), 0.5 * (px0 + px1), 0.5 * (py0 + py1),
        qdx, qdy, math.sqrt(qdx * qdx + qdy * qdy), 0.5 * (qx0 + qx1), 0.5 * (qy0 + qy1),
    )


@njit(cache=True)
def geometric_compat(px0, py0, px1, py1, qx0, qy0, qx1, qy1):
    """Product of angle, scale, position and visibility compatibility."""
    c = _partial_compat(px0, py0, px1, py1, qx0, qy0, qx1, qy1)
    if c == 0.0:
        return 0.0
    vis = min(
        _visibility(px0, py0, px1, py1, qx0, qy0, qx1, qy1),
        _visibility(qx0, qy0, qx1, qy1, px0, py0, px1, py1),
    )
    return c * vis


@njit(cache=True)
def er_compat(a, b, variant):
    if variant == 1:
        return 1.0 - abs(a - b)
    if variant == 2:
        hi = max(a, b)
        if hi == 0.0:
            return 1.0
        return min(a, b) / hi
    return 1.0


def _segment(p):
    p = np.asarray(p, dtype=np.float64)
    return p[0], p[-1]


def c_geometric(P, Q) -> float:
    """Geometric compatibility of two drawn edges (uses their endpoints)."""
    (a, b), (c, d) = _segment(P), _segment(Q)
    return float(geometric_compat(a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1]))


def _check_unit(x):
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"normalized effective resistance {x} outside [0, 1]")


def c_er1(er_p: float, er_q: float) -> float:
    """``1 - |ER(P) - ER(Q)|``."""
    _check_unit(er_p)
    _check_unit(er_q)
    return float(er_compat(float(er_p), float(er_q), VARIANT_ER1))


def c_er2(er_p: float, er_q: float) -> float:
    """``min / max`` of the two values; two zeros count as identical (1)."""
    _check_unit(er_p)
    _check_unit(er_q)
    return float(er_compat(float(er_p), float(er_q), VARIANT_ER2))


@dataclass(frozen=True)
class CompatibilityScore:
    geometric: float
    spectral: float
    combined: float


def compatibility(P, Q, er_p: float = 1.0, er_q: float = 1.0, variant: str = "none") -> CompatibilityScore:
    g = c_geometric(P, Q)
    s = float(er_compat(float(er_p), float(er_q), VARIANTS[variant]))
    return CompatibilityScore(g, s, g * s)


@njit(cache=True)
def compat_graph(S, T, er, variant, threshold):
    """Symmetric CSR of compatible pairs: ``(indptr, nbr, score, flip)``.

    A pair is kept when its combined score is positive and at least
    ``threshold``. ``flip`` marks pairs whose edges run in opposite directions.
    Neighbor lists are in ascending edge order.
    """
    m = S.shape[0]
    D = T - S
    L = np.sqrt(D[:, 0] * D[:, 0] + D[:, 1] * D[:, 1])
    M = 0.5 * (S + T)
    cap = 1024
    pi = np.empty(cap, np.int32)
    pj = np.empty(cap, np.int32)
    pc = np.empty(cap, np.float64)
    pf = np.empty(cap, np.bool_)
    k = 0
    for i in range(m):
        for j in range(i + 1, m):
            c = _partial_core(D[i, 0], D[i, 1], L[i], M[i, 0], M[i, 1], D[j, 0], D[j, 1], L[j], M[j, 0], M[j, 1])
            # visibility and C_ER are at most 1, so this bound is safe
            if c == 0.0 or c < threshold:
                continue
            c = geometric_compat(S[i, 0], S[i, 1], T[i, 0], T[i, 1], S[j, 0], S[j, 1], T[j, 0], T[j, 1])
            if c == 0.0:
                continue
            c = c * er_compat(er[i], er[j], variant)
            if not (c > 0.0 and c >= threshold):
                continue
            if k == cap:
                cap *= 2
                pi2 = np.empty(cap, np.int32)
                pj2 = np.empty(cap, np.int32)
                pc2 = np.empty(cap, np.float64)
                pf2 = np.empty(cap, np.bool_)
                pi2[:k] = pi
                pj2[:k] = pj
                pc2[:k] = pc
                pf2[:k] = pf
                pi, pj, pc, pf = pi2, pj2, pc2, pf2
            same = math.hypot(S[i, 0] - S[j, 0], S[i, 1] - S[j, 1]) + math.hypot(T[i, 0] - T[j, 0], T[i, 1] - T[j, 1])
            cross = math.hypot(S[i, 0] - T[j, 0], S[i, 1] - T[j, 1]) + math.hypot(T[i, 0] - S[j, 0], T[i, 1] - S[j, 1])
            pi[k] = i
            pj[k] = j
            pc[k] = c
            pf[k] = cross < same
            k += 1
    indptr = np.zeros(m + 1, np.int64)
    for t in range(k):
        indptr[pi[t] + 1] += 1
        indptr[pj[t] + 1] += 1
    for i in range(m):
        indptr[i + 1] += indptr[i]
    nbr = np.empty(2 * k, np.int32)
    score = np.empty(2 * k, np.float64)
    flip = np.empty(2 * k, np.bool_)
    fill = indptr[:-1].copy()
    # pairs were generated in (i, j) lexicographic order, which keeps every
    # row ascending when both directions are appended in that order
    for t in range(k):
        a, b = pi[t], pj[t]
        nbr[fill[a]] = b
        score[fill[a]] = pc[t]
        flip[fill[a]] = pf[t]
        fill[a] += 1
        nbr[fill[b]] = a
        score[fill[b]] = pc[t]
        flip[fill[b]] = pf[t]
        fill[b] += 1
    return indptr, nbr, score, flip

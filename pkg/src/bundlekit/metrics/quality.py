"""Distortion and ambiguity of a bundled drawing."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..graph import Drawing, Graph
from .geometric import GeometricGraph


def distortion(drawing: Drawing) -> tuple[float, float]:
    """Mean ratio of drawn arc length to endpoint distance.

    Returns ``(raw, reported)`` where ``reported = raw - 1``, so a straight-line
    drawing reports 0.
    """
    if len(drawing.polylines) == 0:
        raise ValueError("drawing has no edges")
    ratios = np.empty(len(drawing.polylines))
    for i, pl in enumerate(drawing.polylines):
        chord = float(np.hypot(*(pl[-1] - pl[0])))
        if chord == 0.0:
            a, b = drawing.edges[i]
            raise ValueError(f"edge ({a}, {b}) has coincident endpoints")
        ratios[i] = np.hypot(*np.diff(pl, axis=0).T).sum() / chord
    raw = float(ratios.mean())
    return raw, raw - 1.0


def _binary(m) -> sp.csr_matrix:
    m = sp.csr_matrix(m, dtype=np.float64)
    m.eliminate_zeros()
    m.data[:] = 1.0
    return m


def _ball_rows(adj: sp.csr_matrix, rows: sp.csr_matrix, radius: int) -> sp.csr_matrix:
    """0/1 rows of vertices within ``radius`` steps of each row's vertex set."""
    reach = _binary(rows)
    adj = _binary(adj)
    for _ in range(radius):
        reach = _binary(reach + reach @ adj)
    return reach


def _incidences(graph: Graph):
    v = np.r_[graph.u, graph.v]
    e = np.r_[np.arange(graph.m), np.arange(graph.m)]
    return v, e


def _first_hop_rows(graph: Graph, geo: GeometricGraph, v: np.ndarray, e: np.ndarray) -> sp.csr_matrix:
    a_end, b_end = geo.bundles.ends(graph.edges)
    bid = geo.bundles.bundle
    members = {}
    for g in geo.bundles.groups():
        members[int(bid[g[0]])] = g
    rows, cols = [], []
    for i, (x, f) in enumerate(zip(v.tolist(), e.tolist())):
        grp = members[int(bid[f])]
        far = b_end[grp] if a_end[f] == x else a_end[grp]
        far = np.unique(far[far != x])
        rows.append(np.full(len(far), i))
        cols.append(far)
    rows = np.concatenate(rows) if rows else np.zeros(0, np.int64)
    cols = np.concatenate(cols) if cols else np.zeros(0, np.int64)
    return sp.csr_matrix((np.ones(len(rows), bool), (rows, cols)), shape=(len(v), graph.n))


def ambiguity(graph: Graph, geo: GeometricGraph, gamma: int) -> float:
    """Share of false neighbours among the vertices reachable through bundles.

    For each endpoint ``v`` of each edge ``e``, the reachable set starts with
    the far ends of ``e``'s bundle as seen from ``v`` and then extends
    ``gamma - 1`` further steps in the geometric graph; ``v`` itself is left
    out. A reachable vertex is false when its graph distance from ``v``
    exceeds ``gamma``. The result is total false over total reachable, or 0
    when nothing is reachable.
    """
    if gamma < 1:
        raise ValueError("gamma must be >= 1")
    if geo.n != graph.n or len(geo.bundles) != graph.m:
        raise ValueError("geometric graph does not belong to this graph")
    if graph.m == 0:
        return 0.0
    v, e = _incidences(graph)
    k = len(v)
    start = _binary(sp.csr_matrix((np.ones(k), (np.arange(k), v)), shape=(k, graph.n)))
    reach = _ball_rows(geo.adjacency(), _first_hop_rows(graph, geo, v, e), gamma - 1)
    reach = _binary(reach - reach.multiply(start))
    total = reach.nnz
    if total == 0:
        return 0.0
    true_ball = _ball_rows(graph.adjacency_matrix(), start, gamma)
    false = total - reach.multiply(true_ball).nnz
    return false / total

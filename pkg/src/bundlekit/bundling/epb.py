"""Edge-path bundling (EPB) and its spanner-accelerated variant (SEPB)."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ..graph import Drawing, Graph


@dataclass(frozen=True)
class EpbParams:
    distortion_limit: float = 2.0
    smoothing: int = 2
    spanner_stretch: float = 2.0

    def __post_init__(self):
        if not self.distortion_limit > 1:
            raise ValueError("distortion limit k must exceed 1")
        if self.smoothing < 0:
            raise ValueError("smoothing must be nonnegative")
        if not self.spanner_stretch >= 1:
            raise ValueError("spanner stretch t must be >= 1")


@dataclass
class EpbTrace:
    """What the router did, in processing order."""

    order: list = field(default_factory=list)
    rerouted: dict = field(default_factory=dict)
    locked: set = field(default_factory=set)
    searches: int = 0
    edges_touched: list = field(default_factory=list)
    search_graph_edges: int = 0


@njit(cache=True)
def _walk(pred, s, x, buf):
    """Write the path s..x into ``buf`` and return its length."""
    n = 0
    while x != s:
        buf[n] = x
        n += 1
        x = pred[x]
    buf[n] = s
    n += 1
    # reverse in place
    for i in range(n // 2):
        buf[i], buf[n - 1 - i] = buf[n - 1 - i], buf[i]
    return n


@njit(cache=True)
def _lex_less(pred, s, x_new, y, x_old, b1, b2):
    """Is path(x_new)+[y] lexicographically smaller than path(x_old)+[y]?"""
    n1 = _walk(pred, s, x_new, b1)
    b1[n1] = y
    n1 += 1
    n2 = _walk(pred, s, x_old, b2)
    b2[n2] = y
    n2 += 1
    for i in range(min(n1, n2)):
        if b1[i] != b2[i]:
            return b1[i] < b2[i]
    return n1 < n2


@njit(cache=True)
def _shortest_path(indptr, nbr, eid, length, usable, s, t, limit, stamp, touch_id):
    """Bounded Dijkstra from ``s`` to ``t`` over edges with ``usable`` set.

    Equal-length alternatives resolve to the lexicographically smallest vertex
    sequence. Returns ``(path vertices, edges touched)``; the path is empty
    when ``t`` is unreachable within ``limit``.
    """
    n = indptr.shape[0] - 1
    dist = np.full(n, np.inf)
    pred = -np.ones(n, np.int64)
    done = np.zeros(n, np.bool_)
    b1 = np.empty(n + 1, np.int64)
    b2 = np.empty(n + 1, np.int64)
    dist[s] = 0.0
    heap = [(0.0, s)]
    touched = 0
    while heap:
        dx, x = heapq.heappop(heap)
        if done[x] or dx > dist[x]:
            continue
        done[x] = True
        if x == t:
            break
        for a in range(indptr[x], indptr[x + 1]):
            e = eid[a]
            if not usable[e]:
                continue
            if stamp[e] != touch_id:
                stamp[e] = touch_id
                touched += 1
            y = nbr[a]
            if done[y]:
                continue
            nd = dx + length[e]
            if nd > limit:
                continue
            if nd < dist[y]:
                dist[y] = nd
                pred[y] = x
                heapq.heappush(heap, (nd, y))
            elif nd == dist[y] and pred[y] != x and _lex_less(pred, s, x, y, pred[y], b1, b2):
                pred[y] = x
    if not done[t]:
        return np.empty(0, np.int64), touched
    k = _walk(pred, s, t, b1)
    return b1[:k].copy(), touched


def _csr(graph: Graph):
    indptr, nbr, eid = graph.csr
    return (
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(nbr, dtype=np.int64),
        np.ascontiguousarray(eid, dtype=np.int64),
    )


def _edge_lengths(graph: Graph, pos: np.ndarray) -> np.ndarray:
    d = pos[graph.u] - pos[graph.v]
    return np.hypot(d[:, 0], d[:, 1])


def chaikin(points: np.ndarray, rounds: int) -> np.ndarray:
    """Corner cutting that keeps the first and last point fixed."""
    pts = np.asarray(points, dtype=np.float64)
    for _ in range(rounds):
        if len(pts) < 3:
            break
        a, b = pts[:-1], pts[1:]
        q = 0.75 * a + 0.25 * b
        r = 0.25 * a + 0.75 * b
        inner = np.empty((2 * len(a), 2))
        inner[0::2] = q
        inner[1::2] = r
        pts = np.vstack([pts[:1], inner[1:-1], pts[-1:]])
    return pts


def greedy_spanner(graph: Graph, lengths: np.ndarray, t: float) -> np.ndarray:
    """Boolean edge mask of the greedy ``t``-spanner under ``lengths``.

    Edges are scanned by increasing length (ties by edge id) and kept when the
    spanner built so far has no path within ``t`` times their length. For
    ``t == 1`` the graph itself is returned.
    """
    if t == 1.0:
        return np.ones(graph.m, dtype=bool)
    indptr, nbr, eid = _csr(graph)
    keep = np.zeros(graph.m, dtype=bool)
    stamp = np.zeros(graph.m, np.int64)
    order = np.lexsort((np.arange(graph.m), lengths))
    for k, e in enumerate(order, 1):
        a, b = int(graph.u[e]), int(graph.v[e])
        path, _ = _shortest_path(indptr, nbr, eid, lengths, keep, a, b, t * lengths[e], stamp, k)
        if len(path) == 0:
            keep[e] = True
    return keep


def _route(graph: Graph, drawing: Drawing, params: EpbParams, search_mask: np.ndarray, trace: EpbTrace | None):
    if not drawing.is_straight():
        raise ValueError("edge-path bundling expects a straight-line drawing")
    if len(drawing.edges) != graph.m or not np.array_equal(drawing.edges, graph.edges):
        raise ValueError("drawing does not match the graph's edge list")
    pos = drawing.positions
    lengths = _edge_lengths(graph, pos)
    indptr, nbr, eid = _csr(graph)
    usable = search_mask.copy()
    locked = np.zeros(graph.m, dtype=bool)
    stamp = np.zeros(graph.m, np.int64)
    # longest first, equal lengths in canonical edge order
    order = np.lexsort((np.arange(graph.m), -lengths))
    lines = list(drawing.polylines)
    if trace is not None:
        trace.search_graph_edges = int(search_mask.sum())
    for k, e in enumerate(order, 1):
        e = int(e)
        if trace is not None:
            trace.order.append(e)
        if locked[e]:
            continue
        was = usable[e]
        usable[e] = False
        a, b = int(graph.u[e]), int(graph.v[e])
        limit = params.distortion_limit * lengths[e]
        path, touched = _shortest_path(indptr, nbr, eid, lengths, usable, a, b, limit, stamp, k)
        if trace is not None:
            trace.searches += 1
            trace.edges_touched.append(int(touched))
        if len(path) == 0:
            usable[e] = was
            continue
        # rerouted edges are no longer drawn straight, so later paths avoid them
        path_edges = [graph.edge_index(int(x), int(y)) for x, y in zip(path[:-1], path[1:])]
        locked[path_edges] = True
        lines[e] = chaikin(pos[path], params.smoothing)
        lines[e][0] = pos[a]
        lines[e][-1] = pos[b]
        if trace is not None:
            trace.rerouted[e] = [int(x) for x in path]
            trace.locked.update(path_edges)
    return drawing.with_polylines(lines)


def epb_bundle(graph: Graph, drawing: Drawing, params: EpbParams | None = None, *, trace: EpbTrace | None = None) -> Drawing:
    """Reroute edges along short detours through existing vertices.

    Edges are visited longest first. For an edge that no earlier detour
    uses, the geometric shortest path between its endpoints (excluding the
    edge itself and edges already rerouted) becomes its new route when that
    path is at most ``distortion_limit`` times the edge length. Edges on the
    path are then locked and stay straight.
    """
    params = params or EpbParams()
    return _route(graph, drawing, params, np.ones(graph.m, dtype=bool), trace)


def sepb_bundle(graph: Graph, drawing: Drawing, params: EpbParams | None = None, *, trace: EpbTrace | None = None) -> Drawing:
    """EPB with path searches restricted to a greedy ``spanner_stretch``-spanner."""
    params = params or EpbParams()
    mask = greedy_spanner(graph, _edge_lengths(graph, drawing.positions), params.spanner_stretch)
    return _route(graph, drawing, params, mask, trace)

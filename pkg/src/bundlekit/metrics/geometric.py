"""Bundles detected in a drawing and the geometric graph they imply."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from numba import njit

from ..graph import Drawing, Graph


@dataclass(frozen=True, eq=False)
class BundleAssignment:
    """Partition of edges into bundles with an orientation per member.

    ``bundle[e]`` is the bundle id of edge ``e``; ``u_at_a[e]`` tells whether
    the edge's first endpoint sits at end A of its bundle.
    """

    bundle: np.ndarray
    u_at_a: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bundle, dtype=np.int64)
        o = np.asarray(self.u_at_a, dtype=bool)
        if b.shape != o.shape or b.ndim != 1:
            raise ValueError("bundle ids and orientations must be equal-length vectors")
        object.__setattr__(self, "bundle", b)
        object.__setattr__(self, "u_at_a", o)

    @classmethod
    def singletons(cls, m: int) -> "BundleAssignment":
        return cls(np.arange(m), np.ones(m, dtype=bool))

    @classmethod
    def from_groups(cls, m: int, groups, flipped=()) -> "BundleAssignment":
        """Bundles from lists of edge ids; edges in ``flipped`` have their
        second endpoint at end A. Unlisted edges become singletons."""
        bundle = -np.ones(m, dtype=np.int64)
        for gid, members in enumerate(groups):
            for e in members:
                if bundle[e] >= 0:
                    raise ValueError(f"edge {e} listed in two bundles")
                bundle[e] = gid
        rest = np.flatnonzero(bundle < 0)
        bundle[rest] = len(groups) + np.arange(len(rest))
        at_a = np.ones(m, dtype=bool)
        at_a[list(flipped)] = False
        return cls(bundle, at_a)

    def __len__(self):
        return len(self.bundle)

    def groups(self) -> list[np.ndarray]:
        order = np.argsort(self.bundle, kind="stable")
        b = self.bundle[order]
        cuts = np.flatnonzero(np.diff(b)) + 1
        return np.split(order, cuts)

    def is_trivial(self) -> bool:
        return len(np.unique(self.bundle)) == len(self.bundle)

    def ends(self, edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Per-edge vertex at end A and at end B."""
        edges = np.asarray(edges)
        a = np.where(self.u_at_a, edges[:, 0], edges[:, 1])
        b = np.where(self.u_at_a, edges[:, 1], edges[:, 0])
        return a, b


# --- bundle detection --------------------------------------------------------


def _arc_samples(pl: np.ndarray, h: float) -> np.ndarray:
    """Points at the midpoints of equal arc-length pieces of spacing <= h."""
    seg = np.hypot(*np.diff(pl, axis=0).T)
    total = seg.sum()
    k = max(2, int(math.ceil(total / h))) if total > 0 else 1
    cum = np.r_[0.0, np.cumsum(seg)]
    s = (np.arange(k) + 0.5) * (total / k)
    x = np.interp(s, cum, pl[:, 0])
    y = np.interp(s, cum, pl[:, 1])
    return np.column_stack([x, y])


@njit(cache=True)
def _fraction_within(samples, poly, eps):
    hit = 0
    for i in range(samples.shape[0]):
        px, py = samples[i, 0], samples[i, 1]
        best = np.inf
        for k in range(poly.shape[0] - 1):
            ax, ay = poly[k, 0], poly[k, 1]
            dx, dy = poly[k + 1, 0] - ax, poly[k + 1, 1] - ay
            l2 = dx * dx + dy * dy
            t = 0.0
            if l2 > 0.0:
                t = ((px - ax) * dx + (py - ay) * dy) / l2
                t = min(1.0, max(0.0, t))
            d = math.hypot(px - ax - t * dx, py - ay - t * dy)
            if d < best:
                best = d
        if best <= eps:
            hit += 1
    return hit / samples.shape[0]


@njit(cache=True)
def _candidate_pairs(pts, owner, starts, rank, cell, tau, samples_flat, poly_pts, poly_starts, eps):
    """Pairs (a, b), a ranked below b, passing the exact overlap test.

    Samples are hashed into square cells of side ``cell``; any partner point
    within ``cell`` of a sample lies in the 3x3 block around it. Counting the
    samples of ``a`` that see ``b`` in that block bounds the covered fraction
    from above, so only pairs reaching ``tau`` get the exact test.
    """
    ns = pts.shape[0]
    m = starts.shape[0] - 1
    cx = np.empty(ns, np.int64)
    cy = np.empty(ns, np.int64)
    for i in range(ns):
        cx[i] = int(math.floor(pts[i, 0] / cell))
        cy[i] = int(math.floor(pts[i, 1] / cell))
    ox, oy = cx.min() - 1, cy.min() - 1
    span = cy.max() - oy + 2
    key = (cx - ox) * span + (cy - oy)
    # unique (cell, owner) entries, grouped by cell
    order = np.argsort(key * m + owner, kind="mergesort")
    ukeys = np.empty(ns, np.int64)
    uown = np.empty(ns, np.int64)
    nu = 0
    for t in range(ns):
        i = order[t]
        if nu > 0 and ukeys[nu - 1] == key[i] and uown[nu - 1] == owner[i]:
            continue
        ukeys[nu] = key[i]
        uown[nu] = owner[i]
        nu += 1
    ukeys = ukeys[:nu]
    uown = uown[:nu]

    count = np.zeros(m, np.int64)
    seen = -np.ones(m, np.int64)
    touched = np.empty(m, np.int64)
    out_a = []
    out_b = []
    for a in range(m):
        nt = 0
        for s in range(starts[a], starts[a + 1]):
            kx, ky = cx[s] - ox, cy[s] - oy
            for ddx in range(-1, 2):
                for ddy in range(-1, 2):
                    k = (kx + ddx) * span + (ky + ddy)
                    lo = np.searchsorted(ukeys, k)
                    while lo < nu and ukeys[lo] == k:
                        b = uown[lo]
                        lo += 1
                        if rank[b] <= rank[a] or seen[b] == s:
                            continue
                        seen[b] = s
                        if count[b] == 0:
                            touched[nt] = b
                            nt += 1
                        count[b] += 1
        n_a = starts[a + 1] - starts[a]
        for t in range(nt):
            b = touched[t]
            if count[b] >= tau * n_a:
                poly = poly_pts[poly_starts[b]:poly_starts[b + 1]]
                if _fraction_within(samples_flat[starts[a]:starts[a + 1]], poly, eps) >= tau:
                    out_a.append(min(a, b))
                    out_b.append(max(a, b))
            count[b] = 0
    res = np.empty((len(out_a), 2), np.int64)
    for i in range(len(out_a)):
        res[i, 0] = out_a[i]
        res[i, 1] = out_b[i]
    return res


def overlapping_pairs(drawing: Drawing, eps: float, tau: float) -> list[tuple[int, int]]:
    """Edge pairs whose polylines stay within ``eps`` of each other along at
    least ``tau`` of the shorter polyline's arc length.

    Arc length is measured by samples spaced at most ``eps / 2`` apart.
    """
    m = len(drawing.polylines)
    if m < 2:
        return []
    h = eps / 2.0
    samples = [_arc_samples(pl, h) for pl in drawing.polylines]
    starts = np.zeros(m + 1, dtype=np.int64)
    starts[1:] = np.cumsum([len(s) for s in samples])
    owner = np.repeat(np.arange(m), np.diff(starts))
    pts = np.concatenate(samples)
    arclen = np.array([np.hypot(*np.diff(pl, axis=0).T).sum() for pl in drawing.polylines])
    # rank edges by (arc length, id); the lower rank is the "shorter" polyline
    rank = np.empty(m, dtype=np.int64)
    rank[np.lexsort((np.arange(m), arclen))] = np.arange(m)
    poly_starts = np.zeros(m + 1, dtype=np.int64)
    poly_starts[1:] = np.cumsum([len(pl) for pl in drawing.polylines])
    poly_pts = np.ascontiguousarray(np.concatenate(drawing.polylines), dtype=np.float64)
    # a partner sample within eps + h/2 exists whenever the partner curve is within eps
    cell = eps + h
    res = _candidate_pairs(pts, owner, starts, rank, cell, float(tau), pts, poly_pts, poly_starts, float(eps))
    return sorted(map(tuple, res.tolist()))


def _same_direction(pa, pb, qa, qb) -> bool:
    same = np.hypot(*(pa - qa)) + np.hypot(*(pb - qb))
    cross = np.hypot(*(pa - qb)) + np.hypot(*(pb - qa))
    return bool(same <= cross)


def detect_bundles(drawing: Drawing, eps: float | None = None, tau: float = 0.7) -> BundleAssignment:
    """Group edges whose drawn curves run together.

    Overlapping pairs (see :func:`overlapping_pairs`) are closed transitively.
    Each bundle is oriented from its lowest-numbered edge outwards: a member
    takes the orientation that pairs its endpoints with the nearer endpoints of
    the already-oriented member it overlaps. ``eps`` defaults to 0.5% of the
    drawing diagonal.
    """
    if eps is None:
        eps = 0.005 * drawing.diagonal()
    if not eps > 0:
        raise ValueError("eps must be positive")
    if not 0.0 < tau <= 1.0:
        raise ValueError("tau must lie in (0, 1]")
    m = len(drawing.edges)
    pairs = overlapping_pairs(drawing, eps, tau)
    adj = [[] for _ in range(m)]
    for a, b in pairs:
        adj[a].append(b)
        adj[b].append(a)
    pos = drawing.positions
    edges = drawing.edges
    bundle = -np.ones(m, dtype=np.int64)
    u_at_a = np.ones(m, dtype=bool)
    gid = 0
    for root in range(m):
        if bundle[root] >= 0:
            continue
        bundle[root] = gid
        queue = deque([root])
        while queue:
            e = queue.popleft()
            ea, eb = (edges[e, 0], edges[e, 1]) if u_at_a[e] else (edges[e, 1], edges[e, 0])
            for f in sorted(adj[e]):
                if bundle[f] >= 0:
                    continue
                bundle[f] = gid
                u_at_a[f] = _same_direction(pos[edges[f, 0]], pos[edges[f, 1]], pos[ea], pos[eb])
                queue.append(f)
        gid += 1
    return BundleAssignment(bundle, u_at_a)


# --- geometric graph ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GeometricGraph:
    """Original edges plus the adjacencies implied by bundles.

    ``edges`` is sorted canonically; ``original[i]`` is True when edge ``i``
    belongs to the source graph.
    """

    n: int
    edges: np.ndarray
    original: np.ndarray
    bundles: BundleAssignment
    source_edges: np.ndarray

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> sp.csr_matrix:
        e = self.edges
        data = np.ones(2 * len(e), dtype=np.int8)
        a = sp.coo_matrix((data, (np.r_[e[:, 0], e[:, 1]], np.r_[e[:, 1], e[:, 0]])), shape=(self.n, self.n))
        return a.tocsr()

    def neighbor_sets(self) -> list[set]:
        out = [set() for _ in range(self.n)]
        for a, b in self.edges:
            out[a].add(int(b))
            out[b].add(int(a))
        return out

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n) if len(self.edges) else np.zeros(self.n, np.int64)

    def implied_edges(self) -> np.ndarray:
        return self.edges[~self.original]

    def first_hops(self, v: int, e: int) -> set:
        """Vertices reachable from ``v`` in one step along edge ``e``'s bundle."""
        a_end, b_end = self.bundles.ends(self.source_edges)
        members = np.flatnonzero(self.bundles.bundle == self.bundles.bundle[e])
        if a_end[e] == v:
            far = b_end[members]
        elif b_end[e] == v:
            far = a_end[members]
        else:
            raise ValueError(f"vertex {v} is not an endpoint of edge {e}")
        return {int(x) for x in far if x != v}


def geometric_graph(graph: Graph, bundles: BundleAssignment) -> GeometricGraph:
    """``G`` plus an edge from every end-A vertex to every end-B vertex of the
    other members of the same bundle (self-pairs and repeats dropped)."""
    if len(bundles) != graph.m:
        raise ValueError("bundle assignment does not cover the graph's edges")
    a_end, b_end = bundles.ends(graph.edges)
    n = graph.n
    orig_keys = graph.u * n + graph.v
    parts = [orig_keys]
    for members in bundles.groups():
        if len(members) < 2:
            continue
        x = np.repeat(a_end[members], len(members))
        y = np.tile(b_end[members], len(members))
        i = np.repeat(members, len(members))
        j = np.tile(members, len(members))
        keep = (i != j) & (x != y)
        lo, hi = np.minimum(x[keep], y[keep]), np.maximum(x[keep], y[keep])
        parts.append(lo * n + hi)
    keys = np.unique(np.concatenate(parts))
    edges = np.column_stack([keys // n, keys % n]).astype(np.int64)
    flags = np.isin(keys, orig_keys)
    return GeometricGraph(graph.n, edges, flags, bundles, graph.edges)

"""Effective resistances and ER-weighted spectral sparsification."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import cg, factorized

from .graph import Graph

EXACT_DEFAULT_MAX_N = 2000


class SolverError(RuntimeError):
    """An iterative Laplacian solve failed to converge."""


class ExactTooLargeError(MemoryError):
    """Dense pseudoinverse requested for a component above the size cap."""


@dataclass(frozen=True, eq=False)
class EffectiveResistanceMap:
    raw: np.ndarray
    normalized: np.ndarray
    method: str
    tolerance: float

    @classmethod
    def from_raw(cls, raw, method="exact", tolerance=0.0) -> "EffectiveResistanceMap":
        raw = np.asarray(raw, dtype=np.float64)
        if len(raw) and not (np.all(np.isfinite(raw)) and np.all(raw > 0)):
            raise ValueError("effective resistances must be positive and finite")
        return cls(raw, normalize(raw), method, float(tolerance))

    def __len__(self):
        return len(self.raw)

    def to_csv(self, path, graph: Graph) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["u", "v", "raw", "normalized"])
            for a, b, r, z in zip(graph.u, graph.v, self.raw, self.normalized):
                wr.writerow([int(a), int(b), repr(float(r)), repr(float(z))])


def normalize(raw: np.ndarray) -> np.ndarray:
    """Global min-max scaling to [0, 1]; a constant input maps to all ones."""
    raw = np.asarray(raw, dtype=np.float64)
    if len(raw) == 0:
        return raw.copy()
    lo, hi = raw.min(), raw.max()
    if hi == lo:
        return np.ones_like(raw)
    return np.clip((raw - lo) / (hi - lo), 0.0, 1.0)


@dataclass(frozen=True)
class SparsifyParams:
    factor: float = 4.0
    seed: int = 0
    ensure_connected: bool = True

    def __post_init__(self):
        if not self.factor > 0:
            raise ValueError("sparsification factor must be positive")

    def budget(self, n: int) -> int:
        if n < 2:
            return 0
        return math.ceil(self.factor * n * math.log(n))


def effective_resistances(
    graph: Graph,
    method: str = "auto",
    tol: float = 0.1,
    *,
    seed: int = 0,
    max_exact_n: int = 5000,
    n_projections: int | None = None,
    solver: str = "direct",
) -> EffectiveResistanceMap:
    """Effective resistance of every edge, computed per connected component.

    ``exact`` inverts the grounded Laplacian densely. ``approximate`` uses the
    Johnson-Lindenstrauss sketch of the weighted incidence matrix, one Laplacian
    solve per projection row; the projection count is chosen so that each edge
    is within relative error ``tol`` with probability at least 0.95 jointly.
    """
    if graph.m == 0:
        raise ValueError("graph has no edges")
    if method == "auto":
        method = "exact" if graph.n <= EXACT_DEFAULT_MAX_N else "approximate"
    if method == "exact":
        raw = _exact(graph, max_exact_n)
        return EffectiveResistanceMap.from_raw(raw, "exact", 0.0)
    if method == "approximate":
        if not tol > 0:
            raise ValueError("tol must be positive for the approximate method")
        raw = _approximate(graph, tol, seed, n_projections, solver)
        return EffectiveResistanceMap.from_raw(raw, "approximate", tol)
    raise ValueError(f"unknown method {method!r}")


def _component_blocks(graph: Graph):
    ncomp, labels = graph.components()
    edge_comp = labels[graph.u]
    for c in range(ncomp):
        verts = np.flatnonzero(labels == c)
        eids = np.flatnonzero(edge_comp == c)
        if len(eids):
            yield verts, eids


def _exact(graph: Graph, max_n: int) -> np.ndarray:
    lap = graph.laplacian()
    raw = np.empty(graph.m)
    for verts, eids in _component_blocks(graph):
        k = len(verts)
        if k > max_n:
            raise ExactTooLargeError(
                f"component with {k} vertices exceeds exact cap {max_n}; use method='approximate'"
            )
        local = np.full(graph.n, -1)
        local[verts] = np.arange(k)
        lc = lap[verts][:, verts].toarray()
        # L^+ = (L + J/k)^-1 - J/k on a connected component
        z = np.linalg.inv(lc + 1.0 / k) - 1.0 / k
        a, b = local[graph.u[eids]], local[graph.v[eids]]
        raw[eids] = z[a, a] + z[b, b] - 2.0 * z[a, b]
    return raw


def projection_count(m: int, tol: float, delta: float = 0.05) -> int:
    # chi-square concentration: P(|X/k - 1| > eps) <= 2 exp(-k (eps^2/2 - eps^3/3) / 2)
    eps = min(tol, 0.5)
    rate = eps * eps / 2 - eps ** 3 / 3
    return max(8, math.ceil(2.0 * math.log(2.0 * max(m, 1) / delta) / rate))


def _approximate(graph, tol, seed, n_projections, solver) -> np.ndarray:
    m = graph.m
    k = n_projections or projection_count(m, tol)
    rng = np.random.default_rng(seed)
    raw = np.empty(m)
    lap = graph.laplacian()
    sqrt_w = np.sqrt(graph.w)
    for verts, eids in _component_blocks(graph):
        nc = len(verts)
        local = np.full(graph.n, -1)
        local[verts] = np.arange(nc)
        a, b = local[graph.u[eids]], local[graph.v[eids]]
        q = rng.choice([-1.0, 1.0], size=(k, len(eids))) / math.sqrt(k)
        # rows of Q W^{1/2} B, each summing to zero on the component
        y = np.zeros((k, nc))
        scaled = q * sqrt_w[eids]
        np.add.at(y.T, a, scaled.T)
        np.add.at(y.T, b, -scaled.T)
        lc = lap[verts][:, verts].tocsc()
        z = _solve_many(lc, y, solver)
        diff = z[:, a] - z[:, b]
        raw[eids] = np.einsum("ij,ij->j", diff, diff)
    return raw


def _solve_many(lc: sp.csc_matrix, rhs: np.ndarray, solver: str) -> np.ndarray:
    """Solve ``L z = y`` for each row ``y`` (all rows orthogonal to ones)."""
    nc = lc.shape[0]
    out = np.zeros_like(rhs)
    if nc == 1:
        return out
    if solver == "direct":
        # ground the last vertex; the resulting potentials differ from L^+ y
        # only by a constant shift, which cancels in z[a] - z[b]
        solve = factorized(lc[:-1, :-1].tocsc())
        for i, row in enumerate(rhs):
            out[i, :-1] = solve(row[:-1])
        return out
    if solver == "cg":
        maxiter = 20 * nc
        for i, row in enumerate(rhs):
            x, info = cg(lc, row, rtol=1e-12, atol=0.0, maxiter=maxiter)
            if info != 0:
                raise SolverError(f"CG did not converge after {info} iterations (row {i})")
            out[i] = x
        return out
    raise ValueError(f"unknown solver {solver!r}")


def foster_residuals(graph: Graph, er: EffectiveResistanceMap) -> list[tuple[int, float]]:
    """Per component: ``(vertex count, sum_e w_e ER(e) - (count - 1))``."""
    res = []
    for verts, eids in _component_blocks(graph):
        total = float(np.dot(graph.w[eids], er.raw[eids]))
        res.append((len(verts), total - (len(verts) - 1)))
    return res


def spanning_forest(graph: Graph, score: np.ndarray) -> np.ndarray:
    """Edge ids of a maximum-``score`` spanning forest (Kruskal, ties by edge id)."""
    order = np.lexsort((np.arange(graph.m), -np.asarray(score)))
    parent = list(range(graph.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for e in order:
        ra, rb = find(int(graph.u[e])), find(int(graph.v[e]))
        if ra != rb:
            parent[ra] = rb
            chosen.append(int(e))
    return np.array(sorted(chosen), dtype=np.int64)


def sparsify_edge_ids(graph: Graph, er: EffectiveResistanceMap, params: SparsifyParams) -> np.ndarray:
    """Edge ids kept by :func:`spectral_sparsify`, sorted ascending."""
    if len(er) != graph.m:
        raise ValueError("effective resistance map does not cover the graph's edges")
    budget = params.budget(graph.n)
    if graph.m <= budget:
        return np.arange(graph.m)
    importance = graph.w * er.raw
    forced = spanning_forest(graph, importance) if params.ensure_connected else np.empty(0, np.int64)
    rest = np.setdiff1d(np.arange(graph.m), forced)
    k = budget - len(forced)
    rng = np.random.default_rng(params.seed)
    if k > 0 and len(rest):
        p = importance[rest] / importance[rest].sum()
        picked = rng.choice(rest, size=min(k, len(rest)), replace=False, p=p)
    else:
        picked = np.empty(0, np.int64)
    return np.sort(np.concatenate([forced, picked]).astype(np.int64))


def spectral_sparsify(graph: Graph, er: EffectiveResistanceMap, params: SparsifyParams) -> Graph:
    """Subgraph with at most ``ceil(c n ln n)`` edges sampled by ``w_e ER(e)``.

    Sampling is without replacement and the kept edges retain their original
    weights. With ``ensure_connected`` a maximum-importance spanning forest is
    included first, so components of the input stay connected.
    """
    ids = sparsify_edge_ids(graph, er, params)
    if len(ids) == graph.m:
        return graph
    return graph.subgraph(ids)

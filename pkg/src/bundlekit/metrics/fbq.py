"""Faithfulness of a sparsified bundling to the bundling of the full graph.

Both scores compare geometric graphs on the same vertex set: a per-vertex
Jaccard similarity of neighbourhoods, and Kolmogorov-Smirnov distances
between distributions of vertex properties.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .geometric import GeometricGraph

PROPERTIES = ("avg_neighbor_degree", "local_clustering")


def _adjacency(g) -> sp.csr_matrix:
    if isinstance(g, GeometricGraph):
        a = g.adjacency()
    else:
        a = g.adjacency_matrix()
    a = sp.csr_matrix(a, dtype=np.float64)
    a.eliminate_zeros()
    a.data[:] = 1.0
    return a


def fbq_js(full, sparse) -> float:
    """Mean over vertices of |N(v) & N'(v)| / |N(v) | N'(v)|; two empty
    neighbourhoods count as identical."""
    a, b = _adjacency(full), _adjacency(sparse)
    if a.shape != b.shape:
        raise ValueError("graphs must share the vertex set")
    if a.shape[0] == 0:
        raise ValueError("empty vertex set")
    inter = np.asarray(a.multiply(b).sum(axis=1)).ravel()
    union = np.asarray(a.sum(axis=1)).ravel() + np.asarray(b.sum(axis=1)).ravel() - inter
    jac = np.ones_like(inter)
    nz = union > 0
    jac[nz] = inter[nz] / union[nz]
    return float(jac.mean())


@dataclass(frozen=True)
class DistributionSummary:
    """Sorted per-vertex values of one property."""

    prop: str
    values: np.ndarray

    def cdf(self, x) -> np.ndarray:
        return np.searchsorted(self.values, x, side="right") / len(self.values)


def property_distribution(g, prop: str) -> DistributionSummary:
    """Per-vertex average neighbour degree or local clustering coefficient.

    Isolated vertices get average neighbour degree 0; vertices of degree < 2
    get clustering 0.
    """
    a = _adjacency(g)
    deg = np.asarray(a.sum(axis=1)).ravel()
    if prop == "avg_neighbor_degree":
        s = a @ deg
        vals = np.divide(s, deg, out=np.zeros_like(s), where=deg > 0)
    elif prop == "local_clustering":
        tri = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2.0
        pairs = deg * (deg - 1) / 2.0
        vals = np.divide(tri, pairs, out=np.zeros_like(tri), where=pairs > 0)
    else:
        raise ValueError(f"unknown property {prop!r}; expected one of {PROPERTIES}")
    return DistributionSummary(prop, np.sort(vals))


def ks_distance(p: DistributionSummary, q: DistributionSummary) -> float:
    """Largest gap between the two empirical CDFs."""
    if p.prop != q.prop:
        raise ValueError(f"cannot compare {p.prop!r} with {q.prop!r}")
    if len(p.values) == 0 or len(q.values) == 0:
        raise ValueError("empty distribution")
    x = np.concatenate([p.values, q.values])
    return float(np.abs(p.cdf(x) - q.cdf(x)).max())


def fbq_sq(full, sparse, props=PROPERTIES) -> dict[str, float]:
    """KS distance per property between the two graphs."""
    return {pr: ks_distance(property_distribution(full, pr), property_distribution(sparse, pr)) for pr in props}

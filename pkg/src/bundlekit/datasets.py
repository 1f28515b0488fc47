"""Bundled data and synthetic graph generators."""

from __future__ import annotations

from importlib import resources
from typing import NamedTuple

import numpy as np
from scipy.sparse.csgraph import minimum_spanning_tree
from scipy.spatial.distance import pdist, squareform

from .graph import DatasetDescriptor, Drawing, Graph, load_graph, load_layout


class Dataset(NamedTuple):
    graph: Graph
    drawing: Drawing
    descriptor: DatasetDescriptor


AIRLINES = DatasetDescriptor("airlines", "geographic", 235, 1297)


def _data_path(name: str):
    return resources.files("bundlekit") / "data" / name


def airlines() -> Dataset:
    """US airline routes among the 235 busiest continental airports, drawn at
    their (longitude, latitude) positions."""
    with resources.as_file(_data_path("airlines.edges")) as p:
        g = load_graph(p)
    with resources.as_file(_data_path("airlines.xy")) as p:
        d = load_layout(p, g)
    return Dataset(g, d, AIRLINES)


def airport_codes() -> list[str]:
    return _data_path("airlines.names").read_text().split()


def geometric_blob(n: int, m: int, seed: int = 0, clusters: int = 5) -> Dataset:
    """Points from a mixture of Gaussian clusters joined by their Euclidean
    spanning tree plus the shortest remaining pairs, ``m`` edges in total."""
    if n < 2:
        raise ValueError("need at least two vertices")
    if not n - 1 <= m <= n * (n - 1) // 2:
        raise ValueError(f"edge count must lie in [{n - 1}, {n * (n - 1) // 2}]")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(0.0, 1000.0, size=(clusters, 2))
    label = rng.integers(0, clusters, size=n)
    pos = centers[label] + rng.normal(scale=120.0, size=(n, 2))
    dist = squareform(pdist(pos))
    tree = minimum_spanning_tree(dist).tocoo()
    chosen = {(min(a, b), max(a, b)) for a, b in zip(tree.row.tolist(), tree.col.tolist())}
    iu, ju = np.triu_indices(n, 1)
    order = np.lexsort((ju, iu, dist[iu, ju]))
    for k in order:
        if len(chosen) >= m:
            break
        chosen.add((int(iu[k]), int(ju[k])))
    g = Graph.from_edges(n, sorted(chosen))
    desc = DatasetDescriptor(f"blob-n{n}-m{m}-s{seed}", "synthetic", n, g.m)
    return Dataset(g, Drawing.straight(g, pos), desc)


def random_geometric(n: int, radius: float, seed: int = 0) -> Dataset:
    """Uniform points in the unit square; pairs closer than ``radius`` are
    joined, and the Euclidean spanning tree is added so the graph is connected."""
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2))
    dist = squareform(pdist(pos))
    tree = minimum_spanning_tree(dist).tocoo()
    edges = {(min(a, b), max(a, b)) for a, b in zip(tree.row.tolist(), tree.col.tolist())}
    iu, ju = np.triu_indices(n, 1)
    close = dist[iu, ju] < radius
    edges.update(zip(iu[close].tolist(), ju[close].tolist()))
    g = Graph.from_edges(n, sorted(edges))
    return Dataset(g, Drawing.straight(g, pos), DatasetDescriptor(f"rgg-n{n}-s{seed}", "synthetic", n, g.m))


def square_with_diagonal() -> Dataset:
    """Unit square 0-1-2-3 with the diagonal (0, 2)."""
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
    pos = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    return Dataset(g, Drawing.straight(g, pos), DatasetDescriptor("square-diagonal", "synthetic", 4, 5))


BUILTIN = {"airlines": airlines, "square-diagonal": square_with_diagonal}


def load_dataset(name: str) -> Dataset:
    """A bundled dataset by name, or ``blob:N:M[:SEED]`` for a synthetic blob."""
    if name.startswith("blob:"):
        parts = name.split(":")[1:]
        if len(parts) not in (2, 3):
            raise ValueError("blob datasets are named blob:N:M[:SEED]")
        n, m, *seed = (int(p) for p in parts)
        return geometric_blob(n, m, seed[0] if seed else 0)
    try:
        return BUILTIN[name]()
    except KeyError:
        raise ValueError(f"unknown dataset {name!r}; known: {', '.join(BUILTIN)} or blob:N:M[:SEED]") from None

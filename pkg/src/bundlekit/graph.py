"""Graph and drawing data model plus the plain-text / JSON file formats."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.io
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components


class GraphFormatError(ValueError):
    """Raised when a graph, layout or drawing file cannot be parsed."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Weighted undirected simple graph on vertices ``0..n-1``.

    Edges are stored canonically (``u < v``) and sorted lexicographically.
    Build instances with :meth:`from_edges`, which performs the cleaning.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    _adj: tuple = field(default=None, repr=False)

    def __post_init__(self):
        u = np.asarray(self.u, dtype=np.int64)
        v = np.asarray(self.v, dtype=np.int64)
        w = np.asarray(self.w, dtype=np.float64)
        if not (u.shape == v.shape == w.shape and u.ndim == 1):
            raise ValueError("edge arrays must be 1-d and of equal length")
        if len(u):
            if np.any(u >= v):
                raise ValueError("edges must be canonical (u < v), without self-loops")
            if u.min() < 0 or v.max() >= self.n:
                raise ValueError("vertex id out of range")
            order = np.lexsort((v, u))
            if np.any(order != np.arange(len(u))):
                raise ValueError("edges must be sorted")
            key = u * self.n + v
            if np.any(np.diff(key) == 0):
                raise ValueError("duplicate edge")
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise ValueError("weights must be finite and strictly positive")
        object.__setattr__(self, "u", _frozen(u))
        object.__setattr__(self, "v", _frozen(v))
        object.__setattr__(self, "w", _frozen(w))
        object.__setattr__(self, "_adj", _build_adjacency(self.n, u, v))

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Sequence],
        *,
        warn: bool = True,
    ) -> "Graph":
        """Canonicalize ``(u, v[, w])`` triples into a simple graph.

        Self-loops and repeated pairs are dropped (first occurrence wins) and
        counted in a single warning.
        """
        seen = {}
        loops = dups = 0
        for e in edges:
            a, b = int(e[0]), int(e[1])
            wt = float(e[2]) if len(e) > 2 else 1.0
            if a == b:
                loops += 1
                continue
            key = (a, b) if a < b else (b, a)
            if key in seen:
                dups += 1
                continue
            seen[key] = wt
        if warn and (loops or dups):
            warnings.warn(
                f"dropped {loops} self-loop(s) and {dups} duplicate edge(s)",
                stacklevel=2,
            )
        keys = sorted(seen)
        u = np.array([k[0] for k in keys], dtype=np.int64)
        v = np.array([k[1] for k in keys], dtype=np.int64)
        w = np.array([seen[k] for k in keys], dtype=np.float64)
        return cls(n, u, v, w)

    @property
    def m(self) -> int:
        return len(self.u)

    @property
    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of canonical endpoint pairs."""
        return np.column_stack([self.u, self.v])

    def neighbors(self, x: int) -> np.ndarray:
        indptr, nbr, _ = self._adj
        return nbr[indptr[x]:indptr[x + 1]]

    def incident_edges(self, x: int) -> np.ndarray:
        indptr, _, eid = self._adj
        return eid[indptr[x]:indptr[x + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self._adj[0])

    @property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(indptr, neighbor, edge_id)`` adjacency, neighbors ascending."""
        return self._adj

    def edge_index(self, a: int, b: int) -> int:
        """Index of edge ``{a, b}``; ``KeyError`` if absent."""
        if a > b:
            a, b = b, a
        lo = np.searchsorted(self.u, a, side="left")
        hi = np.searchsorted(self.u, a, side="right")
        j = lo + np.searchsorted(self.v[lo:hi], b)
        if j < hi and self.v[j] == b:
            return int(j)
        raise KeyError((a, b))

    def adjacency_matrix(self) -> sp.csr_matrix:
        a = sp.coo_matrix(
            (np.r_[self.w, self.w], (np.r_[self.u, self.v], np.r_[self.v, self.u])),
            shape=(self.n, self.n),
        )
        return a.tocsr()

    def laplacian(self) -> sp.csr_matrix:
        a = self.adjacency_matrix()
        d = np.asarray(a.sum(axis=1)).ravel()
        return (sp.diags(d) - a).tocsr()

    def components(self) -> tuple[int, np.ndarray]:
        """Number of connected components and a per-vertex label array."""
        return connected_components(self.adjacency_matrix(), directed=False)

    def is_connected(self) -> bool:
        return self.n > 0 and self.components()[0] == 1

    def subgraph(self, edge_ids) -> "Graph":
        """Graph on the same vertex set keeping only ``edge_ids``."""
        idx = np.unique(np.asarray(edge_ids, dtype=np.int64))
        return Graph(self.n, self.u[idx], self.v[idx], self.w[idx])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
            and np.array_equal(self.w, other.w)
        )

    __hash__ = None

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _build_adjacency(n, u, v):
    m = len(u)
    src = np.r_[u, v]
    dst = np.r_[v, u]
    eid = np.r_[np.arange(m), np.arange(m)]
    order = np.lexsort((dst, src))
    src, dst, eid = src[order], dst[order], eid[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return _frozen(indptr), _frozen(dst.astype(np.int64)), _frozen(eid.astype(np.int64))


@dataclass(frozen=True, eq=False)
class Drawing:
    """Vertex positions plus one polyline per edge.

    ``edges`` is the ``(m, 2)`` endpoint array the polylines belong to, in the
    same order as the graph's edges. Polyline ``i`` runs from
    ``positions[edges[i, 0]]`` to ``positions[edges[i, 1]]``.
    """

    positions: np.ndarray
    edges: np.ndarray
    polylines: tuple

    def __post_init__(self):
        pos = np.array(self.positions, dtype=np.float64).reshape(-1, 2)
        edges = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        if not np.all(np.isfinite(pos)):
            raise ValueError("non-finite vertex position")
        if len(self.polylines) != len(edges):
            raise ValueError("need exactly one polyline per edge")
        lines = []
        for i, pl in enumerate(self.polylines):
            pl = np.array(pl, dtype=np.float64)
            if pl.ndim != 2 or pl.shape[1] != 2 or len(pl) < 2:
                raise ValueError(f"polyline {i} must have at least 2 points")
            if not np.all(np.isfinite(pl)):
                raise ValueError(f"polyline {i} has non-finite coordinates")
            a, b = edges[i]
            if not (np.array_equal(pl[0], pos[a]) and np.array_equal(pl[-1], pos[b])):
                raise ValueError(f"polyline {i} endpoints do not match vertex positions")
            lines.append(_frozen(pl))
        object.__setattr__(self, "positions", _frozen(pos))
        object.__setattr__(self, "edges", _frozen(edges))
        object.__setattr__(self, "polylines", tuple(lines))

    @classmethod
    def straight(cls, graph: Graph, positions) -> "Drawing":
        pos = np.asarray(positions, dtype=np.float64)
        if pos.shape != (graph.n, 2):
            raise ValueError(f"expected positions of shape ({graph.n}, 2)")
        lines = tuple(np.stack([pos[a], pos[b]]) for a, b in zip(graph.u, graph.v))
        return cls(pos, graph.edges, lines)

    def with_polylines(self, polylines) -> "Drawing":
        return Drawing(self.positions, self.edges, tuple(polylines))

    def restrict(self, edge_ids) -> "Drawing":
        """Drawing of an edge subset, keeping all vertex positions."""
        idx = np.asarray(edge_ids, dtype=np.int64)
        return Drawing(self.positions, self.edges[idx], tuple(self.polylines[i] for i in idx))

    def to_graph(self) -> Graph:
        """Unit-weight graph with this drawing's vertex and edge sets."""
        return Graph.from_edges(len(self.positions), self.edges.tolist())

    @property
    def n_division_points(self) -> int:
        return sum(len(p) - 2 for p in self.polylines)

    def is_straight(self) -> bool:
        return all(len(p) == 2 for p in self.polylines)

    def bounds(self) -> tuple[float, float, float, float]:
        pts = [self.positions] + list(self.polylines)
        allp = np.concatenate(pts) if len(pts) > 1 else self.positions
        if len(allp) == 0:
            return (0.0, 0.0, 0.0, 0.0)
        lo = allp.min(axis=0)
        hi = allp.max(axis=0)
        return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))

    def diagonal(self) -> float:
        x0, y0, x1, y1 = self.bounds()
        return math.hypot(x1 - x0, y1 - y0)

    def __eq__(self, other):
        if not isinstance(other, Drawing):
            return NotImplemented
        return (
            np.array_equal(self.positions, other.positions)
            and np.array_equal(self.edges, other.edges)
            and len(self.polylines) == len(other.polylines)
            and all(np.array_equal(a, b) for a, b in zip(self.polylines, other.polylines))
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"Drawing(n={len(self.positions)}, m={len(self.edges)}, "
            f"division_points={self.n_division_points})"
        )


@dataclass(frozen=True)
class DatasetDescriptor:
    name: str
    category: str
    n_vertices: int
    n_edges: int

    CATEGORIES = ("geographic", "scale-free", "GION", "black-hole", "synthetic")

    def __post_init__(self):
        if self.category not in self.CATEGORIES:
            raise ValueError(f"unknown category {self.category!r}")
        if self.n_vertices < 0 or self.n_edges < 0:
            raise ValueError("counts must be nonnegative")


# --- file formats -----------------------------------------------------------


def load_graph(path, format: str = "edgelist") -> Graph:
    """Read an edge list (``u v [w]`` lines, ``#`` comments, optional ``%n N``
    header) or a Matrix Market file."""
    path = Path(path)
    if format == "matrix-market":
        return _load_matrix_market(path)
    if format != "edgelist":
        raise ValueError(f"unknown graph format {format!r}")
    declared = None
    triples = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("%"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "n":
                    try:
                        declared = int(parts[1])
                    except ValueError:
                        raise GraphFormatError(f"{path}:{lineno}: bad vertex count") from None
                    if declared < 0:
                        raise GraphFormatError(f"{path}:{lineno}: negative vertex count")
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise GraphFormatError(f"{path}:{lineno}: expected 'u v [w]', got {line!r}")
            try:
                a, b = int(parts[0]), int(parts[1])
                wt = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: cannot parse {line!r}") from None
            if a < 0 or b < 0:
                raise GraphFormatError(f"{path}:{lineno}: negative vertex id")
            if not (math.isfinite(wt) and wt > 0):
                raise GraphFormatError(f"{path}:{lineno}: weight must be positive and finite")
            triples.append((a, b, wt))
    top = max((max(a, b) for a, b, _ in triples), default=-1) + 1
    if declared is not None and top > declared:
        raise GraphFormatError(f"{path}: vertex id {top - 1} exceeds declared count {declared}")
    n = declared if declared is not None else top
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        g = Graph.from_edges(n, triples)
    for c in caught:
        warnings.warn(f"{path}: {c.message}", stacklevel=2)
    if g.m == 0:
        raise GraphFormatError(f"{path}: no edges after cleaning")
    return g


def _load_matrix_market(path: Path) -> Graph:
    try:
        mat = scipy.io.mmread(str(path))
    except Exception as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc
    coo = sp.coo_matrix(mat)
    if coo.shape[0] != coo.shape[1]:
        raise GraphFormatError(f"{path}: adjacency matrix must be square")
    data = np.abs(coo.data) if coo.data.dtype.kind in "fc" else np.ones(coo.nnz)
    triples = [(int(a), int(b), float(x) if x > 0 else 1.0) for a, b, x in zip(coo.row, coo.col, data)]
    # symmetric storage lists each pair once or twice; duplicates are expected here
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g = Graph.from_edges(coo.shape[0], triples)
    if g.m == 0:
        raise GraphFormatError(f"{path}: no edges after cleaning")
    return g


def save_graph(graph: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"%n {graph.n}\n")
        for a, b, wt in zip(graph.u, graph.v, graph.w):
            fh.write(f"{a} {b}\n" if wt == 1.0 else f"{a} {b} {wt!r}\n")


def load_layout(path, graph: Graph) -> Drawing:
    """Read ``v x y`` rows and return the straight-line drawing of ``graph``."""
    pos = np.full((graph.n, 2), np.nan)
    seen = np.zeros(graph.n, dtype=bool)
    dup = 0
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise GraphFormatError(f"{path}:{lineno}: expected 'v x y', got {line!r}")
            try:
                vid = int(parts[0])
                x, y = float(parts[1]), float(parts[2])
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: cannot parse {line!r}") from None
            if not (math.isfinite(x) and math.isfinite(y)):
                raise GraphFormatError(f"{path}:{lineno}: non-finite coordinate")
            if not 0 <= vid < graph.n:
                raise GraphFormatError(f"{path}:{lineno}: vertex {vid} not in graph")
            dup += seen[vid]
            seen[vid] = True
            pos[vid] = (x, y)
    if dup:
        warnings.warn(f"{path}: {dup} duplicate coordinate row(s), last row wins", stacklevel=2)
    missing = np.flatnonzero(~seen)
    if len(missing):
        raise GraphFormatError(f"{path}: missing coordinates for vertex {missing[0]}")
    return Drawing.straight(graph, pos)


def save_layout(drawing: Drawing, path) -> None:
    # repr() of a Python float is the shortest string that round-trips
    with open(path, "w") as fh:
        for i, (x, y) in enumerate(drawing.positions.tolist()):
            fh.write(f"{i} {x!r} {y!r}\n")


def drawing_to_dict(drawing: Drawing, meta: dict | None = None) -> dict:
    out = {
        "positions": drawing.positions.tolist(),
        "polylines": [
            {"edge": [int(a), int(b)], "points": pl.tolist()}
            for (a, b), pl in zip(drawing.edges, drawing.polylines)
        ],
    }
    if meta is not None:
        out["meta"] = meta
    return out


def drawing_from_dict(obj: dict) -> Drawing:
    try:
        positions = obj["positions"]
        records = obj["polylines"]
        edges = [r["edge"] for r in records]
        lines = [r["points"] for r in records]
    except (KeyError, TypeError) as exc:
        raise GraphFormatError(f"malformed drawing: {exc}") from exc
    for i, pts in enumerate(lines):
        if not pts:
            raise GraphFormatError(f"polyline record {i} is empty")
    try:
        return Drawing(np.asarray(positions, dtype=np.float64).reshape(-1, 2), np.asarray(edges).reshape(-1, 2), tuple(lines))
    except ValueError as exc:
        raise GraphFormatError(f"malformed drawing: {exc}") from exc


def save_drawing(drawing: Drawing, path, meta: dict | None = None) -> None:
    text = json.dumps(drawing_to_dict(drawing, meta), separators=(",", ":"))
    Path(path).write_text(text)


def load_drawing(path) -> Drawing:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc
    return drawing_from_dict(obj)

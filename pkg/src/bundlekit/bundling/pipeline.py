"""FEB: sparsify, draw the sparsifier, bundle it."""

from __future__ import annotations

import time
from typing import NamedTuple

import numpy as np

from ..graph import Drawing, Graph
from ..layout import LayoutParams, compute_layout
from ..sparsify import SparsifyParams, effective_resistances, sparsify_edge_ids
from .epb import EpbParams, epb_bundle, sepb_bundle
from .fdeb import FdebParams, fdeb_bundle, seb_bundle

BUNDLERS = ("fdeb", "seb1", "seb2", "epb", "sepb")


def default_params(bundler: str):
    if bundler in ("fdeb", "seb1", "seb2"):
        return FdebParams()
    if bundler in ("epb", "sepb"):
        return EpbParams()
    raise ValueError(f"unknown bundler {bundler!r}")


def run_bundler(bundler: str, graph: Graph, drawing: Drawing, params=None, er=None) -> tuple[Drawing, float]:
    """Bundle ``drawing`` and return it with the bundling wall time in seconds.

    SEB variants need effective resistances of ``graph``; they are computed
    here (outside the timed region) unless ``er`` is given.
    """
    if params is None:
        params = default_params(bundler)
    if bundler in ("seb1", "seb2") and er is None:
        er = effective_resistances(graph)
    t0 = time.perf_counter()
    if bundler == "fdeb":
        out = fdeb_bundle(drawing, params)
    elif bundler == "seb1":
        out = seb_bundle(drawing, er, "er1", params)
    elif bundler == "seb2":
        out = seb_bundle(drawing, er, "er2", params)
    elif bundler == "epb":
        out = epb_bundle(graph, drawing, params)
    elif bundler == "sepb":
        out = sepb_bundle(graph, drawing, params)
    else:
        raise ValueError(f"unknown bundler {bundler!r}")
    return out, time.perf_counter() - t0


class FebResult(NamedTuple):
    drawing: Drawing
    graph: Graph
    bundling_seconds: float
    edge_ids: np.ndarray


def feb_pipeline(
    graph: Graph,
    bundler: str,
    sp: SparsifyParams | None = None,
    lp: LayoutParams | None = None,
    bp=None,
    *,
    drawing: Drawing | None = None,
    er=None,
) -> FebResult:
    """Bundle a spectral sparsification of ``graph``.

    ``drawing`` is the straight-line drawing ``D`` of the full graph; when it
    is omitted it is computed with ``lp``. With ``lp.reuse_positions`` the
    sparsifier is drawn at the same vertex positions, otherwise it gets its
    own layout. ``er`` (effective resistances of ``graph``) may be passed in to
    avoid recomputation.
    """
    sp = sp or SparsifyParams()
    lp = lp or LayoutParams()
    if bundler not in BUNDLERS:
        raise ValueError(f"unknown bundler {bundler!r}")
    if drawing is None:
        drawing = compute_layout(graph, lp)
    if er is None:
        er = effective_resistances(graph)
    ids = sparsify_edge_ids(graph, er, sp)
    identity = len(ids) == graph.m
    sparse = graph if identity else graph.subgraph(ids)
    if lp.reuse_positions:
        sub_drawing = drawing if identity else drawing.restrict(ids)
    else:
        sub_drawing = compute_layout(sparse, lp, coordinates=drawing)
    sub_er = er if identity else None
    bundled, seconds = run_bundler(bundler, sparse, sub_drawing, bp, er=sub_er)
    return FebResult(bundled, sparse, seconds, ids)

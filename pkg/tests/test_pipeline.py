import numpy as np
import pytest

from bundlekit.bundling import BUNDLERS, FdebParams, feb_pipeline, run_bundler
from bundlekit.datasets import geometric_blob
from bundlekit.layout import LayoutParams, compute_layout
from bundlekit.sparsify import SparsifyParams, effective_resistances

FAST = FdebParams(cycles=3, iterations_per_cycle=10)


def same(a, b):
    return len(a.polylines) == len(b.polylines) and all(
        np.array_equal(x, y) for x, y in zip(a.polylines, b.polylines)
    )


@pytest.fixture(scope="module")
def blob():
    return geometric_blob(40, 300, seed=2)


@pytest.mark.parametrize("bundler", BUNDLERS)
def test_identity_sparsification_equals_direct(blob, bundler):
    g, d, _ = blob
    bp = FAST if bundler in ("fdeb", "seb1", "seb2") else None
    res = feb_pipeline(g, bundler, SparsifyParams(factor=100.0), bp=bp, drawing=d)
    direct, _ = run_bundler(bundler, g, d, bp)
    assert res.graph is g
    assert np.array_equal(res.edge_ids, np.arange(g.m))
    assert same(res.drawing, direct)


@pytest.mark.parametrize("bundler", ["fdeb", "seb2", "epb"])
def test_pipeline_is_seeded(blob, bundler):
    g, d, _ = blob
    sp = SparsifyParams(factor=0.5, seed=11)
    bp = FAST if bundler != "epb" else None
    a = feb_pipeline(g, bundler, sp, bp=bp, drawing=d)
    b = feb_pipeline(g, bundler, sp, bp=bp, drawing=d)
    assert a.graph == b.graph
    assert a.graph.m < g.m
    assert same(a.drawing, b.drawing)


def test_sparse_drawing_reuses_positions(blob):
    g, d, _ = blob
    res = feb_pipeline(g, "epb", SparsifyParams(factor=0.5), drawing=d)
    assert np.array_equal(res.drawing.positions, d.positions)
    assert res.bundling_seconds >= 0.0


def test_own_layout_for_sparsifier(blob):
    g, d, _ = blob
    lp = LayoutParams(iterations=10, reuse_positions=False)
    res = feb_pipeline(g, "epb", SparsifyParams(factor=0.5), lp, drawing=d)
    assert np.array_equal(res.drawing.positions, compute_layout(res.graph, lp).positions)


def test_precomputed_er_is_used(blob):
    g, d, _ = blob
    er = effective_resistances(g)
    a = feb_pipeline(g, "seb1", SparsifyParams(factor=100.0), bp=FAST, drawing=d, er=er)
    b = feb_pipeline(g, "seb1", SparsifyParams(factor=100.0), bp=FAST, drawing=d)
    assert same(a.drawing, b.drawing)


def test_unknown_bundler(blob):
    g, d, _ = blob
    with pytest.raises(ValueError, match="unknown bundler"):
        feb_pipeline(g, "ffteb", drawing=d)
    with pytest.raises(ValueError):
        run_bundler("ffteb", g, d)

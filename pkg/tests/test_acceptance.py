"""End-to-end acceptance checks, one test (or group) per criterion.

Each test carries a ``criterion`` marker; conftest prints a pass/fail line per
criterion at the end of the session.
"""

import json
import os
import statistics
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from bundlekit.bundling import (
    EpbParams,
    EpbTrace,
    FdebParams,
    epb_bundle,
    fdeb_bundle,
    feb_pipeline,
    run_bundler,
    seb_bundle,
    sepb_bundle,
)
from bundlekit.datasets import airlines, geometric_blob, random_geometric, square_with_diagonal
from bundlekit.graph import Drawing, Graph
from bundlekit.metrics import MetricParams, evaluate, fbq_scores
from bundlekit.metrics.fbq import DistributionSummary, ks_distance
from bundlekit.metrics.geometric import BundleAssignment, geometric_graph
from bundlekit.metrics.quality import ambiguity, distortion
from bundlekit.metrics.report import bundle_structure
from bundlekit.sparsify import (
    EffectiveResistanceMap,
    SparsifyParams,
    effective_resistances,
    foster_residuals,
    spectral_sparsify,
)

from conftest import k_graph, random_connected
from oracles import ambiguity_counts, bundle_assignments

ROOT = Path(__file__).resolve().parents[1]
FAST = FdebParams(cycles=4, iterations_per_cycle=20)


def same_drawing(a, b):
    return len(a.polylines) == len(b.polylines) and all(
        x.shape == y.shape and np.array_equal(x, y) for x, y in zip(a.polylines, b.polylines)
    )


def pinv_resistances(graph):
    n = graph.n
    L = np.zeros((n, n))
    for (u, v), w in zip(graph.edges, graph.w):
        L[u, u] += w
        L[v, v] += w
        L[u, v] -= w
        L[v, u] -= w
    P = np.linalg.pinv(L, rcond=1e-12, hermitian=True)
    u, v = graph.edges.T
    return P[u, u] + P[v, v] - 2 * P[u, v]


@pytest.mark.criterion("ER oracle equivalence")
def test_er_oracle_equivalence():
    rng = np.random.default_rng(2024)
    graphs = []
    for _ in range(25):
        n = int(rng.integers(2, 51))
        g = random_connected(n, int(rng.integers(0, 3 * n)), rng)
        if rng.random() < 0.5:
            w = rng.uniform(0.5, 3.0, g.m)
            g = Graph.from_edges(g.n, [(u, v, x) for (u, v), x in zip(g.edges.tolist(), w)])
        graphs.append(g)
    effective_resistances(graphs[0], method="exact")  # warm-up outside the timed loop
    start = time.perf_counter()
    for g in graphs:
        er = effective_resistances(g, method="exact")
        assert np.max(np.abs(er.raw - pinv_resistances(g))) <= 1e-8
        for _, residual in foster_residuals(g, er):
            assert abs(residual) <= 1e-6 * g.n
    assert time.perf_counter() - start < 5.0


@pytest.mark.criterion("Sparsifier contract")
def test_sparsifier_contract_k64():
    g = k_graph(64)
    params = SparsifyParams(factor=4.0, seed=0)
    effective_resistances(k_graph(5))
    start = time.perf_counter()
    er = effective_resistances(g)
    runs = [spectral_sparsify(g, er, params) for _ in range(5)]
    elapsed = time.perf_counter() - start
    first = runs[0]
    assert first.m <= 1065 == params.budget(64)
    assert first.n == 64 and first.components()[0] == 1
    for other in runs[1:]:
        assert other == first
    assert elapsed < 1.0


def reduction_fixtures():
    rng = np.random.default_rng(7)
    out = [square_with_diagonal().drawing, geometric_blob(30, 120, seed=1).drawing,
           random_geometric(40, 0.3, seed=4).drawing]
    for n in (8, 14):
        g = random_connected(n, 2 * n, rng)
        out.append(Drawing.straight(g, rng.random((n, 2)) * 50))
    return out


@pytest.mark.criterion("Constant ER reduces SEB to FDEB")
@pytest.mark.parametrize("idx", range(5))
def test_constant_er_reduction(idx):
    d = reduction_fixtures()[idx]
    er = EffectiveResistanceMap.from_raw(np.full(len(d.edges), 0.7))
    base = fdeb_bundle(d, FAST)
    for variant in ("er1", "er2"):
        assert same_drawing(seb_bundle(d, er, variant, FAST), base)


@pytest.mark.criterion("EPB fixture")
def test_epb_square_fixture():
    g, d, _ = square_with_diagonal()
    diag = g.edge_index(0, 2)
    trace = EpbTrace()
    out = epb_bundle(g, d, EpbParams(distortion_limit=2.0, smoothing=0), trace=trace)
    assert trace.rerouted == {diag: [0, 1, 2]}
    assert np.array_equal(out.polylines[diag], d.positions[[0, 1, 2]])
    assert all(np.array_equal(out.polylines[e], d.polylines[e]) for e in range(g.m) if e != diag)

    trace = EpbTrace()
    assert same_drawing(epb_bundle(g, d, EpbParams(distortion_limit=1.2), trace=trace), d)
    assert trace.rerouted == {}

    for k in (1.2, 2.0, 3.0):
        for smoothing in (0, 2):
            p = EpbParams(distortion_limit=k, smoothing=smoothing, spanner_stretch=1.0)
            assert same_drawing(sepb_bundle(g, d, p), epb_bundle(g, d, p))


@pytest.mark.criterion("Metric hand-values")
def test_metric_hand_values():
    g, d, _ = square_with_diagonal()
    assert distortion(d)[0] == 1.0

    two = Graph.from_edges(4, [(0, 1), (2, 3)])
    geo = geometric_graph(two, BundleAssignment.from_groups(2, [[0, 1]]))
    assert ambiguity_counts(4, [(0, 1), (2, 3)], [[0, 1]], [], 1) == (4, 8)
    assert ambiguity(two, geo, 1) == 0.5
    assert {tuple(e) for e in geo.edges.tolist()} == {(0, 1), (2, 3), (0, 3), (1, 2)}
    assert geo.m == 4

    a = DistributionSummary("local_clustering", np.array([1.0, 2.0, 3.0, 4.0]))
    b = DistributionSummary("local_clustering", np.array([2.0, 3.0, 4.0, 5.0]))
    assert ks_distance(a, b) == 0.25


@pytest.mark.criterion("Ambiguity oracle")
def test_ambiguity_oracle_exhaustive():
    rng = np.random.default_rng(99)
    checked = 0
    for case in range(50):
        n = int(rng.integers(2, 9))
        want = int(rng.integers(1, 6))
        pairs = set()
        while len(pairs) < min(want, n * (n - 1) // 2):
            a, b = sorted(rng.choice(n, 2, replace=False).tolist())
            pairs.add((a, b))
        g = Graph.from_edges(n, sorted(pairs))
        edges = [tuple(e) for e in g.edges.tolist()]
        gamma = 1 + case % 3
        for groups, flipped in bundle_assignments(g.m):
            geo = geometric_graph(g, BundleAssignment.from_groups(g.m, groups, flipped))
            false, total = ambiguity_counts(n, edges, groups, flipped, gamma)
            assert ambiguity(g, geo, gamma) == (false / total if total else 0.0)
            checked += 1
    assert checked > 50


def fbq_fixtures():
    return {
        "square": square_with_diagonal(),
        "blob": geometric_blob(40, 300, seed=2),
        "rgg": random_geometric(60, 0.25, seed=3),
        "airlines": airlines(),
    }


@pytest.mark.criterion("FBQ identity suite")
@pytest.mark.parametrize("name", ["square", "blob", "rgg", "airlines"])
def test_fbq_identity(name):
    g, d, _ = fbq_fixtures()[name]
    mp = MetricParams(width=512)
    for bundler in ("epb", "seb2"):
        bp = FAST if bundler == "seb2" else None
        out, _ = run_bundler(bundler, g, d, bp)
        geo = bundle_structure(g, d, out, mp)
        assert fbq_scores(geo, geo) == {"fbq_js": 1.0, "fbq_sq_dg": 0.0, "fbq_sq_cc": 0.0}
        res = feb_pipeline(g, bundler, SparsifyParams(factor=1e6), bp=bp, drawing=d)
        assert res.graph.m == g.m
        geo_feb = bundle_structure(res.graph, d, res.drawing, mp)
        assert fbq_scores(geo, geo_feb)["fbq_js"] == 1.0


@pytest.fixture(scope="module")
def benchmark_blob():
    return geometric_blob(500, 20000, seed=0)


@pytest.mark.slow
@pytest.mark.criterion("Directional claims at desk scale")
@pytest.mark.parametrize("bundler", ["fdeb", "epb"])
def test_feb_speedup_on_dense_blob(benchmark_blob, bundler):
    g, d, _ = benchmark_blob
    assert g.n == 500 and g.m >= 30 * g.n
    er = effective_resistances(g)
    sp = SparsifyParams(factor=4.0, seed=0)
    direct, feb = [], []
    for _ in range(3):
        direct.append(run_bundler(bundler, g, d, er=er)[1])
        feb.append(feb_pipeline(g, bundler, sp, drawing=d, er=er).bundling_seconds)
    improvement = 1.0 - statistics.median(feb) / statistics.median(direct)
    print(f"{bundler}: direct {statistics.median(direct):.2f}s feb {statistics.median(feb):.2f}s "
          f"improvement {improvement:.1%}")
    assert improvement >= 0.20


@pytest.mark.slow
@pytest.mark.criterion("Directional claims at desk scale")
def test_airlines_seb2_vs_epb():
    g, d, _ = airlines()
    er = effective_resistances(g)
    reports = {}
    for bundler in ("seb2", "epb"):
        out, _ = run_bundler(bundler, g, d, er=er)
        reports[bundler] = evaluate(g, d, out, MetricParams(gammas=(1,)))
    seb2, epb = reports["seb2"], reports["epb"]
    print(f"seb2 dist {seb2.distortion:.4f} ink {seb2.ink:.3f}; epb dist {epb.distortion:.4f} ink {epb.ink:.3f}")
    assert seb2.distortion < epb.distortion
    assert epb.ink < seb2.ink


def stage_hashes(dataset, workdir, threads):
    env = dict(os.environ, BUNDLEKIT_THREADS=str(threads), NUMBA_NUM_THREADS="4")
    r = subprocess.run([sys.executable, str(ROOT / "scripts" / "stage_hashes.py"), dataset, str(workdir)],
                       capture_output=True, text=True, env=env, timeout=600)
    assert r.returncode == 0, r.stderr
    return json.loads(r.stdout)


@pytest.mark.slow
@pytest.mark.criterion("Determinism")
@pytest.mark.parametrize("dataset", ["square-diagonal", "blob:80:600:2", "airlines"])
def test_stage_outputs_are_byte_identical(dataset, tmp_path):
    a = stage_hashes(dataset, tmp_path / "a", threads=1)
    b = stage_hashes(dataset, tmp_path / "b", threads=1)
    c = stage_hashes(dataset, tmp_path / "c", threads=4)
    assert len(a) >= 20
    assert a == b == c

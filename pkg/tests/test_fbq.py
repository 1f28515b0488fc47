import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import ks_2samp

from bundlekit.graph import Graph
from bundlekit.metrics.fbq import (
    DistributionSummary,
    fbq_js,
    fbq_sq,
    ks_distance,
    property_distribution,
)
from bundlekit.metrics.geometric import BundleAssignment, geometric_graph

from conftest import connected_graphs, k_graph


def summary(vals, prop="local_clustering"):
    return DistributionSummary(prop, np.sort(np.asarray(vals, dtype=float)))


def test_js_identity_and_disjoint():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    h = Graph.from_edges(4, [(0, 2), (1, 3)])
    assert fbq_js(g, g) == 1.0
    assert fbq_js(g, h) == 0.0


def test_js_hand_value():
    # v = 0 with N = {1, 2} and N' = {2, 3}
    g = Graph.from_edges(4, [(0, 1), (0, 2)])
    h = Graph.from_edges(4, [(0, 2), (0, 3)])
    # per vertex: 1/3, 0 ({0} vs {}), 1 ({0} vs {0}), 0 ({} vs {0})
    assert fbq_js(g, h) == pytest.approx((1 / 3 + 0 + 1 + 0) / 4, abs=1e-15)


def test_js_isolated_in_both_counts_one():
    g = Graph.from_edges(3, [(0, 1)])
    assert fbq_js(g, g) == 1.0


@given(connected_graphs(max_n=10), connected_graphs(max_n=10))
def test_js_symmetric_and_bounded(a, b):
    if a.n != b.n:
        with pytest.raises(ValueError):
            fbq_js(a, b)
        return
    x = fbq_js(a, b)
    assert x == fbq_js(b, a)
    assert 0.0 <= x <= 1.0
    assert (x == 1.0) == (a.edges.tolist() == b.edges.tolist())


def test_property_hand_values():
    assert property_distribution(k_graph(3), "local_clustering").values.tolist() == [1, 1, 1]
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert property_distribution(path, "local_clustering").values.tolist() == [0, 0, 0]
    star = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
    assert property_distribution(star, "avg_neighbor_degree").values.tolist() == [1, 4, 4, 4, 4]


@given(connected_graphs(max_n=12))
def test_properties_match_networkx(g):
    nx = pytest.importorskip("networkx")
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges.tolist())
    and_ = nx.average_neighbor_degree(h)
    cc = nx.clustering(h)
    assert np.allclose(property_distribution(g, "avg_neighbor_degree").values, sorted(and_.values()))
    assert np.allclose(property_distribution(g, "local_clustering").values, sorted(cc.values()))


def test_property_on_geometric_graph():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    geo = geometric_graph(g, BundleAssignment.from_groups(2, [[0, 1]]))
    # the four-cycle 0-1-2-3 has degree 2 everywhere and no triangles
    assert property_distribution(geo, "avg_neighbor_degree").values.tolist() == [2, 2, 2, 2]
    assert property_distribution(geo, "local_clustering").values.tolist() == [0, 0, 0, 0]


def test_unknown_property():
    with pytest.raises(ValueError):
        property_distribution(k_graph(3), "betweenness")


def test_ks_hand_values():
    assert ks_distance(summary([1, 2, 3, 4]), summary([2, 3, 4, 5])) == 0.25
    assert ks_distance(summary([0, 0]), summary([1, 1])) == 1.0
    assert ks_distance(summary([3, 1, 2]), summary([1, 2, 3])) == 0.0


@given(
    st.lists(st.integers(0, 6).map(float), min_size=1, max_size=20),
    st.lists(st.integers(0, 6).map(float), min_size=1, max_size=20),
)
def test_ks_matches_scipy(a, b):
    d = ks_distance(summary(a), summary(b))
    assert d == pytest.approx(ks_2samp(a, b).statistic, abs=1e-12)
    assert d == ks_distance(summary(b), summary(a))


def test_ks_errors():
    with pytest.raises(ValueError):
        ks_distance(summary([1]), summary([1], "avg_neighbor_degree"))
    with pytest.raises(ValueError):
        ks_distance(summary([]), summary([1]))


def test_sq_identity_and_k3_vs_p3():
    k3 = k_graph(3)
    p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert fbq_sq(k3, k3) == {"avg_neighbor_degree": 0.0, "local_clustering": 0.0}
    assert fbq_sq(k3, p3, ("local_clustering",)) == {"local_clustering": 1.0}

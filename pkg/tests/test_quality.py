import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bundlekit.graph import Drawing, Graph
from bundlekit.metrics.geometric import BundleAssignment, geometric_graph
from bundlekit.metrics.quality import ambiguity, distortion

from conftest import connected_graphs
from oracles import ambiguity_counts, bundle_assignments


def test_straight_drawing_has_no_distortion(rng):
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    raw, rep = distortion(Drawing.straight(g, rng.random((4, 2))))
    assert raw == 1.0 and rep == 0.0


def test_bent_unit_edge():
    g = Graph.from_edges(2, [(0, 1)])
    pos = np.array([[0.0, 0.0], [1.0, 0.0]])
    h = math.sqrt(0.75 ** 2 - 0.25)
    d = Drawing(pos, g.edges, [np.array([[0.0, 0.0], [0.5, h], [1.0, 0.0]])])
    raw, rep = distortion(d)
    assert raw == pytest.approx(1.5, abs=1e-15)
    assert rep == raw - 1.0


@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=6))
def test_distortion_at_least_one(mid):
    g = Graph.from_edges(2, [(0, 1)])
    pos = np.array([[0.0, 0.0], [1.0, 0.0]])
    d = Drawing(pos, g.edges, [np.vstack([pos[0], np.array(mid), pos[1]])])
    assert distortion(d)[0] >= 1.0 - 1e-12


def test_distortion_errors():
    g = Graph.from_edges(2, [(0, 1)])
    with pytest.raises(ValueError, match="coincident"):
        distortion(Drawing.straight(g, np.zeros((2, 2))))


def test_two_bundled_independent_edges():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    geo = geometric_graph(g, BundleAssignment.from_groups(2, [[0, 1]]))
    # each of the 4 incidences reaches 2 vertices, one of them false
    assert ambiguity(g, geo, 1) == 0.5
    assert ambiguity_counts(4, [(0, 1), (2, 3)], [[0, 1]], [], 1) == (4, 8)


@given(connected_graphs(max_n=10), st.integers(1, 3))
def test_no_bundling_no_ambiguity(g, gamma):
    geo = geometric_graph(g, BundleAssignment.singletons(g.m))
    assert ambiguity(g, geo, gamma) == 0.0


@settings(max_examples=30)
@given(st.integers(2, 8), st.integers(1, 4), st.integers(0, 2**31 - 1), st.integers(1, 3))
def test_matches_enumerator_on_every_assignment(n, m, seed, gamma):
    rng = np.random.default_rng(seed)
    pairs = {tuple(sorted(rng.choice(n, 2, replace=False).tolist())) for _ in range(m)}
    g = Graph.from_edges(n, sorted(pairs))
    edges = [tuple(e) for e in g.edges.tolist()]
    for groups, flipped in bundle_assignments(g.m):
        geo = geometric_graph(g, BundleAssignment.from_groups(g.m, groups, flipped))
        false, total = ambiguity_counts(n, edges, groups, flipped, gamma)
        assert ambiguity(g, geo, gamma) == (false / total if total else 0.0)


def test_ambiguity_in_unit_interval(rng):
    g = Graph.from_edges(8, [(i, (i + 1) % 8) for i in range(8)] + [(0, 4)])
    b = BundleAssignment(rng.integers(0, 3, g.m), rng.random(g.m) < 0.5)
    geo = geometric_graph(g, b)
    for gamma in (1, 2, 3):
        assert 0.0 <= ambiguity(g, geo, gamma) <= 1.0


def test_ambiguity_errors():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    geo = geometric_graph(g, BundleAssignment.singletons(2))
    with pytest.raises(ValueError):
        ambiguity(g, geo, 0)
    other = Graph.from_edges(5, [(0, 1), (2, 3)])
    with pytest.raises(ValueError):
        ambiguity(other, geo, 1)

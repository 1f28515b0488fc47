import numpy as np
import pytest
from hypothesis import given, settings

from bundlekit.graph import Drawing, Graph
from bundlekit.layout import LayoutError, LayoutParams, compute_layout

from conftest import connected_graphs


def test_import_passes_coordinates_through():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    pos = np.array([[0.0, 1.0], [2.0, 3.0], [4.0, 5.0]])
    d = compute_layout(g, LayoutParams(algorithm="import"), pos)
    assert np.array_equal(d.positions, pos)
    again = compute_layout(g, LayoutParams(algorithm="import"), d)
    assert again == d


def test_import_needs_coordinates():
    g = Graph.from_edges(2, [(0, 1)])
    with pytest.raises(LayoutError):
        compute_layout(g, LayoutParams(algorithm="import"))


def test_params_validation():
    with pytest.raises(ValueError):
        LayoutParams(algorithm="circle")
    with pytest.raises(ValueError):
        LayoutParams(iterations=0)
    with pytest.raises(ValueError):
        LayoutParams(width=0)


@settings(max_examples=15)
@given(connected_graphs(max_n=20))
def test_force_layout_in_frame_and_seeded(g):
    p = LayoutParams(iterations=30, seed=3, width=200, height=100)
    a = compute_layout(g, p)
    b = compute_layout(g, p)
    assert isinstance(a, Drawing) and a.is_straight()
    assert np.array_equal(a.positions, b.positions)
    assert (a.positions >= 0).all()
    assert (a.positions[:, 0] <= 200).all() and (a.positions[:, 1] <= 100).all()


def test_force_layout_pulls_neighbors_together():
    # two triangles joined by one edge: in-triangle edges end up shorter than
    # the average distance between the triangles
    g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    pos = compute_layout(g, LayoutParams(iterations=200, seed=1)).positions
    inner = np.mean([np.linalg.norm(pos[a] - pos[b]) for a, b in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]])
    across = np.mean([np.linalg.norm(pos[a] - pos[b]) for a in (0, 1) for b in (4, 5)])
    assert inner < across


def test_coincident_start_positions_separate():
    g = Graph.from_edges(2, [(0, 1)])
    p = LayoutParams(iterations=5, width=1e-12, height=1e-12)
    pos = compute_layout(g, p).positions
    assert np.all(np.isfinite(pos))

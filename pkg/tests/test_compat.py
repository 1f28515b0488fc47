import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from bundlekit.bundling.compat import (
    VARIANTS,
    c_er1,
    c_er2,
    c_geometric,
    compat_graph,
    compatibility,
)

coord = st.floats(-100, 100, allow_nan=False)
segment = st.tuples(coord, coord, coord, coord)
unit = st.floats(0.0, 1.0)


def four_terms(P, Q):
    """Reference product of angle, scale, position and visibility terms."""
    p0, p1 = np.asarray(P[0], float), np.asarray(P[1], float)
    q0, q1 = np.asarray(Q[0], float), np.asarray(Q[1], float)
    vp, vq = p1 - p0, q1 - q0
    lp, lq = np.linalg.norm(vp), np.linalg.norm(vq)
    if lp == 0 or lq == 0:
        return 0.0
    angle = min(1.0, abs(vp @ vq) / (lp * lq))
    lavg = (lp + lq) / 2
    scale = 2 / (lavg / min(lp, lq) + max(lp, lq) / lavg)
    position = lavg / (lavg + np.linalg.norm((p0 + p1) / 2 - (q0 + q1) / 2))

    def vis(a0, a1, b0, b1):
        d = a1 - a0
        proj = [a0 + ((b - a0) @ d) / (d @ d) * d for b in (b0, b1)]
        width = np.linalg.norm(proj[1] - proj[0])
        if width == 0:
            return 0.0
        mid = (proj[0] + proj[1]) / 2
        return max(0.0, 1 - 2 * np.linalg.norm((a0 + a1) / 2 - mid) / width)

    return angle * scale * position * min(vis(p0, p1, q0, q1), vis(q0, q1, p0, p1))


def test_identical_segments_score_one():
    P = [(0.0, 0.0), (3.0, 4.0)]
    assert c_geometric(P, P) == pytest.approx(1.0, abs=1e-15)


def test_perpendicular_crossing_scores_zero():
    assert c_geometric([(-1, 0), (1, 0)], [(0, -1), (0, 1)]) == 0.0


def test_parallel_unit_edges_offset_by_one():
    # angle 1, scale 1, position 1 / (1 + 1), visibility 1
    assert c_geometric([(0, 0), (1, 0)], [(0, 1), (1, 1)]) == pytest.approx(0.5, abs=1e-15)


def test_zero_length_edge_scores_zero():
    assert c_geometric([(1, 1), (1, 1)], [(0, 0), (1, 0)]) == 0.0


@given(segment, segment)
def test_geometric_matches_reference(a, b):
    P = [(a[0], a[1]), (a[2], a[3])]
    Q = [(b[0], b[1]), (b[2], b[3])]
    assume(math.dist(*P) > 1e-3 and math.dist(*Q) > 1e-3)
    c = c_geometric(P, Q)
    assert 0.0 <= c <= 1.0
    assert c == pytest.approx(four_terms(P, Q), abs=1e-9)
    assert c == pytest.approx(c_geometric(Q, P), abs=1e-12)


def test_polyline_uses_endpoints():
    P = np.array([[0.0, 0.0], [0.5, 3.0], [1.0, 0.0]])
    assert c_geometric(P, [(0, 1), (1, 1)]) == c_geometric([(0, 0), (1, 0)], [(0, 1), (1, 1)])


@pytest.mark.parametrize("x", [0.0, 0.3, 1.0])
def test_er1_equal_inputs(x):
    assert c_er1(x, x) == 1.0


def test_er1_values():
    assert c_er1(0.2, 0.5) == pytest.approx(0.7)
    assert c_er1(0.0, 1.0) == 0.0


def test_er2_values():
    assert c_er2(0.3, 0.3) == 1.0
    assert c_er2(0.25, 0.5) == 0.5
    assert c_er2(0.0, 0.3) == 0.0
    assert c_er2(0.0, 0.0) == 1.0


@given(unit, unit)
def test_er_terms_symmetric_and_bounded(a, b):
    for f in (c_er1, c_er2):
        assert f(a, b) == f(b, a)
        assert 0.0 <= f(a, b) <= 1.0
    if a == b:
        assert c_er1(a, b) == 1.0
    elif abs(a - b) > 1e-15:
        # below double precision 1 - |a - b| rounds to 1
        assert c_er1(a, b) < 1.0


def test_er_rejects_out_of_range():
    with pytest.raises(ValueError):
        c_er1(1.5, 0.2)
    with pytest.raises(ValueError):
        c_er2(-0.1, 0.2)


@given(segment, segment, unit, unit, st.sampled_from(["none", "er1", "er2"]))
def test_combined_is_product(a, b, x, y, variant):
    P = [(a[0], a[1]), (a[2], a[3])]
    Q = [(b[0], b[1]), (b[2], b[3])]
    s = compatibility(P, Q, x, y, variant)
    assert s.combined == s.geometric * s.spectral
    assert 0.0 <= s.combined <= 1.0


@pytest.mark.parametrize("variant", ["none", "er1", "er2"])
def test_compat_graph_matches_pairwise(variant, rng):
    m = 40
    S = rng.random((m, 2)) * 50
    T = S + rng.normal(scale=15, size=(m, 2))
    er = rng.random(m)
    threshold = 0.05
    indptr, nbr, score, _ = compat_graph(S, T, er, VARIANTS[variant], threshold)
    expected = {}
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            s = compatibility([S[i], T[i]], [S[j], T[j]], er[i], er[j], variant).combined
            if s > 0 and s >= threshold:
                expected[(i, j)] = s
    got = {}
    for i in range(m):
        row = nbr[indptr[i]:indptr[i + 1]]
        assert np.all(np.diff(row) > 0)
        for a in range(indptr[i], indptr[i + 1]):
            got[(i, int(nbr[a]))] = score[a]
    assert got.keys() == expected.keys()
    for k, v in expected.items():
        assert got[k] == pytest.approx(v, rel=1e-12)


def test_compat_graph_flags_reversed_edges():
    S = np.array([[0.0, 0.0], [1.0, 0.1]])
    T = np.array([[1.0, 0.0], [0.0, 0.1]])
    indptr, nbr, score, flip = compat_graph(S, T, np.ones(2), 0, 0.05)
    assert nbr.tolist() == [1, 0]
    assert flip.tolist() == [True, True]

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bundlekit.graph import Drawing, Graph

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def random_connected(n, extra, rng):
    """Random spanning tree on ``n`` vertices plus ``extra`` random edges."""
    edges = set()
    perm = rng.permutation(n)
    for i in range(1, n):
        a, b = int(perm[i]), int(perm[rng.integers(0, i)])
        edges.add((min(a, b), max(a, b)))
    tries = 0
    while len(edges) < n - 1 + extra and tries < 50 * (extra + 1):
        a, b = (int(x) for x in rng.integers(0, n, size=2))
        tries += 1
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(n, sorted(edges))


def random_drawing(graph, rng):
    return Drawing.straight(graph, rng.random((graph.n, 2)) * 100.0)


@st.composite
def connected_graphs(draw, min_n=2, max_n=12):
    n = draw(st.integers(min_n, max_n))
    extra = draw(st.integers(0, n * (n - 1) // 2 - (n - 1)))
    seed = draw(st.integers(0, 2**31 - 1))
    return random_connected(n, extra, np.random.default_rng(seed))


def k_graph(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def square():
    from bundlekit.datasets import square_with_diagonal

    return square_with_diagonal()


_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion a test belongs to")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when == "teardown" and call.excinfo is None:
        return
    status = _criteria.setdefault(marker.args[0], [])
    if call.excinfo is not None:
        status.append((item.nodeid, False))
    elif call.when == "call":
        status.append((item.nodeid, True))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, results in _criteria.items():
        ok = all(passed for _, passed in results)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({sum(p for _, p in results)}/{len(results)})")

import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from homdens.graphs import Graph
from homdens.kernel import random_kernel

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=1, max_n=6, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    G = Graph(n, tuple(p for p, m in zip(pairs, mask) if m))
    if connected and not G.is_connected():
        # chain the components together so the draw stays connected
        comps = G.components()
        extra = tuple((comps[i][0], comps[i + 1][0]) for i in range(len(comps) - 1))
        G = Graph(n, G.edges + extra)
    return G


@st.composite
def kernels(draw, kinds=("DNN", "CP", "SymNonneg"), max_k=4):
    kind = draw(st.sampled_from(kinds))
    k = draw(st.integers(1, max_k))
    rank = draw(st.integers(1, k))
    seed = draw(st.integers(0, 2**31))
    weights = draw(st.sampled_from(["uniform", "random"]))
    return random_kernel(kind, k, rank, seed=seed, weights=weights)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one (number, title, passed, detail) row per acceptance criterion
ACCEPTANCE: list[tuple[int, str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num:2d} {title}: {detail}")

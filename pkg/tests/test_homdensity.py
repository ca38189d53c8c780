import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs, kernels
from homdens.graphs import (
    Graph,
    complete,
    cycle,
    disjoint_union,
    make_bipartite,
    make_hypergraph,
    path,
    subdivision,
)
from homdens.homdensity import (
    ArityMismatch,
    BudgetExceeded,
    ZeroEdges,
    adjacency_kernel,
    hom_count,
    t,
    t_bipartite,
    t_bruteforce,
    t_dp,
    t_hypergraph,
    t_weighted,
)
from homdens.kernel import (
    edge_density,
    from_matrix,
    gram,
    permutation_kernel,
    permute,
    random_kernel,
    rect_kernel,
    tensor_from_step,
    tensor_kernel,
)


def naive(G, g):
    """Plain-Python sum over all cell assignments."""
    total = 0.0
    for phi in itertools.product(range(g.k), repeat=G.n):
        term = math.prod(g.w[c] for c in phi)
        for u, v in G.edges:
            term *= g.A[phi[u], phi[v]]
        total += term
    return total


def test_examples():
    assert t_bruteforce(complete(3), from_matrix(np.ones((2, 2)))) == pytest.approx(1.0, rel=1e-15)
    assert t_bruteforce(complete(3), from_matrix(np.eye(2))) == pytest.approx(0.25, rel=1e-15)
    assert t_bruteforce(complete(3), permutation_kernel(1, 1)) == pytest.approx(1 / 27, rel=1e-14)
    assert t(Graph(3, ()), random_kernel("DNN", 3, seed=0)) == 1.0


@given(graphs(max_n=5), kernels(max_k=3))
def test_bruteforce_matches_naive(G, g):
    assert t_bruteforce(G, g) == pytest.approx(naive(G, g), rel=1e-12, abs=1e-300)


@given(graphs(max_n=6), kernels())
def test_dp_matches_bruteforce(G, g):
    b = t_bruteforce(G, g)
    assert abs(t_dp(G, g) - b) <= 1e-12 * max(1.0, b)


def test_c6_dp_example():
    g = random_kernel("DNN", 5, seed=3)
    b = t_bruteforce(cycle(6), g)
    assert abs(t_dp(cycle(6), g) - b) <= 1e-12 * b


@given(kernels(), st.integers(1, 6))
def test_path_chain_product(g, k):
    M = g.A * g.w[None, :]
    ref = float(g.w @ np.linalg.matrix_power(M, k) @ np.ones(g.k))
    assert t_dp(path(k), g) == pytest.approx(ref, rel=1e-12)


@given(graphs(max_n=4), graphs(max_n=3), kernels())
def test_multiplicative_over_components(G1, G2, g):
    lhs = t_dp(disjoint_union(G1, G2), g)
    assert lhs == pytest.approx(t_dp(G1, g) * t_dp(G2, g), rel=1e-12, abs=1e-300)


@given(graphs(max_n=6), kernels(), st.randoms())
def test_isomorphism_invariance(G, g, rnd):
    perm = list(range(G.n))
    rnd.shuffle(perm)
    cells = list(range(g.k))
    rnd.shuffle(cells)
    base = t_dp(G, g)
    assert t_dp(G.relabel(perm), g) == pytest.approx(base, rel=1e-12, abs=1e-300)
    assert t_dp(G, permute(g, cells)) == pytest.approx(base, rel=1e-12, abs=1e-300)


@given(graphs(max_n=5), kernels(), st.data())
def test_monotone_in_entries(G, g, data):
    i = data.draw(st.integers(0, g.k - 1))
    j = data.draw(st.integers(0, g.k - 1))
    A = np.array(g.A)
    A[i, j] += 0.5
    A[j, i] = A[i, j]
    assert t_dp(G, from_matrix(A, g.w)) >= t_dp(G, g) * (1 - 1e-12)


def test_hom_count_examples():
    assert hom_count(complete(2), complete(3)) == 6
    assert hom_count(complete(3), complete(3)) == 6
    assert hom_count(cycle(4), complete(2)) == 2


@given(graphs(max_n=5), graphs(min_n=1, max_n=4))
def test_hom_count_consistency(G, H):
    val = t_dp(G, adjacency_kernel(H)) * H.n ** G.n
    n = hom_count(G, H)
    assert round(val) == n and abs(val - n) < 1e-6


def test_weighted_density_examples():
    g = random_kernel("DNN", 3, seed=5)
    ones = [np.ones(3)] * 3
    lhs, rhs = t_weighted(complete(3), g, ones)
    assert lhs == t_dp(complete(3), g)
    assert rhs == pytest.approx(edge_density(g) ** 3, rel=1e-14)
    f1, f2 = np.array([0.2, 1.0, 0.5]), np.array([1.0, 0.1, 0.3])
    lhs, rhs = t_weighted(complete(2), g, [f1, f2])
    D = np.diag(g.w)
    f = np.sqrt(f1 * f2)
    assert lhs == pytest.approx(f1 @ D @ g.A @ D @ f2, rel=1e-13)
    assert rhs == pytest.approx(f @ D @ g.A @ D @ f, rel=1e-13)
    assert lhs - rhs >= -1e-10
    J = from_matrix(np.ones((3, 3)))
    fs = [np.array([0.3, 1.0, 2.0]), np.array([1.0, 1.0, 0.1]), np.array([0.5, 0.7, 0.9])]
    lhs, rhs = t_weighted(complete(3), J, fs)
    w = J.w
    assert lhs == pytest.approx(math.prod(float(f @ w) for f in fs), rel=1e-13)
    fg = (fs[0] * fs[1] * fs[2]) ** (1 / 6)
    assert rhs == pytest.approx(float(fg @ w) ** 6, rel=1e-13)
    assert lhs >= rhs
    with pytest.raises(ZeroEdges):
        t_weighted(Graph(2, ()), g, ones[:2])


def test_bipartite_examples():
    rng = np.random.default_rng(0)
    h = rect_kernel(rng.uniform(size=(3, 4)), rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(4)))
    k11 = make_bipartite(1, 1, [(0, 0)])
    assert t_bipartite(k11, h) == pytest.approx(float(h.w_row @ h.H @ h.w_col), rel=1e-14)
    c4 = make_bipartite(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    s = np.linalg.svd(h.operator(), compute_uv=False)
    assert t_bipartite(c4, h) == pytest.approx(float(np.sum(s ** 4)), rel=1e-12)
    hs = rect_kernel(rng.uniform(size=(3, 3)))
    assert t_bipartite(subdivision(complete(3)), hs) == pytest.approx(t_dp(complete(3), gram(hs)), rel=1e-12)


@given(graphs(max_n=4), st.integers(1, 3), st.integers(1, 3), st.integers(0, 10**6))
def test_bipartite_dp_matches_brute(G, n, m, seed):
    rng = np.random.default_rng(seed)
    h = rect_kernel(rng.normal(size=(n, m)))
    S = subdivision(G)
    b = t_bipartite(S, h, "brute")
    assert abs(t_bipartite(S, h, "dp") - b) <= 1e-12 * max(1.0, abs(b))


def test_hypergraph_examples():
    v = np.array([0.2, 0.9, 0.4])
    g1 = tensor_kernel(v)
    G = make_hypergraph(1, 3, [(0,), (2,)])
    assert t_hypergraph(G, g1) == pytest.approx(float(v @ g1.w) ** 2, rel=1e-14)
    g = random_kernel("CP", 3, seed=1)
    assert t_hypergraph(make_hypergraph(2, 4, cycle(4).edges), tensor_from_step(g)) == pytest.approx(
        t_dp(cycle(4), g), rel=1e-13
    )
    with pytest.raises(ArityMismatch):
        t_hypergraph(make_hypergraph(3, 3, [(0, 1, 2)]), g1)


def test_budget(monkeypatch):
    g = random_kernel("SymNonneg", 4, seed=0)
    with pytest.raises(BudgetExceeded):
        t_bruteforce(complete(6), g, budget=1000)
    monkeypatch.setenv("HOMDENS_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        t_dp(complete(4), g)
    with pytest.raises(BudgetExceeded):
        hom_count(cycle(6), complete(4))

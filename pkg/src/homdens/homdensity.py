"""Homomorphism densities of graphs, bipartite graphs and hypergraphs.

Every density here is a sum over assignments of vertices to cells, each
assignment weighted by the cell widths and the product of kernel values
on its edges.  Two evaluators share that factor-graph description:

* ``bruteforce`` enumerates every assignment and adds the terms with
  ``math.fsum``.  It is the oracle.
* ``dp`` eliminates variables one at a time in greedy min-fill order.

Both charge their work against a budget of weighted multiply-adds
(``HOMDENS_BUDGET``, default 1e8) and raise rather than switch methods.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphs import BipartiteGraph, Graph, Hypergraph
from .kernel import RectKernel, StepKernel, TensorKernel, edge_density, from_matrix

DEFAULT_BUDGET = 10**8
_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


class BudgetExceeded(RuntimeError):
    pass


class ZeroEdges(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


def get_budget(budget: int | None = None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get("HOMDENS_BUDGET")
    return int(float(env)) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class FactorGraph:
    """Variables with weighted finite domains and nonnegative-or-signed factors."""

    weights: tuple[np.ndarray, ...]
    factors: tuple[tuple[tuple[int, ...], np.ndarray], ...]

    @property
    def n(self) -> int:
        return len(self.weights)


def elimination_order(n: int, scopes: Sequence[Sequence[int]]) -> list[int]:
    """Greedy min-fill order on the interaction graph; ties by degree, then index."""
    nb = [set() for _ in range(n)]
    for sc in scopes:
        for u, v in itertools.combinations(set(sc), 2):
            nb[u].add(v)
            nb[v].add(u)
    alive = set(range(n))
    order = []
    while alive:
        def fill(u):
            ns = list(nb[u] & alive)
            return sum(1 for a, b in itertools.combinations(ns, 2) if b not in nb[a])

        u = min(alive, key=lambda x: (fill(x), len(nb[x] & alive), x))
        ns = nb[u] & alive
        for a, b in itertools.combinations(ns, 2):
            nb[a].add(b)
            nb[b].add(a)
        alive.remove(u)
        order.append(u)
    return order


def dp_cost(fg: FactorGraph, order: Sequence[int]) -> int:
    sizes = [len(w) for w in fg.weights]
    scopes = [set(sc) for sc, _ in fg.factors]
    cost = 0
    for v in order:
        touch = [s for s in scopes if v in s]
        union = set().union(*touch) if touch else {v}
        cost += math.prod(sizes[u] for u in union | {v})
        scopes = [s for s in scopes if v not in s] + [union - {v}]
    return cost


def contract_dp(fg: FactorGraph, budget: int | None = None, order: Sequence[int] | None = None) -> float:
    """Sum-product by variable elimination."""
    if order is None:
        order = elimination_order(fg.n, [sc for sc, _ in fg.factors])
    if dp_cost(fg, order) > get_budget(budget):
        raise BudgetExceeded("elimination cost exceeds budget")
    factors = [(tuple(sc), arr) for sc, arr in fg.factors]
    scalar = 1.0
    for v in order:
        touch = [f for f in factors if v in f[0]]
        if not touch:
            scalar *= float(np.sum(fg.weights[v]))
            continue
        factors = [f for f in factors if v not in f[0]]
        union = sorted(set().union(*(sc for sc, _ in touch)))
        loc = {u: _LETTERS[i] for i, u in enumerate(union)}
        out = [u for u in union if u != v]
        spec = ",".join("".join(loc[u] for u in sc) for sc, _ in touch)
        spec += "," + loc[v] + "->" + "".join(loc[u] for u in out)
        arr = np.einsum(spec, *(a for _, a in touch), fg.weights[v])
        factors.append((tuple(out), arr))
    for sc, arr in factors:
        scalar *= float(arr)
    return scalar


def contract_bruteforce(fg: FactorGraph, budget: int | None = None, chunk: int = 1 << 16) -> float:
    """Enumerate all assignments; exact summation of the floating-point terms."""
    sizes = [len(w) for w in fg.weights]
    total = math.prod(sizes)
    if total * max(1, len(fg.factors) + fg.n) > get_budget(budget):
        raise BudgetExceeded(f"{total} assignments exceed budget")
    if fg.n == 0:
        out = 1.0
        for _, arr in fg.factors:
            out *= float(arr)
        return out
    terms = []
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk))
        digits = np.unravel_index(idx, sizes)
        t = np.ones(len(idx))
        for v in range(fg.n):
            t = t * fg.weights[v][digits[v]]
        for sc, arr in fg.factors:
            t = t * arr[tuple(digits[u] for u in sc)]
        terms.append(t)
    return math.fsum(np.concatenate(terms))


def _run(fg: FactorGraph, method: str, budget):
    if method == "dp":
        return contract_dp(fg, budget)
    if method in ("brute", "bruteforce"):
        return contract_bruteforce(fg, budget)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# factor graphs of the densities


def graph_factors(G: Graph, g: StepKernel, fs: Sequence[np.ndarray] | None = None) -> FactorGraph:
    weights = tuple(g.w if fs is None else g.w * np.asarray(fs[u], dtype=float) for u in range(G.n))
    return FactorGraph(weights, tuple(((u, v), g.A) for u, v in G.edges))


def bipartite_factors(H: BipartiteGraph, h: RectKernel | Sequence[RectKernel]) -> FactorGraph:
    """Left vertices are variables ``0..n_left-1``, right ones follow.

    ``h`` may be one kernel or a sequence aligned with ``H.edges`` (mixed density).
    """
    per_edge = list(h) if isinstance(h, (list, tuple)) else [h] * H.e
    if len(per_edge) != H.e:
        raise ValueError("need one kernel per edge")
    base = per_edge[0] if per_edge else h
    weights = tuple([base.w_row] * H.n_left + [base.w_col] * H.n_right)
    return FactorGraph(
        weights, tuple(((i, H.n_left + j), k.H) for (i, j), k in zip(H.edges, per_edge))
    )


def hypergraph_factors(G: Hypergraph, g: TensorKernel) -> FactorGraph:
    if g.r != G.r:
        raise ArityMismatch(f"{G.r}-uniform hypergraph against arity-{g.r} kernel")
    return FactorGraph(tuple([g.w] * G.n), tuple((tuple(e), g.values) for e in G.edges))


# ---------------------------------------------------------------------------
# public evaluators


def t_bruteforce(G: Graph, g: StepKernel, budget: int | None = None) -> float:
    return contract_bruteforce(graph_factors(G, g), budget)


def t_dp(G: Graph, g: StepKernel, budget: int | None = None) -> float:
    return contract_dp(graph_factors(G, g), budget)


def t(G: Graph, g: StepKernel, method: str = "dp", budget: int | None = None) -> float:
    return _run(graph_factors(G, g), method, budget)


def composite_weight(fs: Sequence[np.ndarray], e: int) -> np.ndarray:
    """Cellwise (prod_i f_i)^(1/(2e))."""
    prod = np.ones(len(fs[0]))
    for f in fs:
        prod = prod * np.asarray(f, dtype=float)
    return prod ** (1.0 / (2 * e))


def t_weighted(G: Graph, g: StepKernel, fs: Sequence[np.ndarray], method: str = "dp", budget: int | None = None) -> tuple[float, float]:
    """Both sides of the vertex-weighted inequality.

    ``lhs`` integrates the edge product against ``prod_i f_i(x_i)``;
    ``rhs = (f^T D_w A D_w f) ** e(G)`` with ``f`` the composite weight.
    """
    if G.e == 0:
        raise ZeroEdges("vertex-weighted density needs at least one edge")
    if len(fs) != G.n:
        raise ValueError(f"need {G.n} vertex weights, got {len(fs)}")
    for f in fs:
        f = np.asarray(f)
        if f.shape != (g.k,) or np.any(f < 0):
            raise ValueError("vertex weights must be nonnegative k-vectors")
    lhs = _run(graph_factors(G, g, fs), method, budget)
    f = composite_weight(fs, G.e)
    fw = f * g.w
    rhs = float(fw @ g.A @ fw) ** G.e
    return lhs, rhs


def t_bipartite(H: BipartiteGraph, h, method: str = "dp", budget: int | None = None) -> float:
    return _run(bipartite_factors(H, h), method, budget)


def t_hypergraph(G: Hypergraph, g: TensorKernel, method: str = "dp", budget: int | None = None) -> float:
    return _run(hypergraph_factors(G, g), method, budget)


def adjacency_kernel(H: Graph) -> StepKernel:
    A = np.zeros((H.n, H.n))
    for u, v in H.edges:
        A[u, v] = A[v, u] = 1.0
    return from_matrix(A)


def hom_count(G: Graph, H: Graph, budget: int | None = None) -> int:
    """Number of homomorphisms G -> H, by exact backtracking over integers."""
    if H.n ** G.n > get_budget(budget):
        raise BudgetExceeded(f"{H.n}^{G.n} maps exceed budget")
    order, seen = [], set()
    for s in range(G.n):
        if s in seen:
            continue
        seen.add(s)
        queue = [s]
        for u in queue:
            order.append(u)
            for w in sorted(G.adj[u]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    back = [[w for w in G.adj[u] if order.index(w) < i] for i, u in enumerate(order)]
    img = [0] * G.n

    def count(i):
        if i == G.n:
            return 1
        u = order[i]
        total = 0
        for x in range(H.n):
            if all(H.has_edge(x, img[w]) for w in back[i]):
                img[u] = x
                total += count(i + 1)
        return total

    return count(0)


def norm_power(G: Graph, g: StepKernel) -> float:
    """``|g| ** e(G)``, the right-hand side of the basic inequality."""
    return edge_density(g) ** G.e

"""Seeded batch runs of the checkers.

Instance ``i`` of a campaign started at seed ``s`` draws everything from
``numpy.random.default_rng([s + i, salt])``, so results do not depend on
how instances are spread over worker threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import verify as V
from .certifier import EXTRA, GOOD, classify_catalog
from .graphs import (
    Graph,
    bipartite_from_graph,
    complete,
    cycle,
    make_hypergraph,
)
from .kernel import random_kernel, random_weights, rect_kernel

SUITES = ("conjecture", "sidorenko", "extragood", "ms", "awm", "lemma54", "schatten",
          "holder", "sub", "incidence", "symmetrize")

# (tolerance, kind) per suite
TOLERANCES = {
    "conjecture": (1e-9, "relative"),
    "sidorenko": (1e-9, "relative"),
    "extragood": (1e-10, "absolute"),
    "ms": (1e-10, "relative"),
    "awm": (1e-9, "relative"),
    "lemma54": (1e-10, "absolute"),
    "schatten": (1e-10, "absolute"),
    "holder": (1e-9, "relative"),
    "sub": (1e-11, "residual"),
    "incidence": (1e-11, "residual"),
    "symmetrize": (1e-11, "residual"),
}

STRUCTURE_GRAPHS = (complete(2), complete(3), cycle(4), complete(4))
HYPERGRAPHS = (
    make_hypergraph(3, 3, [(0, 1, 2)]),
    make_hypergraph(3, 4, [(0, 1, 2), (0, 1, 3)]),
    make_hypergraph(3, 5, [(0, 1, 2), (0, 3, 4)]),
    make_hypergraph(3, 4, [(0, 1, 2), (0, 1, 3), (0, 2, 3)]),
    make_hypergraph(3, 5, [(0, 1, 2), (0, 1, 3), (2, 3, 4)]),
    make_hypergraph(3, 6, [(0, 1, 2), (2, 3, 4), (4, 5, 0)]),
)


@dataclass(frozen=True)
class CampaignConfig:
    suite: str
    instances: int
    seed: int
    k: int = 5
    catalog_n: int = 5
    threads: int = 1
    tolerance: float | None = None
    weights: str = "mixed"

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.instances < 1 or self.k < 1 or self.threads < 1:
            raise ValueError("instances, k and threads must be positive")
        if self.weights not in ("uniform", "random", "mixed"):
            raise ValueError("weights must be uniform, random or mixed")


@lru_cache(maxsize=None)
def certified_graphs(n: int, status: str | None = None) -> tuple[Graph, ...]:
    rows = classify_catalog(n)
    want = {GOOD, EXTRA} if status is None else {status}
    return tuple(r.graph for r in rows if r.status in want)


def _rng(seed: int, salt: int = 0) -> np.random.Generator:
    return np.random.default_rng([seed, salt])


def _weights(cfg: CampaignConfig, rng) -> str:
    if cfg.weights == "mixed":
        return "random" if rng.random() < 0.5 else "uniform"
    return cfg.weights


def _dnn(cfg: CampaignConfig, rng, kind: str = "DNN"):
    k = int(rng.integers(1, cfg.k + 1))
    rank = int(rng.integers(1, k + 1))
    return random_kernel(kind, k, rank, seed=int(rng.integers(2**62)), weights=_weights(cfg, rng))


def _rect(rng, n: int, m: int, signed: bool = False, weights: str = "uniform"):
    H = rng.normal(0, 1, size=(n, m)) if signed else rng.uniform(0, 1, size=(n, m))
    if weights == "random":
        return rect_kernel(H, random_weights(rng, n), random_weights(rng, m))
    return rect_kernel(H)


def _instance(cfg: CampaignConfig, i: int) -> list[V.MarginRecord]:
    s = cfg.seed + i
    rng = _rng(s)
    suite = cfg.suite
    out: list[V.MarginRecord] = []
    if suite == "conjecture":
        g = _dnn(cfg, rng)
        for G in certified_graphs(cfg.catalog_n):
            out.append(V.check_conjecture(G, g).with_meta(f"k={g.k};{V.graph_label(G)}", s))
    elif suite == "extragood":
        g = _dnn(cfg, rng)
        for G in certified_graphs(cfg.catalog_n, EXTRA):
            fs = [rng.uniform(0, 1, size=g.k) for _ in range(G.n)]
            out.append(V.check_extra_good(G, g, fs).with_meta(f"k={g.k};{V.graph_label(G)}", s))
    elif suite == "sidorenko":
        n, m = (int(x) for x in rng.integers(1, cfg.k + 1, size=2))
        h = _rect(rng, n, m, weights=_weights(cfg, rng))
        for G in certified_graphs(cfg.catalog_n):
            if G.e and G.is_bipartite():
                H = bipartite_from_graph(G)
                out.append(V.check_sidorenko(H, h).with_meta(f"h={n}x{m};{V.graph_label(G)}", s))
    elif suite == "ms":
        k = int(rng.integers(1, cfg.k + 1))
        U = rng.uniform(0, 1, size=(k, k))
        A = np.triu(U) + np.triu(U, 1).T
        z = rng.uniform(0, 1, size=k)
        p = int(rng.integers(1, 7))
        out.append(V.check_mulholland_smith(A, z, p).with_meta(f"k={k};p={p}", s))
    elif suite == "awm":
        n, m = (int(x) for x in rng.integers(1, cfg.k + 1, size=2))
        A = rng.uniform(0, 1, size=(n, m)) * (rng.random((n, m)) < 0.7)
        out.append(V.check_awm(A).with_meta(f"{n}x{m}", s))
    elif suite == "lemma54":
        g = _dnn(cfg, rng)
        out.extend(r.with_meta(f"k={g.k};{r.label}", s) for r in V.check_triangle_lemma(g))
    elif suite == "schatten":
        g = _dnn(cfg, rng)
        rec, _ = V.check_schatten_chain(g, 5)
        out.append(rec.with_meta(f"k={g.k};{rec.label}", s))
    elif suite == "holder":
        for H in (bipartite_from_graph(cycle(4)), bipartite_from_graph(cycle(6))):
            n = int(rng.integers(1, cfg.k + 1))
            fs = [_rect(rng, n, n, signed=True) for _ in range(H.e)]
            out.append(V.check_holder(H, fs).with_meta(f"n={n};C{H.e}", s))
    elif suite == "sub":
        n = int(rng.integers(1, cfg.k + 1))
        h = _rect(rng, n, n, weights=_weights(cfg, rng))
        for G in STRUCTURE_GRAPHS:
            out.append(V.check_sub_identity(G, h).with_meta(f"n={n};{V.graph_label(G)}", s))
    elif suite == "incidence":
        n = int(rng.integers(1, cfg.k + 1))
        h = _rect(rng, n, n, weights=_weights(cfg, rng))
        for G in HYPERGRAPHS:
            out.append(V.check_incidence_identity(G, h).with_meta(f"n={n};{V.graph_label_h(G)}", s))
    elif suite == "symmetrize":
        n = int(rng.integers(1, cfg.k + 1))
        h = _rect(rng, n, n)
        for G in (cycle(4), cycle(6)):
            out.append(V.check_symmetrize(bipartite_from_graph(G), h).with_meta(f"n={n};C{G.n}", s))
    return out


def run_campaign(cfg: CampaignConfig) -> V.VerificationReport:
    """Run ``cfg.instances`` seeded instances; output order is seed order."""
    tol, kind = TOLERANCES[cfg.suite]
    if cfg.tolerance is not None:
        tol = cfg.tolerance
    if cfg.suite in ("conjecture", "extragood", "sidorenko"):
        certified_graphs(cfg.catalog_n)  # warm the cache before threads start
        certified_graphs(cfg.catalog_n, EXTRA)
    idx = range(cfg.instances)
    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as ex:
            parts = list(ex.map(lambda i: _instance(cfg, i), idx))
    else:
        parts = [_instance(cfg, i) for i in idx]
    records = [r for p in parts for r in p]
    notes = []
    if cfg.suite == "holder":
        notes.append("norming graphs: even cycles")
    return V.make_report(cfg.suite, records, tol, kind, (cfg.seed, cfg.seed + cfg.instances - 1), notes)

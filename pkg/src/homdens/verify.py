"""Numerical checkers for the inequalities and identities around good graphs.

Every checker returns a :class:`MarginRecord` (``lhs`` should dominate
``rhs``).  :class:`VerificationReport` aggregates records under one
tolerance, which is either absolute (``margin < -tol``), relative
(``margin < -tol * max(|lhs|, |rhs|)``, equivalently ``ratio < 1 - tol``
when ``lhs < rhs``) or a residual bound for identities
(``|lhs - rhs| > tol * max(|lhs|, |rhs|)``).
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graphs import (
    BipartiteGraph,
    Graph,
    Hypergraph,
    canonical_form,
    cocktail_party,
    complete,
    complete_bipartite,
    incidence,
    make_bipartite,
    subdivision,
)
from .homdensity import (
    norm_power,
    t,
    t_bipartite,
    t_hypergraph,
    t_weighted,
)
from .kernel import (
    RectKernel,
    StepKernel,
    edge_density,
    gram,
    from_matrix,
    rect_density,
    schatten_density,
    symmetrize,
    tensor_from_rect,
)

SCHEMA = "homdens.report/1"
EXACT_K = 20


class TooLarge(ValueError):
    pass


class NotTrusted(ValueError):
    pass


@dataclass(frozen=True)
class MarginRecord:
    lhs: float
    rhs: float
    label: str = ""
    seed: int | None = None
    flags: tuple[str, ...] = ()

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def ratio(self) -> float | None:
        return self.lhs / self.rhs if self.rhs > 0 else None

    @property
    def residual(self) -> float:
        scale = max(abs(self.lhs), abs(self.rhs))
        return abs(self.margin) / scale if scale > 0 else 0.0

    def with_meta(self, label: str | None = None, seed: int | None = None) -> "MarginRecord":
        return MarginRecord(self.lhs, self.rhs, self.label if label is None else label, seed, self.flags)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "seed": self.seed,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "ratio": self.ratio,
            "flags": list(self.flags),
        }


def violates(r: MarginRecord, tol: float, kind: str) -> bool:
    if kind == "absolute":
        return r.margin < -tol
    scale = max(abs(r.lhs), abs(r.rhs))
    if kind == "relative":
        return r.margin < -tol * scale
    if kind == "residual":
        return abs(r.margin) > tol * scale
    raise ValueError(f"unknown tolerance kind {kind!r}")


@dataclass(frozen=True)
class VerificationReport:
    inequality_id: str
    tolerance: float
    tolerance_kind: str
    records: tuple[MarginRecord, ...]
    seed_range: tuple[int, int] | None = None
    notes: tuple[str, ...] = ()

    @property
    def instances_tested(self) -> int:
        return len(self.records)

    @property
    def min_margin(self) -> float | None:
        return min((r.margin for r in self.records), default=None)

    @property
    def min_ratio(self) -> float | None:
        return min((r.ratio for r in self.records if r.ratio is not None), default=None)

    @property
    def max_residual(self) -> float | None:
        return max((r.residual for r in self.records), default=None)

    @property
    def violations(self) -> list[tuple[str, float]]:
        return [(r.label, r.margin) for r in self.records if violates(r, self.tolerance, self.tolerance_kind)]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self, with_records: bool = True) -> dict:
        d = {
            "schema": SCHEMA,
            "inequalityId": self.inequality_id,
            "instancesTested": self.instances_tested,
            "minMargin": self.min_margin,
            "minRatio": self.min_ratio,
            "maxResidual": self.max_residual,
            "tolerance": self.tolerance,
            "toleranceKind": self.tolerance_kind,
            "seedRange": None if self.seed_range is None else list(self.seed_range),
            "violations": [{"instance": a, "margin": m} for a, m in self.violations],
            "notes": list(self.notes),
        }
        if with_records:
            d["records"] = [r.to_dict() for r in self.records]
        return d

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["instance", "seed", "label", "lhs", "rhs", "margin", "ratio"])
        for i, r in enumerate(self.records):
            w.writerow([i, "" if r.seed is None else r.seed, r.label, repr(r.lhs), repr(r.rhs),
                        repr(r.margin), "" if r.ratio is None else repr(r.ratio)])
        return buf.getvalue()


def make_report(inequality_id: str, records: Iterable[MarginRecord], tol: float, kind: str,
                seed_range=None, notes: Sequence[str] = ()) -> VerificationReport:
    return VerificationReport(inequality_id, float(tol), kind, tuple(records),
                              None if seed_range is None else tuple(seed_range), tuple(notes))


def merge_reports(reports: Sequence[VerificationReport]) -> VerificationReport:
    """Concatenate reports of one inequality, ordered by seed."""
    if not reports:
        raise ValueError("nothing to merge")
    first = reports[0]
    for r in reports[1:]:
        if (r.inequality_id, r.tolerance, r.tolerance_kind) != (first.inequality_id, first.tolerance, first.tolerance_kind):
            raise ValueError("reports disagree on inequality or tolerance")
    parts = sorted(reports, key=lambda r: (r.seed_range or (0, 0)))
    recs = tuple(x for r in parts for x in r.records)
    ranges = [r.seed_range for r in parts if r.seed_range is not None]
    sr = (min(a for a, _ in ranges), max(b for _, b in ranges)) if ranges else None
    notes = tuple(dict.fromkeys(n for r in parts for n in r.notes))
    return VerificationReport(first.inequality_id, first.tolerance, first.tolerance_kind, recs, sr, notes)


# ---------------------------------------------------------------------------
# checkers


def graph_label(G: Graph) -> str:
    return f"n={G.n};" + ",".join(f"{u}-{v}" for u, v in G.edges)


def graph_label_h(G: Hypergraph) -> str:
    return f"r={G.r};n={G.n};" + ",".join("-".join(map(str, e)) for e in G.edges)


def check_conjecture(G: Graph, g: StepKernel, method: str = "dp") -> MarginRecord:
    return MarginRecord(t(G, g, method), norm_power(G, g), graph_label(G))


def check_sidorenko(H: BipartiteGraph, h: RectKernel) -> MarginRecord:
    if not h.nonneg:
        raise ValueError("Sidorenko's inequality needs a nonnegative kernel")
    return MarginRecord(t_bipartite(H, h), rect_density(h) ** H.e, f"bip {H.n_left}+{H.n_right}:{list(H.edges)}")


def check_extra_good(G: Graph, g: StepKernel, fs: Sequence[np.ndarray]) -> MarginRecord:
    lhs, rhs = t_weighted(G, g, fs)
    return MarginRecord(lhs, rhs, graph_label(G))


def check_mulholland_smith(A, z, power: int, eig_tol: float = 1e-9) -> MarginRecord:
    """``(z^T A^p z)(z^T z)^(p-1) >= (z^T A z)^p``; flags the equality case."""
    A = np.asarray(A, dtype=float)
    z = np.asarray(z, dtype=float)
    if power < 1:
        raise ValueError("power must be >= 1")
    zz = float(z @ z)
    if zz == 0.0:
        return MarginRecord(0.0, 0.0, "ms p=%d" % power, flags=("equality", "degenerate"))
    lhs = float(z @ np.linalg.matrix_power(A, power) @ z) * zz ** (power - 1)
    q = float(z @ A @ z)
    rhs = q ** power
    lam = q / zz
    eig = np.linalg.norm(A @ z - lam * z) <= eig_tol * math.sqrt(zz)
    return MarginRecord(lhs, rhs, "ms p=%d" % power, flags=("equality", "eigenvector") if eig else ())


def check_awm(A) -> MarginRecord:
    """``nm s(A A^T A) >= s(A)^3`` for a nonnegative n x m matrix."""
    A = np.asarray(A, dtype=float)
    if np.any(A < 0):
        raise ValueError("matrix must be nonnegative")
    n, m = A.shape
    return MarginRecord(n * m * float(np.sum(A @ A.T @ A)), float(np.sum(A)) ** 3, f"awm {n}x{m}")


K222 = cocktail_party(3)
K4_MINUS_E = Graph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3)))


def check_triangle_lemma(g: StepKernel) -> list[MarginRecord]:
    """Four triangle-type bounds for a doubly nonnegative kernel."""
    tk3 = t(complete(3), g)
    tk4e = t(K4_MINUS_E, g)
    t12 = t(complete_bipartite(1, 2), g)
    t22 = t(complete_bipartite(2, 2), g)
    nrm = edge_density(g)
    return [
        MarginRecord(tk3, t12 ** 1.5, "K3 vs K12^(3/2)"),
        MarginRecord(tk4e, t22 ** 1.25, "K4-e vs K22^(5/4)"),
        MarginRecord(tk3, t12 * nrm, "K3-K1 vs K21*|g|"),
        MarginRecord(tk4e, t22 * nrm, "K4-K2 vs K22*|g|"),
    ]


def _regular_degree(degs: Sequence[int]) -> int:
    if not degs or len(set(degs)) != 1 or degs[0] < 1:
        raise ValueError("chosen side is not regular of positive degree")
    return degs[0]


def check_same_degree(H: BipartiteGraph, h: RectKernel, side: str = "left") -> MarginRecord:
    """``t(H,h) >= t(K_{1,a},h)^(e/a)`` when every vertex on ``side`` has degree a.

    The bound relies on H satisfying Sidorenko's inequality, which is not
    checked here; the record carries an ``assumes-sidorenko`` flag.
    """
    if side == "left":
        a = _regular_degree(H.left_degrees())
        star = make_bipartite(1, a, [(0, j) for j in range(a)])
        ts = t_bipartite(star, h)
    elif side == "right":
        a = _regular_degree(H.right_degrees())
        star = make_bipartite(a, 1, [(i, 0) for i in range(a)])
        ts = t_bipartite(star, h)
    else:
        raise ValueError("side must be 'left' or 'right'")
    return MarginRecord(t_bipartite(H, h), ts ** (H.e / a), f"same-degree {side} a={a}", flags=("assumes-sidorenko",))


def check_sub_identity(G: Graph, h: RectKernel) -> MarginRecord:
    """t(G, gram(h)) against t(Sub(G), h); compare with the residual tolerance."""
    return MarginRecord(t(G, gram(h)), t_bipartite(subdivision(G), h), "sub " + graph_label(G))


def check_schatten_chain(g: StepKernel, max_half_length: int = 5) -> tuple[MarginRecord, list[float]]:
    """Even-cycle norms ``t(C_2k)^(1/2k)``, k = 2..max; the record holds the worst step."""
    if max_half_length < 3:
        raise ValueError("need at least two cycle lengths")
    vals = [max(schatten_density(g, 2 * k), 0.0) ** (1.0 / (2 * k)) for k in range(2, max_half_length + 1)]
    worst = min(range(len(vals) - 1), key=lambda i: vals[i] - vals[i + 1])
    return MarginRecord(vals[worst], vals[worst + 1], f"C{2 * worst + 4} vs C{2 * worst + 6}"), vals


def _is_even_cycle(B: BipartiteGraph) -> bool:
    G = B.as_graph()
    return G.n >= 4 and G.is_connected() and all(G.degree(u) == 2 for u in range(G.n))


def _is_sub_k222(B: BipartiteGraph) -> bool:
    G = B.as_graph()
    return G.n == 18 and canonical_form(G) == canonical_form(subdivision(K222).as_graph())


def check_holder(H: BipartiteGraph, fs: Mapping[tuple[int, int], RectKernel] | Sequence[RectKernel],
                 trust_override: bool = False) -> MarginRecord:
    """``prod_e t(H, f_e) >= (mixed density)^e(H)`` for a norming H."""
    if not trust_override and not (_is_even_cycle(H) or _is_sub_k222(H)):
        raise NotTrusted("H is not an even cycle or Sub(K_{2,2,2}); pass trust_override=True")
    if isinstance(fs, Mapping):
        per_edge = [fs[e] for e in H.edges]
    else:
        per_edge = list(fs)
    if len(per_edge) != H.e:
        raise ValueError("need one kernel per edge")
    shapes = {(f.n, f.m) for f in per_edge}
    if len(shapes) != 1:
        raise ValueError("all edge kernels must share cell geometry")
    for f in per_edge[1:]:
        if not (np.array_equal(f.w_row, per_edge[0].w_row) and np.array_equal(f.w_col, per_edge[0].w_col)):
            raise ValueError("all edge kernels must share cell weights")
    lhs = math.prod(t_bipartite(H, f) for f in per_edge)
    rhs = t_bipartite(H, per_edge) ** H.e
    return MarginRecord(lhs, rhs, "holder", flags=("override",) if trust_override else ())


def check_incidence_identity(G: Hypergraph, h: RectKernel) -> MarginRecord:
    """t(G, g) with g built from h against t(Inc(G), h); residual tolerance."""
    g = tensor_from_rect(h, G.r)
    return MarginRecord(t_hypergraph(G, g), t_bipartite(incidence(G), h), f"inc r={G.r}:{list(G.edges)}")


def check_symmetrize(H: BipartiteGraph, h: RectKernel) -> MarginRecord:
    """t(H, symmetrized h) against 2^(1-2n) t(H, h) for connected H with n vertices per side.

    Holds when H has an automorphism swapping its sides (so t(H,h) = t(H,h^T)).
    """
    n = H.n_left
    if H.n_right != n or not H.as_graph().is_connected():
        raise ValueError("H must be connected with equal sides")
    lhs = t(H.as_graph(), symmetrize(h))
    return MarginRecord(lhs, 2.0 ** (1 - 2 * n) * t_bipartite(H, h), "symmetrize")


# ---------------------------------------------------------------------------
# density over the simplex


@dataclass(frozen=True)
class DensityResult:
    value: float
    argmin: np.ndarray
    support: tuple[int, ...]
    kkt_residual: float
    certified: bool = True

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "argmin": [float(x) for x in self.argmin],
            "support": list(self.support),
            "kktResidual": self.kkt_residual,
            "certified": self.certified,
        }


def kkt_residual(A: np.ndarray, x: np.ndarray, support: Sequence[int] | None = None, tol: float = 1e-12) -> float:
    """Largest violation of the simplex KKT conditions at x."""
    v = float(x @ A @ x)
    g = A @ x
    sup = [i for i in range(len(x)) if x[i] > tol] if support is None else list(support)
    r = max(0.0, float(np.max(v - g)))
    if sup:
        r = max(r, float(np.max(np.abs(g[sup] - v))))
    return r


def _simplex_project(y: np.ndarray) -> np.ndarray:
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(y) + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(y - theta, 0.0)


def projected_gradient(A, x0=None, iters: int = 20000, tol: float = 1e-15) -> np.ndarray:
    """Projected gradient descent for min x^T A x on the simplex."""
    A = np.asarray(A, dtype=float)
    k = A.shape[0]
    x = np.full(k, 1.0 / k) if x0 is None else np.asarray(x0, dtype=float).copy()
    L = 2.0 * max(float(np.linalg.norm(A, 2)), 1e-300)
    for _ in range(iters):
        nx = _simplex_project(x - (2.0 * A @ x) / L)
        if np.max(np.abs(nx - x)) <= tol:
            x = nx
            break
        x = nx
    return x


def _polish(A: np.ndarray, sup: Sequence[int]) -> np.ndarray | None:
    s = len(sup)
    M = np.zeros((s + 1, s + 1))
    M[:s, :s] = A[np.ix_(sup, sup)]
    M[:s, s] = -1.0
    M[s, :s] = 1.0
    b = np.zeros(s + 1)
    b[s] = 1.0
    try:
        sol = np.linalg.solve(M, b)
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(M, b, rcond=None)[0]
    x = np.zeros(A.shape[0])
    x[list(sup)] = sol[:s]
    return x


def min_density(g, chunk: int = 4096) -> DensityResult:
    """Minimum of x^T A x over the probability simplex.

    Up to ``EXACT_K`` cells every support is visited and its stationarity
    system ``A_S x = l 1, 1^T x = 1`` is solved (pseudo-inverse, so
    singular supports yield a least-squares candidate whose KKT system is
    checked).  The global minimum is the best feasible candidate; some
    minimal-support minimizer always has a nonsingular system.  Larger
    kernels fall back to projected gradient, reported as not certified.
    """
    A = g.A if isinstance(g, StepKernel) else np.asarray(g, dtype=float)
    k = A.shape[0]
    if k > EXACT_K:
        x = projected_gradient(A)
        sup = tuple(int(i) for i in np.nonzero(x > 1e-12)[0])
        return DensityResult(float(x @ A @ x), x, sup, kkt_residual(A, x), certified=False)
    best = (math.inf, None)
    for s in range(1, k + 1):
        combos = np.array(list(itertools.combinations(range(k), s)), dtype=int)
        for start in range(0, len(combos), chunk):
            S = combos[start:start + chunk]
            N = len(S)
            M = np.zeros((N, s + 1, s + 1))
            M[:, :s, :s] = A[S[:, :, None], S[:, None, :]]
            M[:, :s, s] = -1.0
            M[:, s, :s] = 1.0
            b = np.zeros(s + 1)
            b[s] = 1.0
            sol = np.linalg.pinv(M) @ b
            res = np.abs(np.einsum("nij,nj->ni", M, sol) - b).max(axis=1)
            xs = sol[:, :s]
            ok = (res <= 1e-9) & np.all(xs >= -1e-12, axis=1)
            for i in np.nonzero(ok)[0]:
                x = np.zeros(k)
                x[S[i]] = np.maximum(xs[i], 0.0)
                x /= x.sum()
                v = float(x @ A @ x)
                if v < best[0] - 1e-15 or (abs(v - best[0]) <= 1e-15 and len(S[i]) < len(best[1][1])):
                    best = (v, (x, tuple(int(j) for j in S[i])))
    _, (x, sup) = best
    px = _polish(A, sup)
    if px is not None and np.all(px >= 0) and float(px @ A @ px) <= float(x @ A @ x):
        x = px / px.sum()
    value = float(x @ A @ x)
    return DensityResult(value, x, sup, kkt_residual(A, x, sup))


# ---------------------------------------------------------------------------
# c(A) and the counterexample search


@dataclass(frozen=True)
class CEstimate:
    value: float
    graph: Graph
    norm: float
    density: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "graph": {"n": self.graph.n, "edges": [list(e) for e in self.graph.edges]},
            "norm": self.norm,
            "density": self.density,
            "note": "catalog minimum: an upper bound on the infimum over all graphs",
        }


def c_estimate(g: StepKernel, catalog: Iterable[Graph]) -> CEstimate:
    """Minimum over the catalog of ``t(G,g)^(1/e(G))``."""
    best = None
    for G in catalog:
        if G.e == 0:
            continue
        v = max(t(G, g), 0.0) ** (1.0 / G.e)
        if best is None or v < best[0]:
            best = (v, G)
    if best is None:
        raise ValueError("catalog has no graph with an edge")
    return CEstimate(best[0], best[1], edge_density(g), min_density(g).value)


@dataclass(frozen=True)
class SearchResult:
    best_ratio: float
    kernel: StepKernel
    factor: np.ndarray
    accepted: int
    rejected_negative: int
    final_sigma: float
    candidate: bool

    def to_dict(self) -> dict:
        return {
            "bestRatio": self.best_ratio,
            "candidate": self.candidate,
            "k": self.kernel.k,
            "A": self.kernel.A.tolist(),
            "w": self.kernel.w.tolist(),
            "factor": self.factor.tolist(),
            "accepted": self.accepted,
            "rejectedNegative": self.rejected_negative,
            "finalSigma": self.final_sigma,
        }


def _ratio(G: Graph, A: np.ndarray) -> float:
    g = from_matrix((A + A.T) / 2)
    nrm = edge_density(g)
    return t(G, g) / nrm ** G.e if nrm > 0 else math.inf


def search_counterexample(G: Graph, k: int, rank: int | None = None, iterations: int = 1000, seed: int = 0,
                          sigma: float = 0.3, patience: int = 20, threshold: float = 1e-6) -> SearchResult:
    """Hill-climb over factors B (A = B B^T) to minimize t(G,g)/|g|^e(G).

    Steps multiply B entrywise by ``1 + sigma Z``; steps that make an
    entry of A negative are rejected, and ``sigma`` halves after
    ``patience`` consecutive rejections.  A best ratio below ``1 - threshold``
    flags a candidate for manual audit.
    """
    if G.e == 0:
        raise ValueError("graph needs an edge")
    rank = k if rank is None else rank
    rng = np.random.default_rng(seed)
    while True:
        B = rng.normal(0.5, 1.0, size=(k, rank))
        A = B @ B.T
        if np.all(A >= 0) and A.max() > 0:
            break
    cur = _ratio(G, A)
    accepted = neg = streak = 0
    for _ in range(iterations):
        nb = B * (1.0 + sigma * rng.standard_normal(B.shape))
        nA = nb @ nb.T
        ok = np.all(nA >= 0) and nA.max() > 0
        if ok:
            r = _ratio(G, nA / nA.max())
            ok = r < cur
        else:
            neg += 1
        if ok:
            B, cur = nb / math.sqrt(nA.max()), r
            accepted += 1
            streak = 0
        else:
            streak += 1
            if streak >= patience:
                sigma /= 2
                streak = 0
    A = B @ B.T
    A = (A + A.T) / 2
    g = from_matrix(A)
    return SearchResult(cur, g, B, accepted, neg, sigma, cur < 1 - threshold)

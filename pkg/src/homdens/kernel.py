"""Weighted step kernels on [0,1]^2 and [0,1]^r.

A step kernel is a symmetric nonnegative k x k matrix ``A`` together with a
probability vector ``w`` of cell widths; the kernel takes value ``A[i, j]``
on the product of cells ``i`` and ``j``.  Everything below works with
weighted cells, uniform cells being the special case ``w = 1/k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Literal

import numpy as np
from scipy.optimize import minimize

WEIGHT_TOL = 1e-12
# tensor_power refuses to build more cells than this per side
CELL_BUDGET = 4096


class KernelError(ValueError):
    pass


class Asymmetric(KernelError):
    pass


class NegativeEntry(KernelError):
    pass


class BadWeights(KernelError):
    pass


class NegativeResultEntry(KernelError):
    pass


class NotSquare(KernelError):
    pass


class SizeOverflow(KernelError):
    pass


class BadLength(KernelError):
    pass


class InvalidParameter(KernelError):
    pass


def _weights(w, k: int) -> np.ndarray:
    if w is None:
        return np.full(k, 1.0 / k)
    w = np.asarray(w, dtype=float)
    if w.shape != (k,):
        raise BadWeights(f"expected {k} weights, got shape {w.shape}")
    if np.any(w <= 0):
        raise BadWeights("weights must be strictly positive")
    if abs(w.sum() - 1.0) > WEIGHT_TOL:
        raise BadWeights(f"weights sum to {w.sum()!r}, not 1")
    return w


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StepKernel:
    A: np.ndarray
    w: np.ndarray
    # optional known nonnegative factor: A == factor @ factor.T
    factor: np.ndarray | None = field(default=None, repr=False)

    @property
    def k(self) -> int:
        return self.A.shape[0]

    def operator(self) -> np.ndarray:
        """D_w^{1/2} A D_w^{1/2}; its spectrum is the kernel's spectrum."""
        s = np.sqrt(self.w)
        return s[:, None] * self.A * s[None, :]

    def __eq__(self, other):
        return (
            isinstance(other, StepKernel)
            and np.array_equal(self.A, other.A)
            and np.array_equal(self.w, other.w)
        )

    def __hash__(self):
        return hash((self.A.tobytes(), self.w.tobytes()))


def from_matrix(A, w=None, factor=None) -> StepKernel:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSquare(f"kernel matrix must be square, got shape {A.shape}")
    if not np.array_equal(A, A.T):
        if np.allclose(A, A.T, rtol=0, atol=1e-14 * max(1.0, np.abs(A).max())):
            A = (A + A.T) / 2
        else:
            raise Asymmetric("kernel matrix must be symmetric")
    if np.any(A < 0):
        raise NegativeEntry("kernel matrix has a negative entry")
    w = _weights(w, A.shape[0])
    return StepKernel(_frozen(A), _frozen(w), None if factor is None else _frozen(factor))


def edge_density(g: StepKernel) -> float:
    return float(g.w @ g.A @ g.w)


@dataclass(frozen=True, eq=False)
class RectKernel:
    H: np.ndarray
    w_row: np.ndarray
    w_col: np.ndarray

    @property
    def n(self) -> int:
        return self.H.shape[0]

    @property
    def m(self) -> int:
        return self.H.shape[1]

    @property
    def nonneg(self) -> bool:
        return bool(np.all(self.H >= 0))

    def transpose(self) -> "RectKernel":
        return RectKernel(_frozen(self.H.T), self.w_col, self.w_row)

    def operator(self) -> np.ndarray:
        return np.sqrt(self.w_row)[:, None] * self.H * np.sqrt(self.w_col)[None, :]


def rect_kernel(H, w_row=None, w_col=None) -> RectKernel:
    H = np.asarray(H, dtype=float)
    if H.ndim != 2:
        raise KernelError(f"rect kernel must be a matrix, got shape {H.shape}")
    return RectKernel(_frozen(H), _frozen(_weights(w_row, H.shape[0])), _frozen(_weights(w_col, H.shape[1])))


def rect_density(h: RectKernel) -> float:
    return float(h.w_row @ h.H @ h.w_col)


def as_rect(g: StepKernel) -> RectKernel:
    return RectKernel(g.A, g.w, g.w)


@dataclass(frozen=True, eq=False)
class TensorKernel:
    values: np.ndarray
    w: np.ndarray

    @property
    def r(self) -> int:
        return self.values.ndim

    @property
    def k(self) -> int:
        return self.values.shape[0]


def tensor_kernel(values, w=None) -> TensorKernel:
    values = np.asarray(values, dtype=float)
    k = values.shape[0] if values.ndim else 0
    if values.ndim < 1 or any(s != k for s in values.shape):
        raise KernelError(f"tensor kernel must be a k x ... x k array, got shape {values.shape}")
    if np.any(values < 0):
        raise NegativeEntry("tensor kernel has a negative entry")
    axes = list(range(values.ndim))
    for i in range(values.ndim - 1):
        perm = axes.copy()
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        if not np.allclose(values, values.transpose(perm), rtol=1e-13, atol=0):
            raise Asymmetric("tensor kernel is not symmetric")
    return TensorKernel(_frozen(values), _frozen(_weights(w, k)))


def tensor_from_step(g: StepKernel) -> TensorKernel:
    return TensorKernel(g.A, g.w)


def tensor_from_rect(h: RectKernel, r: int) -> TensorKernel:
    """g(x_1..x_r) = sum_y w_col[y] prod_i H[x_i, y]; cells weighted by ``w_row``."""
    if r < 1:
        raise InvalidParameter("arity must be >= 1")
    letters = "abcdefghijklmnopqrstuvwxyz"[:r]
    spec = ",".join(f"{c}z" for c in letters) + ",z->" + letters
    vals = np.einsum(spec, *([h.H] * r), h.w_col)
    return tensor_kernel(vals, h.w_row)


def gram(h: RectKernel) -> StepKernel:
    """A = H diag(w_col) H^T on cells weighted by ``w_row``."""
    A = (h.H * h.w_col[None, :]) @ h.H.T
    A = (A + A.T) / 2
    neg = A < 0
    if np.any(neg):
        # exact zeros may come out as tiny negatives from cancellation
        scale = (np.abs(h.H) @ (np.abs(h.H) * h.w_col[None, :]).T)
        if np.any(A[neg] < -1e-14 * scale[neg]):
            raise NegativeResultEntry("Gram matrix of a signed factor has a negative entry")
        A = np.where(neg, 0.0, A)
    factor = h.H * np.sqrt(h.w_col)[None, :] if h.nonneg else None
    return from_matrix(A, h.w_row, factor=factor)


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True, eq=False)
class SpectralClassification:
    eigenvalues: np.ndarray
    status: Literal["NotSymmetricNonneg", "SymNonneg", "DoublyNonnegative"]
    cp_status: Literal["CertifiedCP", "Unknown"]
    factor: np.ndarray | None = None
    residual: float | None = None

    @property
    def is_dnn(self) -> bool:
        return self.status == "DoublyNonnegative"


def eigenvalues(g: StepKernel) -> np.ndarray:
    """Spectrum of the kernel operator, sorted descending."""
    return np.linalg.eigvalsh(g.operator())[::-1]


def psd_tolerance(lams: np.ndarray) -> float:
    return 1e-9 * max(1.0, float(np.max(lams)) if lams.size else 1.0)


def classify(g, tol: float | None = None, cp_tol: float = 1e-8, restarts: int = 20, seed: int = 0) -> SpectralClassification:
    """Spectral status of a kernel, plus one-sided completely-positive certification.

    ``tol`` defaults to ``1e-9 * max(1, lambda_max)``.  The CP search never
    concludes that a matrix is not completely positive; failure is Unknown.
    """
    if not isinstance(g, StepKernel):
        A = np.asarray(g, dtype=float)
        sym = A.ndim == 2 and A.shape[0] == A.shape[1] and np.allclose(A, A.T, rtol=0, atol=1e-14)
        if not sym or np.any(A < 0):
            lams = np.linalg.eigvals(A) if A.ndim == 2 and A.shape[0] == A.shape[1] else np.array([])
            return SpectralClassification(np.sort(lams.real)[::-1], "NotSymmetricNonneg", "Unknown")
        g = from_matrix(A)
    lams = eigenvalues(g)
    t = psd_tolerance(lams) if tol is None else tol
    if lams[-1] < -t:
        return SpectralClassification(lams, "SymNonneg", "Unknown")
    B, res = cp_factor(g.A, tol=cp_tol, restarts=restarts, seed=seed, known=g.factor)
    if B is None:
        return SpectralClassification(lams, "DoublyNonnegative", "Unknown", residual=res)
    return SpectralClassification(lams, "DoublyNonnegative", "CertifiedCP", factor=B, residual=res)


def _cp_residual(A, B) -> float:
    return float(np.linalg.norm(A - B @ B.T) / max(1.0, np.linalg.norm(A)))


def cp_factor(A, tol: float = 1e-8, rank: int | None = None, restarts: int = 20, seed: int = 0, known=None):
    """Search for a nonnegative B with A = B B^T.

    Returns ``(B, residual)`` on success and ``(None, best_residual)``
    otherwise; the residual is Frobenius, relative to ``max(1, |A|_F)``.
    """
    A = np.asarray(A, dtype=float)
    k = A.shape[0]
    if known is not None and np.all(known >= 0):
        res = _cp_residual(A, known)
        if res <= tol:
            return np.array(known), res
    if np.count_nonzero(A - np.diag(np.diag(A))) == 0:
        B = np.diag(np.sqrt(np.diag(A)))
        return B, _cp_residual(A, B)
    rank = rank or k * (k + 1) // 2
    rng = np.random.default_rng(seed)
    best = (None, np.inf)
    for _ in range(restarts):
        B = _symnmf(A, rank, rng)
        res = _cp_residual(A, B)
        if res < best[1]:
            best = (B, res)
        if res <= tol:
            return B, res
    return None, best[1]


def _symnmf(A: np.ndarray, rank: int, rng) -> np.ndarray:
    """Bound-constrained quasi-Newton on |B B^T - A|_F^2 over B >= 0."""
    k = A.shape[0]

    def f(x):
        B = x.reshape(k, rank)
        R = B @ B.T - A
        return float(np.sum(R * R)), (4.0 * R @ B).ravel()

    s = np.sqrt(max(float(np.max(np.diag(A))), 1e-300) / rank)
    x0 = rng.uniform(0, 2 * s, size=k * rank)
    res = minimize(
        f, x0, jac=True, method="L-BFGS-B", bounds=[(0, None)] * (k * rank),
        options=dict(maxiter=5000, ftol=0.0, gtol=1e-15, maxcor=30),
    )
    return np.maximum(res.x.reshape(k, rank), 0.0)


def schatten_density(g: StepKernel, length: int) -> float:
    """t(C_length, g) as the power sum of the kernel spectrum."""
    if length < 2:
        raise BadLength(f"cycle length must be >= 2, got {length}")
    return float(np.sum(eigenvalues(g) ** length))


# ---------------------------------------------------------------------------
# constructions


def permutation_kernel(a: int, b: int) -> StepKernel:
    """Symmetric permutation matrix with ``a`` fixed points followed by ``b`` transpositions."""
    if a < 1 or b < 1:
        raise InvalidParameter("permutation kernel needs a >= 1 and b >= 1")
    k = a + 2 * b
    P = np.zeros((k, k))
    for i in range(a):
        P[i, i] = 1.0
    for j in range(b):
        u, v = a + 2 * j, a + 2 * j + 1
        P[u, v] = P[v, u] = 1.0
    return from_matrix(P)


def symmetrize(h: RectKernel) -> StepKernel:
    """Symmetric bipartite kernel [[0, H], [H^T, 0]] on 2n half-weight cells."""
    if h.n != h.m:
        raise NotSquare("symmetrize needs a square kernel")
    if not h.nonneg:
        raise NegativeEntry("symmetrize needs a nonnegative kernel")
    n = h.n
    A = np.zeros((2 * n, 2 * n))
    A[:n, n:] = h.H
    A[n:, :n] = h.H.T
    return from_matrix(A, np.concatenate([h.w_row, h.w_col]) / 2)


def tensor_power(h: RectKernel, N: int, budget: int = CELL_BUDGET) -> RectKernel:
    if N < 1:
        raise InvalidParameter("tensor power needs N >= 1")
    if max(h.n, h.m) ** N > budget:
        raise SizeOverflow(f"{max(h.n, h.m)}^{N} cells exceeds budget {budget}")
    H = reduce(np.kron, [h.H] * N)
    wr = reduce(np.kron, [h.w_row] * N)
    wc = reduce(np.kron, [h.w_col] * N)
    return RectKernel(_frozen(H), _frozen(wr / wr.sum()), _frozen(wc / wc.sum()))


def refine_cell(g: StepKernel, i: int) -> StepKernel:
    """Split cell ``i`` into two halves with duplicated row and column."""
    idx = list(range(g.k)) + [i]
    A = g.A[np.ix_(idx, idx)]
    w = np.append(g.w, g.w[i] / 2)
    w[i] /= 2
    return from_matrix(A, w)


def permute(g: StepKernel, perm) -> StepKernel:
    perm = np.asarray(perm)
    return from_matrix(g.A[np.ix_(perm, perm)], g.w[perm])


# ---------------------------------------------------------------------------
# random instances

Kind = Literal["SymNonneg", "DNN", "CP"]
_KIND_ALIASES = {"symnonneg": "SymNonneg", "symnn": "SymNonneg", "dnn": "DNN", "cp": "CP"}


def random_weights(rng, k: int) -> np.ndarray:
    w = rng.uniform(0.2, 1.0, size=k)
    w /= w.sum()
    # renormalize so the sum is 1 to within the weight tolerance
    w[-1] = 1.0 - w[:-1].sum()
    return w


def random_kernel(kind: str, k: int, rank: int | None = None, seed=0, weights: str = "uniform", max_tries: int = 100000) -> StepKernel:
    """Reproducible random kernel of the given kind, scaled so its largest entry is 1.

    DNN kernels come from acceptance sampling: draw a signed ``k x rank``
    factor B (entries normal with mean 1/2) until ``B B^T`` is entrywise
    nonnegative, which keeps the PSD property exact.  CP kernels use a
    nonnegative factor.  ``weights="random"`` draws nonuniform cell widths.
    """
    kind = _KIND_ALIASES.get(str(kind).lower(), kind)
    if k < 1:
        raise InvalidParameter("k must be >= 1")
    rank = k if rank is None else rank
    if rank < 1:
        raise InvalidParameter("rank must be >= 1")
    rng = np.random.default_rng(seed)
    factor = None
    if kind == "SymNonneg":
        U = rng.uniform(0, 1, size=(k, k))
        A = np.triu(U) + np.triu(U, 1).T
    elif kind == "CP":
        B = rng.uniform(0, 1, size=(k, rank)) ** 2
        A = B @ B.T
        factor = B
    elif kind == "DNN":
        for _ in range(max_tries):
            B = rng.normal(0.5, 1.0, size=(k, rank))
            A = B @ B.T
            if np.all(A >= 0) and A.max() > 0:
                break
        else:
            raise KernelError("DNN acceptance sampling did not succeed")
    else:
        raise InvalidParameter(f"unknown kernel kind {kind!r}")
    A = (A + A.T) / 2
    s = A.max()
    if s > 0:
        A = A / s
        if factor is not None:
            factor = factor / np.sqrt(s)
    w = random_weights(rng, k) if weights == "random" else None
    return from_matrix(A, w, factor=factor)

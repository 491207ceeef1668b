"""Soft-margin support vector classification via sequential dual optimization.

The dual problem is solved by pairwise coordinate steps on the
maximal-violating pair (first-order selection): at each iteration the
most KKT-violating index from the "up" set and the least from the "down"
set move together along the equality-feasible direction until every
violation falls below ``tol``.  Pair selection is deterministic, so fits
are reproducible without randomness.

Rows with dual coefficient above ``sv_threshold`` are the support
vectors; only they are stored.  The bias averages the margin condition
over free support vectors.
"""

from dataclasses import dataclass, field

import numpy as np

from .data import Dataset
from .errors import FitError, PredictError

LINEAR = "linear"
POLYNOMIAL = "polynomial"
RBF = "rbf"


@dataclass(frozen=True)
class Kernel:
    kind: str = LINEAR
    degree: int = 3
    gamma: float = 1.0
    coef0: float = 0.0

    def __post_init__(self):
        if self.kind not in (LINEAR, POLYNOMIAL, RBF):
            raise FitError(f"unknown kernel {self.kind!r}")
        if self.kind == POLYNOMIAL and self.degree < 1:
            raise FitError("polynomial degree must be >= 1")
        if self.kind in (POLYNOMIAL, RBF) and self.gamma <= 0:
            raise FitError("gamma must be positive")

    def matrix(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Gram block K(A, B) of shape (len(A), len(B))."""
        if self.kind == LINEAR:
            return A @ B.T
        if self.kind == POLYNOMIAL:
            return (self.gamma * (A @ B.T) + self.coef0) ** self.degree
        sq = (
            np.sum(A * A, axis=1)[:, None]
            - 2.0 * (A @ B.T)
            + np.sum(B * B, axis=1)[None, :]
        )
        return np.exp(-self.gamma * np.maximum(sq, 0.0))


@dataclass(frozen=True)
class SvcConfig:
    C: float = 1.0
    kernel: Kernel = field(default_factory=Kernel)
    tol: float = 1e-3
    max_iter: int = 100_000
    sv_threshold: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.C <= 0:
            raise FitError("C must be positive")
        if self.tol <= 0:
            raise FitError("tol must be positive")
        if self.sv_threshold <= 0:
            raise FitError("sv_threshold must be positive")


@dataclass(frozen=True)
class SvcModel:
    """Support rows with their signed dual coefficients and the bias."""

    support_rows: np.ndarray  # (n_sv, d)
    dual_coef: np.ndarray  # alpha_i * y_i per support row
    bias: float
    support_row_ids: np.ndarray
    config: SvcConfig
    converged: bool
    n_iter: int

    @property
    def n_support(self) -> int:
        return self.support_rows.shape[0]

    def decision_rows(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.support_rows.shape[1]:
            raise PredictError(
                f"row has dimension {X.shape[1]}, model expects {self.support_rows.shape[1]}"
            )
        if self.n_support == 0:
            return np.full(X.shape[0], self.bias)
        K = self.config.kernel.matrix(X, self.support_rows)
        return K @ self.dual_coef + self.bias

    def predict_rows(self, X: np.ndarray) -> np.ndarray:
        return (self.decision_rows(X) >= 0.0).astype(np.int8)

    def score_rows(self, X: np.ndarray) -> np.ndarray:
        """Margin squashed to (0, 1); monotone in the decision value."""
        return 1.0 / (1.0 + np.exp(-self.decision_rows(X)))


def svc_fit(dataset: Dataset, config: SvcConfig) -> SvcModel:
    """Solve the soft-margin dual on the dataset (labels mapped to -1/+1)."""
    n = dataset.n
    if n == 0:
        raise FitError("cannot fit SVC on an empty dataset")
    if dataset.minority_count == 0 or dataset.majority_count == 0:
        raise FitError("SVC requires both classes present")

    X = dataset.matrix
    y = dataset.labels.astype(np.float64) * 2.0 - 1.0
    C = float(config.C)
    K = config.kernel.matrix(X, X)

    alpha = np.zeros(n)
    u = np.zeros(n)  # u_t = sum_j alpha_j y_j K_tj
    g = y.copy()  # g_i = y_i - u_i

    converged = False
    it = 0
    neg_inf = -np.inf
    pos_inf = np.inf
    for it in range(1, config.max_iter + 1):
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y < 0) & (alpha < C)) | ((y > 0) & (alpha > 0))
        g_up = np.where(up, g, neg_inf)
        g_low = np.where(low, g, pos_inf)
        i = int(np.argmax(g_up))
        j = int(np.argmin(g_low))
        if g_up[i] - g_low[j] <= config.tol:
            converged = True
            it -= 1
            break

        quad = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if quad <= 0.0:
            quad = 1e-12
        step = (g[i] - g[j]) / quad
        # Box limits along the feasible direction (d_i = y_i, d_j = -y_j).
        hi_i = C - alpha[i] if y[i] > 0 else alpha[i]
        hi_j = alpha[j] if y[j] > 0 else C - alpha[j]
        step = min(step, hi_i, hi_j)

        alpha[i] += y[i] * step
        alpha[j] -= y[j] * step
        du = step * (K[:, i] - K[:, j])
        u += du
        g -= du

    sv_mask = alpha > config.sv_threshold
    free_mask = sv_mask & (alpha < C - config.sv_threshold)
    if np.any(free_mask):
        bias = float(np.mean(g[free_mask]))
    else:
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y < 0) & (alpha < C)) | ((y > 0) & (alpha > 0))
        hi = np.max(np.where(up, g, neg_inf))
        lo = np.min(np.where(low, g, pos_inf))
        if not np.isfinite(hi):
            hi = lo
        if not np.isfinite(lo):
            lo = hi
        bias = float((hi + lo) / 2.0)

    return SvcModel(
        support_rows=X[sv_mask].copy(),
        dual_coef=(alpha * y)[sv_mask],
        bias=bias,
        support_row_ids=dataset.row_ids[sv_mask].copy(),
        config=config,
        converged=converged,
        n_iter=it,
    )


def svc_decision(model: SvcModel, row) -> float:
    """Signed margin ``sum_i alpha_i y_i K(x_i, row) + b`` for one row."""
    row = np.asarray(row, dtype=np.float64)
    if row.ndim != 1:
        raise PredictError("svc_decision takes a single row")
    return float(model.decision_rows(row[None, :])[0])


def support_indices(model: SvcModel) -> list:
    """Row ids of the support vectors, ascending."""
    return sorted(int(r) for r in model.support_row_ids)

"""Baseline learners: L2-regularized logistic regression and k-nearest-neighbors.

These exist for benchmark comparison rows; both use minimal fixed
optimizers (full-batch gradient descent, exhaustive neighbor search).
"""

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import FitError, PredictError


@dataclass(frozen=True)
class LogRegConfig:
    learning_rate: float = 0.1
    iterations: int = 500
    l2: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0 or self.iterations < 1 or self.l2 < 0:
            raise FitError("invalid logistic-regression configuration")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logreg_loss_and_grad(weights, bias, X, y, l2):
    """Mean log-loss plus L2 penalty on weights, with its exact gradient.

    The bias is unregularized.  Returns (loss, grad_w, grad_b).
    """
    z = X @ weights + bias
    p = _sigmoid(z)
    eps = 1e-12
    loss = float(
        -np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps))
        + 0.5 * l2 * np.sum(weights**2)
    )
    err = p - y
    grad_w = X.T @ err / X.shape[0] + l2 * weights
    grad_b = float(np.mean(err))
    return loss, grad_w, grad_b


@dataclass(frozen=True)
class LogRegModel:
    weights: np.ndarray
    bias: float
    config: LogRegConfig

    def score_rows(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.weights.size:
            raise PredictError(
                f"row has dimension {X.shape[1]}, model expects {self.weights.size}"
            )
        return _sigmoid(X @ self.weights + self.bias)

    def predict_rows(self, X: np.ndarray) -> np.ndarray:
        return (self.score_rows(X) >= 0.5).astype(np.int8)


def logreg_fit(dataset: Dataset, config: LogRegConfig | None = None) -> LogRegModel:
    """Full-batch gradient descent from zero initialization, fixed step count."""
    config = config or LogRegConfig()
    if dataset.n == 0:
        raise FitError("cannot fit logistic regression on an empty dataset")
    X = dataset.matrix
    y = dataset.labels.astype(np.float64)
    w = np.zeros(dataset.dim)
    b = 0.0
    for _ in range(config.iterations):
        _, gw, gb = logreg_loss_and_grad(w, b, X, y, config.l2)
        w = w - config.learning_rate * gw
        b = b - config.learning_rate * gb
    if not np.all(np.isfinite(w)) or not np.isfinite(b):
        raise FitError("logistic regression diverged to non-finite weights")
    return LogRegModel(weights=w, bias=b, config=config)


def logreg_score(model: LogRegModel, row) -> float:
    row = np.asarray(row, dtype=np.float64)
    if row.ndim != 1:
        raise PredictError("logreg_score takes a single row")
    return float(model.score_rows(row[None, :])[0])


@dataclass(frozen=True)
class KnnConfig:
    k: int = 5

    def __post_init__(self):
        if self.k < 1:
            raise FitError("k must be >= 1")


@dataclass(frozen=True)
class KnnModel:
    """Stored training data queried by Euclidean distance."""

    matrix: np.ndarray
    labels: np.ndarray
    row_ids: np.ndarray
    config: KnnConfig

    def score_rows(self, X: np.ndarray) -> np.ndarray:
        """Minority fraction among the k nearest neighbors of each row.

        Distance ties break toward the lower row id.
        """
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.matrix.shape[1]:
            raise PredictError(
                f"row has dimension {X.shape[1]}, model expects {self.matrix.shape[1]}"
            )
        k = self.config.k
        d2 = (
            np.sum(X * X, axis=1)[:, None]
            - 2.0 * (X @ self.matrix.T)
            + np.sum(self.matrix * self.matrix, axis=1)[None, :]
        )
        out = np.empty(X.shape[0])
        for i in range(X.shape[0]):
            order = np.lexsort((self.row_ids, d2[i]))
            out[i] = float(np.mean(self.labels[order[:k]]))
        return out

    def predict_rows(self, X: np.ndarray) -> np.ndarray:
        return (self.score_rows(X) >= 0.5).astype(np.int8)


def knn_fit(dataset: Dataset, config: KnnConfig | None = None) -> KnnModel:
    config = config or KnnConfig()
    if config.k > dataset.n:
        raise FitError(f"k={config.k} exceeds dataset size {dataset.n}")
    return KnnModel(
        matrix=dataset.matrix,
        labels=dataset.labels.copy(),
        row_ids=dataset.row_ids.copy(),
        config=config,
    )


def knn_predict(model: KnnModel, row) -> tuple[int, float]:
    """Majority vote of the k nearest training rows; returns (label, minority fraction)."""
    row = np.asarray(row, dtype=np.float64)
    if row.ndim != 1:
        raise PredictError("knn_predict takes a single row")
    frac = float(model.score_rows(row[None, :])[0])
    return int(frac >= 0.5), frac

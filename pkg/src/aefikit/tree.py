"""Weighted CART decision trees for binary classification.

Trees consume the encoded numeric matrix only; one-hot columns naturally
split at 0.5.  Splits maximize weighted impurity decrease (gini by
default, information gain selectable).  Ties break to the lowest feature
index, then the lowest threshold, so fits are fully deterministic.  When
``feature_subsample`` is nonzero each node considers a fresh seeded
random subset of features, which is what forests build on.
"""

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import FitError, MetricError, PredictError
from .seeding import rng_from

GINI = "gini"
INFO_GAIN = "info_gain"


def gini(class_weights) -> float:
    """Gini impurity ``1 - sum(p_c^2)`` of a (majority, minority) weight pair."""
    w0, w1 = float(class_weights[0]), float(class_weights[1])
    if w0 < 0 or w1 < 0:
        raise MetricError("class weights must be nonnegative")
    total = w0 + w1
    if total == 0:
        raise MetricError("impurity undefined: both class weights are zero")
    p0, p1 = w0 / total, w1 / total
    return 1.0 - p0 * p0 - p1 * p1


def entropy(class_weights) -> float:
    """Binary entropy (bits) of a (majority, minority) weight pair."""
    w0, w1 = float(class_weights[0]), float(class_weights[1])
    if w0 < 0 or w1 < 0:
        raise MetricError("class weights must be nonnegative")
    total = w0 + w1
    if total == 0:
        raise MetricError("impurity undefined: both class weights are zero")
    out = 0.0
    for w in (w0, w1):
        p = w / total
        if p > 0.0:
            out -= p * np.log2(p)
    return float(out)


def _impurity_arrays(w0, w1, criterion):
    """Vectorized impurity of per-candidate class-weight arrays; 0 where weightless."""
    total = w0 + w1
    safe = np.where(total > 0, total, 1.0)
    p0 = w0 / safe
    p1 = w1 / safe
    if criterion == GINI:
        imp = 1.0 - p0 * p0 - p1 * p1
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            imp = -np.where(p0 > 0, p0 * np.log2(p0, where=p0 > 0), 0.0) - np.where(
                p1 > 0, p1 * np.log2(p1, where=p1 > 0), 0.0
            )
    return np.where(total > 0, imp, 0.0)


@dataclass(frozen=True)
class CartConfig:
    max_depth: int = 0  # 0 = unbounded
    min_samples_leaf: int = 1
    criterion: str = GINI
    feature_subsample: int = 0  # features considered per node; 0 = all
    seed: int = 0

    def __post_init__(self):
        if self.max_depth < 0:
            raise FitError("max_depth must be >= 0")
        if self.min_samples_leaf < 1:
            raise FitError("min_samples_leaf must be >= 1")
        if self.criterion not in (GINI, INFO_GAIN):
            raise FitError(f"unknown criterion {self.criterion!r}")
        if self.feature_subsample < 0:
            raise FitError("feature_subsample must be >= 0")


class CartTree:
    """A fitted tree stored as parallel node arrays.

    ``feature[i] == -1`` marks a leaf; internal nodes route rows with
    ``x[feature] <= threshold`` to ``left`` and the rest to ``right``.
    ``probs[i]`` is the weighted (majority, minority) class fraction at
    the node.
    """

    def __init__(self, feature, threshold, left, right, probs, dim, config):
        self.feature = np.asarray(feature, dtype=np.int32)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int32)
        self.right = np.asarray(right, dtype=np.int32)
        self.probs = np.asarray(probs, dtype=np.float64)
        self.dim = int(dim)
        self.config = config

    @property
    def n_nodes(self) -> int:
        return self.feature.size

    def depth(self) -> int:
        depths = np.zeros(self.n_nodes, dtype=int)
        for i in range(self.n_nodes):
            if self.feature[i] >= 0:
                depths[self.left[i]] = depths[i] + 1
                depths[self.right[i]] = depths[i] + 1
        return int(depths.max()) if self.n_nodes else 0

    def _check_dim(self, X: np.ndarray):
        if X.shape[-1] != self.dim:
            raise PredictError(f"row has dimension {X.shape[-1]}, tree expects {self.dim}")

    def leaf_indices(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        self._check_dim(X)
        node = np.zeros(X.shape[0], dtype=np.int32)
        while True:
            feats = self.feature[node]
            active = np.flatnonzero(feats >= 0)
            if active.size == 0:
                return node
            cur = node[active]
            go_right = X[active, self.feature[cur]] > self.threshold[cur]
            node[active] = np.where(go_right, self.right[cur], self.left[cur])

    def score_rows(self, X: np.ndarray) -> np.ndarray:
        """Minority-class probability for each row."""
        return self.probs[self.leaf_indices(X), 1]

    def predict_rows(self, X: np.ndarray) -> np.ndarray:
        return (self.score_rows(X) >= 0.5).astype(np.int8)


def cart_predict(tree: CartTree, row) -> tuple[int, float]:
    """Route one row to its leaf; returns (label, minority probability)."""
    row = np.asarray(row, dtype=np.float64)
    if row.ndim != 1:
        raise PredictError("cart_predict takes a single row")
    p1 = float(tree.score_rows(row[None, :])[0])
    return int(p1 >= 0.5), p1


class _TreeBuilder:
    def __init__(self, X, y, w, config: CartConfig):
        self.X = X
        self.y = y
        self.w = w
        self.config = config
        self.rng = rng_from(config.seed, "cart")
        self.d = X.shape[1]
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.probs: list[tuple[float, float]] = []

    def _node_features(self) -> np.ndarray:
        m = self.config.feature_subsample
        if m <= 0 or m >= self.d:
            return np.arange(self.d)
        return np.sort(self.rng.choice(self.d, size=m, replace=False))

    def _best_split(self, idx: np.ndarray):
        X, y, w = self.X, self.y, self.w
        min_leaf = self.config.min_samples_leaf
        n = idx.size
        wi = w[idx]
        yi = y[idx]
        w1_total = float(np.sum(wi * yi))
        w_total = float(np.sum(wi))
        w0_total = w_total - w1_total
        parent_imp = _impurity_arrays(
            np.array([w0_total]), np.array([w1_total]), self.config.criterion
        )[0]
        if parent_imp <= 0.0:
            return None

        best_gain = 1e-12  # require strictly positive gain beyond float noise
        best = None
        for f in self._node_features():
            xv = X[idx, f]
            order = np.argsort(xv, kind="mergesort")
            xs = xv[order]
            ws = wi[order]
            ys = yi[order]
            w1_cum = np.cumsum(ws * ys)
            w_cum = np.cumsum(ws)

            cut = np.flatnonzero(xs[:-1] < xs[1:])  # split after position i
            if min_leaf > 1:
                cut = cut[(cut + 1 >= min_leaf) & (n - cut - 1 >= min_leaf)]
            if cut.size == 0:
                continue

            wl = w_cum[cut]
            wl1 = w1_cum[cut]
            wl0 = wl - wl1
            wr1 = w1_total - wl1
            wr0 = w0_total - wl0
            child = (
                wl * _impurity_arrays(wl0, wl1, self.config.criterion)
                + (w_total - wl) * _impurity_arrays(wr0, wr1, self.config.criterion)
            ) / w_total
            gains = parent_imp - child
            k = int(np.argmax(gains))
            if gains[k] > best_gain:
                best_gain = float(gains[k])
                thr = (xs[cut[k]] + xs[cut[k] + 1]) / 2.0
                best = (int(f), float(thr))
        return best

    def build(self, idx: np.ndarray, depth: int, parent_probs=(0.5, 0.5)) -> int:
        wi = self.w[idx]
        w1 = float(np.sum(wi * self.y[idx]))
        w_total = float(np.sum(wi))
        node_id = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        if w_total > 0:
            probs = ((w_total - w1) / w_total, w1 / w_total)
        else:
            probs = parent_probs  # weightless subtree: keep the parent's distribution
        self.probs.append(probs)

        bounded = self.config.max_depth > 0
        if idx.size < 2 * self.config.min_samples_leaf or (bounded and depth >= self.config.max_depth):
            return node_id
        split = self._best_split(idx)
        if split is None:
            return node_id
        f, thr = split
        go_left = self.X[idx, f] <= thr
        self.feature[node_id] = f
        self.threshold[node_id] = thr
        self.left[node_id] = self.build(idx[go_left], depth + 1, probs)
        self.right[node_id] = self.build(idx[~go_left], depth + 1, probs)
        return node_id


def cart_fit(dataset: Dataset, sample_weights=None, config: CartConfig | None = None) -> CartTree:
    """Grow a greedy best-split tree under weighted impurity decrease."""
    config = config or CartConfig()
    if dataset.n == 0:
        raise FitError("cannot fit a tree on an empty dataset")
    if sample_weights is None:
        w = np.full(dataset.n, 1.0 / dataset.n)
    else:
        w = np.asarray(sample_weights, dtype=np.float64)
        if w.shape != (dataset.n,):
            raise FitError("sample_weights length must match the dataset")
        if np.any(w < 0):
            raise FitError("sample_weights must be nonnegative")
        if float(np.sum(w)) <= 0.0:
            raise FitError("sample_weights must have positive total mass")
    if config.feature_subsample > dataset.dim:
        raise FitError(
            f"feature_subsample {config.feature_subsample} exceeds dimension {dataset.dim}"
        )

    builder = _TreeBuilder(dataset.matrix, dataset.labels.astype(np.float64), w, config)
    builder.build(np.arange(dataset.n), 0)
    return CartTree(
        feature=builder.feature,
        threshold=builder.threshold,
        left=builder.left,
        right=builder.right,
        probs=builder.probs,
        dim=dataset.dim,
        config=config,
    )

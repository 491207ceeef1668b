"""Boosting and forest ensembles for imbalanced binary classification.

The boosting core is a binary specialization of the pseudo-loss
formulation: weak learners emit class probabilities ``h(x, y)`` with
``h(x, 1) + h(x, 0) = 1``, the per-round pseudo-loss is

    eps_t = 1/2 * sum_i D_t(i) * (1 - h_t(x_i, y_i) + h_t(x_i, y_bar_i)),

``alpha_t = eps_t / (1 - eps_t)``, and weights update as
``D_{t+1}(i) ~ D_t(i) * alpha_t ** ((1 + h_t(x_i,y_i) - h_t(x_i,y_bar_i)) / 2)``
before renormalizing.  Undersampling variants train each round's weak
learner on a class-rebalanced subset while the pseudo-loss and the
weight update always run over the full dataset.

Plain adaptive boosting is the special case where the per-round
undersample is disabled, so the two share one code path and are
stage-identical under a shared seed.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .data import Dataset
from .errors import FitError, InputError, PredictError, SamplingError
from .seeding import derive_seed, rng_from
from .svm import SvcConfig, SvcModel, support_indices, svc_fit
from .tree import CartConfig, CartTree, cart_fit

EPS_CLAMP = 1e-10


@dataclass(frozen=True)
class BoostConfig:
    rounds: int = 30
    base: CartConfig = field(default_factory=lambda: CartConfig(max_depth=3))
    init_distribution: tuple | None = None  # None = uniform
    rus_minority_fraction: float = 0.5  # 1 disables undersampling
    max_retries_per_round: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.rounds < 1:
            raise FitError("rounds must be >= 1")
        if not 0.0 < self.rus_minority_fraction <= 1.0:
            raise FitError("rus_minority_fraction must lie in (0, 1]")
        if self.max_retries_per_round < 0:
            raise FitError("max_retries_per_round must be >= 0")


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 50
    feature_subsample: int = 0  # features per split; 0 = all
    balanced: bool = False
    per_class_size: int = 0  # balanced mode bootstrap size per class; 0 = minority count
    seed: int = 0
    identity_bootstrap: bool = False  # test hook: skip resampling entirely

    def __post_init__(self):
        if self.n_trees < 1:
            raise FitError("n_trees must be >= 1")
        if self.feature_subsample < 0 or self.per_class_size < 0:
            raise FitError("negative forest sizes are invalid")


@dataclass(frozen=True)
class EasyConfig:
    subsets: int = 10
    rounds_per_subset: int = 10
    base: CartConfig = field(default_factory=lambda: CartConfig(max_depth=3))
    seed: int = 0

    def __post_init__(self):
        if self.subsets < 1 or self.rounds_per_subset < 1:
            raise FitError("subsets and rounds_per_subset must be >= 1")


@dataclass(frozen=True)
class SeededRusConfig:
    svc: SvcConfig = field(default_factory=SvcConfig)
    beta: float = 2.0
    boost: BoostConfig = field(default_factory=BoostConfig)

    def __post_init__(self):
        if self.beta < 1.0:
            raise FitError("beta must be >= 1")


class BoostedModel:
    """Stages of (weak tree, stage weight ln(1/alpha)) plus the weight history."""

    def __init__(self, stages, distributions, row_ids, config, rounds_completed):
        self.stages = list(stages)
        self.distributions = [np.asarray(d, dtype=np.float64) for d in distributions]
        for d in self.distributions:
            d.setflags(write=False)
        self.row_ids = np.asarray(row_ids, dtype=np.int64)
        self.config = config
        self.rounds_completed = int(rounds_completed)

    @property
    def final_distribution(self) -> np.ndarray:
        return self.distributions[-1]

    @property
    def max_distribution(self) -> np.ndarray:
        return np.max(np.stack(self.distributions), axis=0)

    @property
    def stage_weights(self) -> np.ndarray:
        return np.array([w for _, w in self.stages])

    def score_rows(self, X: np.ndarray) -> np.ndarray:
        """Stage-weight-normalized minority confidence in [0, 1]."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        total = np.zeros(X.shape[0])
        weight_sum = 0.0
        for tree, w in self.stages:
            total += w * tree.score_rows(X)
            weight_sum += w
        return total / weight_sum

    def signed_score_rows(self, X: np.ndarray) -> np.ndarray:
        """Unnormalized margin: sum_t w_t * h_t(x, 1) - (sum_t w_t) / 2."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        total = np.zeros(X.shape[0])
        weight_sum = 0.0
        for tree, w in self.stages:
            total += w * tree.score_rows(X)
            weight_sum += w
        return total - weight_sum / 2.0

    def predict_rows(self, X: np.ndarray) -> np.ndarray:
        return (self.score_rows(X) >= 0.5).astype(np.int8)


class ForestModel:
    def __init__(self, trees, config):
        self.trees = list(trees)
        self.config = config

    def score_rows(self, X: np.ndarray) -> np.ndarray:
        """Fraction of trees voting minority."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        votes = np.zeros(X.shape[0])
        for tree in self.trees:
            votes += tree.score_rows(X) >= 0.5
        return votes / len(self.trees)

    def predict_rows(self, X: np.ndarray) -> np.ndarray:
        return (self.score_rows(X) >= 0.5).astype(np.int8)


class EasyModel:
    """Independent boosted committees over balanced subsets, combined additively."""

    def __init__(self, members, config):
        self.members = list(members)
        self.config = config

    def signed_score_rows(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        total = np.zeros(X.shape[0])
        for member in self.members:
            total += member.signed_score_rows(X)
        return total

    def score_rows(self, X: np.ndarray) -> np.ndarray:
        """Combined signed score squashed to (0, 1)."""
        return 1.0 / (1.0 + np.exp(-self.signed_score_rows(X)))

    def predict_rows(self, X: np.ndarray) -> np.ndarray:
        return (self.signed_score_rows(X) >= 0.0).astype(np.int8)


@dataclass(frozen=True)
class SeedReport:
    """How the support-vector pre-pass shaped the initial boosting weights."""

    support_ids: tuple
    beta: float
    n_support: int


def rus(dataset: Dataset, distribution, minority_fraction: float, rng) -> tuple[Dataset, np.ndarray]:
    """Randomly drop majority rows until the minority share reaches the target.

    All minority rows are retained; removal is uniform without
    replacement.  The returned distribution is the input restricted to
    the kept rows, renormalized.  A dataset already at or above the
    target fraction is returned unchanged.
    """
    distribution = np.asarray(distribution, dtype=np.float64)
    minority = np.flatnonzero(dataset.labels == 1)
    majority = np.flatnonzero(dataset.labels == 0)
    if minority.size == 0:
        raise SamplingError("undersampling requires at least one minority row")
    if minority_fraction >= 1.0:
        return dataset, distribution
    keep_majority = int(math.floor(minority.size * (1.0 - minority_fraction) / minority_fraction))
    if majority.size <= keep_majority:
        return dataset, distribution

    chosen = rng.choice(majority, size=keep_majority, replace=False)
    kept = np.sort(np.concatenate([minority, chosen]))
    sub_dist = distribution[kept]
    total = float(np.sum(sub_dist))
    if total <= 0.0:
        raise SamplingError("undersampled rows carry zero total weight")
    return dataset.subset(kept), sub_dist / total


def _default_weak_fitter(base: CartConfig):
    def fit(subset: Dataset, weights: np.ndarray, seed: int) -> CartTree:
        return cart_fit(subset, weights, replace(base, seed=seed))

    return fit


def _initial_distribution(dataset: Dataset, config: BoostConfig, init) -> np.ndarray:
    if init is None:
        init = config.init_distribution
    if init is None:
        return np.full(dataset.n, 1.0 / dataset.n)
    d = np.asarray(init, dtype=np.float64)
    if d.shape != (dataset.n,):
        raise FitError("initial distribution length must match the dataset")
    if np.any(d < 0):
        raise FitError("initial distribution must be nonnegative")
    total = float(np.sum(d))
    if abs(total - 1.0) > 1e-12:
        raise FitError("initial distribution must sum to 1 within 1e-12")
    # Accepted as-is: renormalizing here would perturb an already-valid
    # distribution by an ulp and break exact-identity guarantees.
    return d.copy()


def rusboost_fit(
    dataset: Dataset,
    config: BoostConfig | None = None,
    init=None,
    weak_fitter=None,
) -> BoostedModel:
    """Boost with a fresh undersample per round.

    Each round's weak learner trains on ``rus(dataset, D_t)`` while the
    pseudo-loss and the weight update run over the full dataset.  Rounds
    whose pseudo-loss reaches 1/2 are retried with a fresh undersample up
    to ``max_retries_per_round`` times, after which training stops early.
    A pseudo-loss at or below 1e-10 is clamped there and ends training
    after its stage is recorded.
    """
    config = config or BoostConfig()
    if dataset.minority_count == 0 or dataset.majority_count == 0:
        raise FitError("boosting requires both classes present")
    if weak_fitter is None:
        weak_fitter = _default_weak_fitter(config.base)

    y_is_minority = dataset.labels == 1
    D = _initial_distribution(dataset, config, init)
    rng = rng_from(config.seed, "boost")

    stages = []
    distributions = [D.copy()]
    for _ in range(config.rounds):
        accepted = None
        for _attempt in range(config.max_retries_per_round + 1):
            subset, sub_dist = rus(dataset, D, config.rus_minority_fraction, rng)
            tree_seed = int(rng.integers(np.iinfo(np.int64).max))
            tree = weak_fitter(subset, sub_dist, tree_seed)
            h_minority = tree.score_rows(dataset.matrix)
            h_true = np.where(y_is_minority, h_minority, 1.0 - h_minority)
            h_wrong = 1.0 - h_true
            eps = 0.5 * float(np.sum(D * (1.0 - h_true + h_wrong)))
            if eps < 0.5:
                accepted = (tree, h_true, h_wrong, eps)
                break
        if accepted is None:
            break

        tree, h_true, h_wrong, eps = accepted
        clamped = eps <= EPS_CLAMP
        if clamped:
            eps = EPS_CLAMP
        alpha = eps / (1.0 - eps)
        stage_weight = math.log(1.0 / alpha)
        stages.append((tree, stage_weight))

        D = D * alpha ** (0.5 * (1.0 + h_true - h_wrong))
        total = float(np.sum(D))
        if total <= 0.0:
            raise FitError("boosting weights collapsed to zero")
        D = D / total
        distributions.append(D.copy())
        if clamped:
            break

    if not stages:
        raise FitError("no boosting round achieved pseudo-loss below 1/2")
    return BoostedModel(
        stages=stages,
        distributions=distributions,
        row_ids=dataset.row_ids,
        config=config,
        rounds_completed=len(stages),
    )


def adaboost_fit(
    dataset: Dataset,
    config: BoostConfig | None = None,
    init=None,
    weak_fitter=None,
) -> BoostedModel:
    """Plain adaptive boosting: the undersampling step is disabled."""
    config = config or BoostConfig()
    return rusboost_fit(
        dataset,
        replace(config, rus_minority_fraction=1.0),
        init=init,
        weak_fitter=weak_fitter,
    )


def easy_ensemble_fit(dataset: Dataset, config: EasyConfig | None = None) -> EasyModel:
    """Boost one committee per balanced subset and combine their margins.

    Each subset keeps every minority row plus an equal number of majority
    rows drawn without replacement under a member-derived seed, so
    members can be fit concurrently with sequential-identical results.
    """
    config = config or EasyConfig()
    if dataset.minority_count == 0 or dataset.majority_count == 0:
        raise FitError("ensemble requires both classes present")
    minority = np.flatnonzero(dataset.labels == 1)
    majority = np.flatnonzero(dataset.labels == 0)
    take = min(minority.size, majority.size)

    members = []
    for t in range(config.subsets):
        member_seed = derive_seed(config.seed, "easy", t)
        rng = rng_from(member_seed, "subset")
        chosen = rng.choice(majority, size=take, replace=False)
        idx = np.sort(np.concatenate([minority, chosen]))
        member = adaboost_fit(
            dataset.subset(idx),
            BoostConfig(
                rounds=config.rounds_per_subset,
                base=config.base,
                rus_minority_fraction=1.0,
                seed=derive_seed(member_seed, "boost"),
            ),
        )
        members.append(member)
    return EasyModel(members=members, config=config)


def _forest_fit(dataset: Dataset, config: ForestConfig) -> ForestModel:
    if dataset.n == 0:
        raise FitError("cannot fit a forest on an empty dataset")
    if config.balanced and (dataset.minority_count == 0 or dataset.majority_count == 0):
        raise FitError("balanced forest requires both classes present")

    minority = np.flatnonzero(dataset.labels == 1)
    majority = np.flatnonzero(dataset.labels == 0)
    per_class = config.per_class_size or minority.size

    trees = []
    for t in range(config.n_trees):
        tree_seed = derive_seed(config.seed, "forest", t)
        rng = rng_from(tree_seed, "bootstrap")
        if config.identity_bootstrap:
            idx = np.arange(dataset.n)
        elif config.balanced:
            idx = np.concatenate([
                rng.choice(minority, size=per_class, replace=True),
                rng.choice(majority, size=per_class, replace=True),
            ])
        else:
            idx = rng.integers(0, dataset.n, size=dataset.n)
        sample = dataset.subset(idx)
        trees.append(
            cart_fit(
                sample,
                np.full(sample.n, 1.0 / sample.n),
                CartConfig(
                    max_depth=0,
                    min_samples_leaf=1,
                    feature_subsample=min(config.feature_subsample, dataset.dim),
                    seed=derive_seed(tree_seed, "tree"),
                ),
            )
        )
    return ForestModel(trees=trees, config=config)


def random_forest_fit(dataset: Dataset, config: ForestConfig | None = None) -> ForestModel:
    """Bootstrap forest of unpruned trees; score is the minority vote fraction."""
    config = config or ForestConfig()
    if config.balanced:
        raise FitError("use brf_fit for balanced forests")
    return _forest_fit(dataset, config)


def brf_fit(dataset: Dataset, config: ForestConfig | None = None) -> ForestModel:
    """Balanced forest: each tree trains on equal-size per-class bootstraps."""
    config = config or ForestConfig(balanced=True)
    if not config.balanced:
        raise FitError("brf_fit requires a balanced ForestConfig")
    return _forest_fit(dataset, config)


def svc_seeded_rusboost_fit(
    dataset: Dataset, config: SeededRusConfig | None = None
) -> tuple[BoostedModel, SeedReport]:
    """Upweight the SVC support vectors, then boost with undersampling.

    The initial distribution gives each support-vector row ``beta`` times
    the weight of any other row before normalization.
    """
    config = config or SeededRusConfig()
    svc_model = svc_fit(dataset, config.svc)
    support = support_indices(svc_model)

    is_support = np.isin(dataset.row_ids, np.asarray(support, dtype=np.int64))
    weights = np.where(is_support, config.beta, 1.0)
    init = weights / float(np.sum(weights))

    model = rusboost_fit(dataset, config.boost, init=init)
    report = SeedReport(
        support_ids=tuple(support),
        beta=config.beta,
        n_support=len(support),
    )
    return model, report


def predict_score(model, row) -> float:
    """Minority-class score in [0, 1] for any fitted model."""
    row = np.asarray(row, dtype=np.float64)
    if row.ndim != 1:
        raise PredictError("predict_score takes a single row")
    return float(model.score_rows(row[None, :])[0])


def predict_label(model, row, threshold: float = 0.5) -> int:
    """Score thresholded at ``threshold`` (inclusive)."""
    if not 0.0 <= threshold <= 1.0:
        raise InputError("threshold must lie in [0, 1]")
    return int(predict_score(model, row) >= threshold)

"""Combined grid + random hyperparameter search with cross-validated AUC.

Finite parameter domains are enumerated exhaustively; range domains are
sampled (uniformly, or log-uniformly where declared) a fixed number of
times, and the two sets are crossed.  Every candidate is scored by
stratified k-fold cross-validation with rank AUC as the objective; the
leaderboard is sorted by mean AUC with ties kept in candidate order.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset
from .errors import SearchError, SplitError
from .metrics import auc
from .seeding import derive_seed, rng_from

FINITE = "finite"
INT_RANGE = "int_range"
REAL_RANGE = "real_range"
LOG_REAL_RANGE = "log_real_range"


@dataclass(frozen=True)
class ParamDomain:
    name: str
    kind: str
    values: tuple = ()
    lo: float = 0.0
    hi: float = 0.0

    def __post_init__(self):
        if self.kind == FINITE:
            if not self.values:
                raise SearchError(f"finite domain {self.name!r} needs at least one value")
        elif self.kind in (INT_RANGE, REAL_RANGE, LOG_REAL_RANGE):
            if not self.lo < self.hi:
                raise SearchError(f"domain {self.name!r} requires lo < hi")
            if self.kind == LOG_REAL_RANGE and self.lo <= 0:
                raise SearchError(f"log domain {self.name!r} requires positive bounds")
        else:
            raise SearchError(f"unknown domain kind {self.kind!r}")

    def draw(self, rng) -> object:
        if self.kind == INT_RANGE:
            return int(rng.integers(int(self.lo), int(self.hi) + 1))
        if self.kind == REAL_RANGE:
            return float(rng.uniform(self.lo, self.hi))
        if self.kind == LOG_REAL_RANGE:
            return float(10.0 ** rng.uniform(np.log10(self.lo), np.log10(self.hi)))
        raise SearchError(f"domain {self.name!r} is not drawable")


@dataclass(frozen=True)
class SearchPlan:
    grid_domains: tuple = ()
    random_domains: tuple = ()
    n_random: int = 0
    cv_folds: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.cv_folds < 2:
            raise SearchError("cv_folds must be >= 2")
        if self.random_domains and self.n_random < 1:
            raise SearchError("n_random must be >= 1 when random domains exist")
        for d in self.grid_domains:
            if d.kind != FINITE:
                raise SearchError(f"grid domain {d.name!r} must be finite")
        for d in self.random_domains:
            if d.kind == FINITE:
                raise SearchError(f"random domain {d.name!r} must be a range")
        names = [d.name for d in self.grid_domains] + [d.name for d in self.random_domains]
        if len(set(names)) != len(names):
            raise SearchError("duplicate parameter names across domains")


@dataclass(frozen=True)
class Trial:
    params: dict
    fold_aucs: tuple
    mean_auc: float


def enumerate_candidates(plan: SearchPlan, rng=None) -> list[dict]:
    """Grid product crossed with the seeded random draws, in stable order."""
    if not plan.grid_domains and not plan.random_domains:
        raise SearchError("search plan declares no parameter domains")
    rng = rng if rng is not None else rng_from(plan.seed, "candidates")

    grid_assignments: list[dict] = [{}]
    if plan.grid_domains:
        grid_assignments = [
            dict(zip((d.name for d in plan.grid_domains), combo))
            for combo in itertools.product(*(d.values for d in plan.grid_domains))
        ]

    random_assignments: list[dict] = [{}]
    if plan.random_domains:
        random_assignments = [
            {d.name: d.draw(rng) for d in plan.random_domains} for _ in range(plan.n_random)
        ]

    return [{**g, **r} for g in grid_assignments for r in random_assignments]


def stratified_folds(dataset: Dataset, k: int, seed: int) -> list[np.ndarray]:
    """Deal each class round-robin into k folds after a seeded shuffle."""
    rng = rng_from(seed, "folds")
    folds: list[list[int]] = [[] for _ in range(k)]
    for cls in (0, 1):
        members = np.flatnonzero(dataset.labels == cls)
        if members.size < k:
            raise SplitError(f"class {cls} has {members.size} rows, fewer than {k} folds")
        shuffled = rng.permutation(members)
        for pos, idx in enumerate(shuffled):
            folds[pos % k].append(int(idx))
    return [np.sort(np.asarray(f, dtype=np.int64)) for f in folds]


def cross_validate(dataset: Dataset, learner_factory, params: dict, k: int, seed: int) -> Trial:
    """Fit on k-1 stratified folds, score rank AUC on the held-out fold.

    ``learner_factory(train_dataset, params, seed)`` must return a fitted
    model exposing ``score_rows``.  Only training folds ever reach it.
    """
    folds = stratified_folds(dataset, k, seed)
    fold_aucs = []
    for fold_idx, holdout in enumerate(folds):
        mask = np.ones(dataset.n, dtype=bool)
        mask[holdout] = False
        train = dataset.subset(np.flatnonzero(mask))
        test = dataset.subset(holdout)
        model = learner_factory(train, params, derive_seed(seed, "fit", fold_idx))
        scores = model.score_rows(test.matrix)
        fold_aucs.append(float(auc(scores, test.labels)))
    return Trial(
        params=dict(params),
        fold_aucs=tuple(fold_aucs),
        mean_auc=float(np.mean(fold_aucs)),
    )


def search(dataset: Dataset, learner_factory, plan: SearchPlan) -> tuple[Trial, list[Trial]]:
    """Evaluate every candidate; returns (best trial, full leaderboard).

    The leaderboard is sorted by mean AUC descending with ties broken by
    candidate enumeration order, so results are deterministic end to end.
    """
    candidates = enumerate_candidates(plan)
    cv_seed = derive_seed(plan.seed, "cv")  # shared: every candidate sees the same folds
    trials = [
        cross_validate(dataset, learner_factory, params, plan.cv_folds, cv_seed)
        for params in candidates
    ]
    order = sorted(range(len(trials)), key=lambda i: (-trials[i].mean_auc, i))
    leaderboard = [trials[i] for i in order]
    return leaderboard[0], leaderboard

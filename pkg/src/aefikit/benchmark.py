"""Experiment harness: algorithm registry, benchmark runs, and the
support-vector overlap experiment.

A benchmark spec (JSON) names a data source, a split, a positive-class
convention, a list of algorithms (fixed or tuned), and run seeds.  Every
(algorithm, seed) cell stores its raw test scores and predictions so any
reported number can be recomputed; ``verify_report`` does exactly that.
Reports are deterministic for a fixed spec — wall-clock timings go to a
separate volatile file so rerunning a spec reproduces the report files
byte for byte.
"""

import json
import platform
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .data import Dataset, Encoder, SplitSpec, clean, fit_encoder, load_csv, stratified_split
from .ensemble import (
    BoostConfig,
    EasyConfig,
    ForestConfig,
    SeededRusConfig,
    adaboost_fit,
    brf_fit,
    easy_ensemble_fit,
    random_forest_fit,
    rusboost_fit,
    svc_seeded_rusboost_fit,
)
from .errors import BenchmarkError, ExperimentError, InputError
from .linear import KnnConfig, LogRegConfig, knn_fit, logreg_fit
from .metrics import auc, compute_metrics, confusion
from .schema import RawRecord, RecordSchema, default_schema, load_schema
from .seeding import derive_seed, rng_from
from .svm import Kernel, SvcConfig, svc_fit
from .synth import synth_aefi, synth_gaussian
from .tree import CartConfig, cart_fit
from .tuning import (
    FINITE,
    ParamDomain,
    SearchPlan,
    search,
)

REFERENCE_OVERLAP_PERCENT = 83.9  # published value from a private clinical dataset; never asserted


# ---------------------------------------------------------------------------
# Algorithm registry


@dataclass(frozen=True)
class Algorithm:
    """A pluggable learner: a name, a fit function, defaults, and a tuning plan.

    ``fit(dataset, params, seed)`` returns a fitted model exposing
    ``score_rows``.  External gradient-boosting systems can be plugged in
    through ``register`` without touching the harness.
    """

    name: str
    fit: callable
    defaults: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)  # param -> list of values
    random: dict = field(default_factory=dict)  # param -> ParamDomain kwargs
    n_random: int = 0


ALGORITHMS: dict = {}


def register(algorithm: Algorithm):
    ALGORITHMS[algorithm.name] = algorithm


def get_algorithm(name: str) -> Algorithm:
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise BenchmarkError(
            f"unknown algorithm {name!r}; known: {sorted(ALGORITHMS)}"
        ) from None


def _cart_config(params: dict, seed: int) -> CartConfig:
    return CartConfig(
        max_depth=int(params.get("max_depth", 0)),
        min_samples_leaf=int(params.get("min_samples_leaf", 1)),
        criterion=params.get("criterion", "gini"),
        feature_subsample=int(params.get("feature_subsample", 0)),
        seed=seed,
    )


def _boost_config(params: dict, seed: int) -> BoostConfig:
    base = CartConfig(
        max_depth=int(params.get("max_depth", 3)),
        min_samples_leaf=int(params.get("min_samples_leaf", 1)),
        criterion=params.get("criterion", "gini"),
    )
    return BoostConfig(
        rounds=int(params.get("rounds", 30)),
        base=base,
        rus_minority_fraction=float(params.get("rus_minority_fraction", 0.5)),
        max_retries_per_round=int(params.get("max_retries_per_round", 3)),
        seed=seed,
    )


def _kernel(params: dict, default_kind: str) -> Kernel:
    return Kernel(
        kind=params.get("kernel", default_kind),
        degree=int(params.get("degree", 3)),
        gamma=float(params.get("gamma", 1.0)),
        coef0=float(params.get("coef0", 0.0)),
    )


def _svc_config(params: dict, seed: int, default_kind: str) -> SvcConfig:
    return SvcConfig(
        C=float(params.get("C", 1.0)),
        kernel=_kernel(params, default_kind),
        tol=float(params.get("tol", 1e-3)),
        max_iter=int(params.get("max_iter", 100_000)),
        seed=seed,
    )


def _sqrt_features(params: dict, dataset: Dataset) -> int:
    m = params.get("feature_subsample", "sqrt")
    if m == "sqrt":
        return max(1, int(np.sqrt(dataset.dim)))
    return int(m)


def _fit_cart(dataset, params, seed):
    return cart_fit(dataset, None, _cart_config(params, seed))


def _fit_random_forest(dataset, params, seed):
    return random_forest_fit(
        dataset,
        ForestConfig(
            n_trees=int(params.get("n_trees", 50)),
            feature_subsample=_sqrt_features(params, dataset),
            seed=seed,
        ),
    )


def _fit_brf(dataset, params, seed):
    return brf_fit(
        dataset,
        ForestConfig(
            n_trees=int(params.get("n_trees", 50)),
            feature_subsample=_sqrt_features(params, dataset),
            balanced=True,
            per_class_size=int(params.get("per_class_size", 0)),
            seed=seed,
        ),
    )


def _fit_adaboost(dataset, params, seed):
    return adaboost_fit(dataset, _boost_config(params, seed))


def _fit_rusboost(dataset, params, seed):
    return rusboost_fit(dataset, _boost_config(params, seed))


def _fit_easy(dataset, params, seed):
    return easy_ensemble_fit(
        dataset,
        EasyConfig(
            subsets=int(params.get("subsets", 10)),
            rounds_per_subset=int(params.get("rounds_per_subset", 10)),
            base=CartConfig(max_depth=int(params.get("max_depth", 3))),
            seed=seed,
        ),
    )


def _fit_svc(default_kind):
    def fit(dataset, params, seed):
        return svc_fit(dataset, _svc_config(params, seed, default_kind))

    return fit


def _fit_seeded_rusboost(dataset, params, seed):
    config = SeededRusConfig(
        svc=_svc_config(params, derive_seed(seed, "svc"), params.get("kernel", "rbf")),
        beta=float(params.get("beta", 2.0)),
        boost=_boost_config(params, seed),
    )
    model, _report = svc_seeded_rusboost_fit(dataset, config)
    return model


def _fit_logreg(dataset, params, seed):
    return logreg_fit(
        dataset,
        LogRegConfig(
            learning_rate=float(params.get("learning_rate", 0.1)),
            iterations=int(params.get("iterations", 500)),
            l2=float(params.get("l2", 1e-3)),
            seed=seed,
        ),
    )


def _fit_knn(dataset, params, seed):
    return knn_fit(dataset, KnnConfig(k=int(params.get("k", 5))))


register(Algorithm("cart", _fit_cart, defaults={"max_depth": 0},
                   grid={"max_depth": [0, 3, 5], "min_samples_leaf": [1, 5]}))
register(Algorithm("random_forest", _fit_random_forest, defaults={"n_trees": 50},
                   grid={"n_trees": [25, 50, 100]}))
register(Algorithm("brf", _fit_brf, defaults={"n_trees": 50},
                   grid={"n_trees": [25, 50, 100]}))
register(Algorithm("adaboost", _fit_adaboost, defaults={"rounds": 30, "max_depth": 3},
                   grid={"rounds": [10, 30, 50], "max_depth": [1, 2, 3]}))
register(Algorithm("rusboost", _fit_rusboost,
                   defaults={"rounds": 30, "max_depth": 3, "rus_minority_fraction": 0.5},
                   grid={"rounds": [10, 30, 50], "max_depth": [1, 2, 3]},
                   random={"rus_minority_fraction": {"kind": "real_range", "lo": 0.3, "hi": 0.7}},
                   n_random=4))
register(Algorithm("easy_ensemble", _fit_easy,
                   defaults={"subsets": 10, "rounds_per_subset": 10},
                   grid={"subsets": [5, 10], "rounds_per_subset": [5, 10]}))
register(Algorithm("svc_linear", _fit_svc("linear"), defaults={"C": 1.0},
                   random={"C": {"kind": "log_real_range", "lo": 1e-2, "hi": 1e2}},
                   n_random=8))
register(Algorithm("svc_poly", _fit_svc("polynomial"),
                   defaults={"C": 1.0, "degree": 3, "gamma": 0.1, "coef0": 1.0},
                   grid={"degree": [2, 3]},
                   random={"C": {"kind": "log_real_range", "lo": 1e-2, "hi": 1e2}},
                   n_random=4))
register(Algorithm("svc_rbf", _fit_svc("rbf"), defaults={"C": 1.0, "gamma": 0.125},
                   random={"C": {"kind": "log_real_range", "lo": 1e-2, "hi": 1e2},
                           "gamma": {"kind": "log_real_range", "lo": 1e-3, "hi": 1e1}},
                   n_random=8))
register(Algorithm("svc_seeded_rusboost", _fit_seeded_rusboost,
                   defaults={"beta": 2.0, "rounds": 30, "max_depth": 3,
                             "kernel": "rbf", "C": 1.0, "gamma": 0.125},
                   grid={"beta": [1.5, 2.0, 3.0]}))
register(Algorithm("logreg", _fit_logreg,
                   defaults={"learning_rate": 0.1, "iterations": 500, "l2": 1e-3},
                   random={"l2": {"kind": "log_real_range", "lo": 1e-5, "hi": 1e0}},
                   n_random=6))
register(Algorithm("knn", _fit_knn, defaults={"k": 5}, grid={"k": [3, 5, 9, 15]}))


# ---------------------------------------------------------------------------
# Benchmark specification


@dataclass(frozen=True)
class AlgorithmEntry:
    name: str
    label: str
    params: dict = field(default_factory=dict)
    tune: bool = False
    plan: dict | None = None


@dataclass(frozen=True)
class BenchmarkSpec:
    data: dict
    split: dict
    algorithms: tuple
    seeds: tuple
    positive_class: str = "minority"

    def __post_init__(self):
        if not self.algorithms:
            raise BenchmarkError("spec must name at least one algorithm")
        if not self.seeds:
            raise BenchmarkError("spec must name at least one seed")
        if self.positive_class not in ("minority", "majority"):
            raise BenchmarkError("positive_class must be 'minority' or 'majority'")
        labels = [a.label for a in self.algorithms]
        if len(set(labels)) != len(labels):
            raise BenchmarkError("algorithm labels must be unique (set 'label' to distinguish)")

    @classmethod
    def from_json_dict(cls, doc: dict) -> "BenchmarkSpec":
        try:
            algorithms = tuple(
                AlgorithmEntry(
                    name=a["name"],
                    label=a.get("label", a["name"]),
                    params=dict(a.get("params", {})),
                    tune=bool(a.get("tune", False)),
                    plan=a.get("plan"),
                )
                for a in doc["algorithms"]
            )
            return cls(
                data=dict(doc["data"]),
                split=dict(doc.get("split", {"test_fraction": 0.3, "stratified": True})),
                algorithms=algorithms,
                seeds=tuple(int(s) for s in doc["seeds"]),
                positive_class=doc.get("positive_class", "minority"),
            )
        except KeyError as exc:
            raise BenchmarkError(f"benchmark spec missing key {exc}") from exc

    def to_json_dict(self) -> dict:
        return {
            "data": self.data,
            "split": self.split,
            "positive_class": self.positive_class,
            "seeds": list(self.seeds),
            "algorithms": [
                {
                    "name": a.name,
                    "label": a.label,
                    "params": a.params,
                    "tune": a.tune,
                    **({"plan": a.plan} if a.plan else {}),
                }
                for a in self.algorithms
            ],
        }


def load_benchmark_spec(path) -> BenchmarkSpec:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BenchmarkError(f"spec file is not valid JSON: {exc}") from exc
    return BenchmarkSpec.from_json_dict(doc)


def _split_records(records: list[RawRecord], schema: RecordSchema,
                   fraction: float, seed: int) -> tuple[list, list]:
    """Label-stratified record split, so encoders can fit on training rows only."""
    rng = rng_from(seed, "record-split")
    by_class: dict = {}
    for i, record in enumerate(records):
        by_class.setdefault(record.get(schema.target), []).append(i)
    test_idx = set()
    for label, members in sorted(by_class.items(), key=lambda kv: str(kv[0])):
        members = np.asarray(members)
        n_test = int(round(members.size * fraction))
        if n_test < 1 or n_test >= members.size:
            raise BenchmarkError(
                f"class {label!r} has {members.size} rows: cannot hold out {fraction}"
            )
        test_idx.update(int(i) for i in rng.permutation(members)[:n_test])
    train = [r for i, r in enumerate(records) if i not in test_idx]
    test = [r for i, r in enumerate(records) if i in test_idx]
    return train, test


def build_train_test(spec: BenchmarkSpec, run_seed: int) -> tuple[Dataset, Dataset]:
    """Materialize the spec's data source and split it for one run seed."""
    data = spec.data
    kind = data.get("kind")
    fraction = float(spec.split.get("test_fraction", 0.3))
    stratified = bool(spec.split.get("stratified", True))
    split_seed = derive_seed(int(spec.split.get("seed", 0)), "split", run_seed)

    if kind == "synth_gaussian":
        dataset = synth_gaussian(
            n=int(data["n"]),
            minority_fraction=float(data["minority_fraction"]),
            dims=int(data.get("dims", 8)),
            separation=float(data.get("separation", 2.0)),
            seed=derive_seed(int(data.get("seed", 0)), "data", run_seed),
        )
        return stratified_split(dataset, SplitSpec(fraction, stratified, split_seed))

    if kind == "synth_aefi":
        schema = default_schema()
        records = synth_aefi(
            n=int(data["n"]),
            minority_fraction=float(data["minority_fraction"]),
            schema=schema,
            seed=derive_seed(int(data.get("seed", 0)), "data", run_seed),
        )
    elif kind == "csv":
        schema = load_schema(data["schema"]) if data.get("schema") else default_schema()
        records = load_csv(data["path"], schema)
    else:
        raise BenchmarkError(f"unknown data source kind {kind!r}")

    records, _report = clean(records, schema)
    train_records, test_records = _split_records(records, schema, fraction, split_seed)
    encoder = fit_encoder(train_records, schema)
    return encoder.encode_dataset(train_records), encoder.encode_dataset(test_records)


def _plan_from_json(algorithm: Algorithm, plan_doc: dict | None, seed: int) -> SearchPlan:
    grid_doc = dict(algorithm.grid)
    random_doc = dict(algorithm.random)
    n_random = algorithm.n_random
    cv_folds = 5
    if plan_doc:
        grid_doc = plan_doc.get("grid", grid_doc)
        random_doc = plan_doc.get("random", random_doc)
        n_random = int(plan_doc.get("n_random", n_random or 1))
        cv_folds = int(plan_doc.get("cv_folds", 5))
    grid_domains = tuple(
        ParamDomain(name=name, kind=FINITE, values=tuple(values))
        for name, values in grid_doc.items()
    )
    random_domains = tuple(
        ParamDomain(name=name, kind=spec["kind"], lo=float(spec["lo"]), hi=float(spec["hi"]))
        for name, spec in random_doc.items()
    )
    if not grid_domains and not random_domains:
        raise BenchmarkError(f"algorithm {algorithm.name!r} has no tunable domains")
    return SearchPlan(
        grid_domains=grid_domains,
        random_domains=random_domains,
        n_random=n_random if random_domains else 0,
        cv_folds=cv_folds,
        seed=seed,
    )


def tune_entry(entry: AlgorithmEntry, train: Dataset, seed: int):
    """Run the entry's search plan on the training set; returns (best, leaderboard)."""
    algorithm = get_algorithm(entry.name)
    plan = _plan_from_json(algorithm, entry.plan, seed)

    def factory(ds, params, fit_seed):
        merged = {**algorithm.defaults, **entry.params, **params}
        return algorithm.fit(ds, merged, fit_seed)

    return search(train, factory, plan)


# ---------------------------------------------------------------------------
# Running


def _metrics_cell(scores: np.ndarray, labels: np.ndarray, positive_class: str) -> dict:
    predictions = (scores >= 0.5).astype(np.int8)
    positive = 1 if positive_class == "minority" else 0
    cm = confusion(labels, predictions, positive_class=positive)
    report = compute_metrics(cm)
    return {
        "confusion": {"tp": cm.tp, "fn": cm.fn, "fp": cm.fp, "tn": cm.tn},
        "metrics": report.as_dict(),
        "auc": float(auc(scores, labels)),
        "scores": [float(s) for s in scores],
        "labels": [int(v) for v in labels],
        "predictions": [int(p) for p in predictions],
    }


def run_benchmark(spec: BenchmarkSpec) -> dict:
    """Evaluate every algorithm on every run seed.

    Returns a report dict with a deterministic ``report`` payload and a
    volatile ``timings`` payload (wall-clock seconds; reported, never
    asserted).
    """
    cells = []
    timings = []
    for entry in spec.algorithms:
        algorithm = get_algorithm(entry.name)
        for run_seed in spec.seeds:
            cell = {"algorithm": entry.label, "seed": int(run_seed)}
            started = time.perf_counter()
            try:
                train, test = build_train_test(spec, run_seed)
                params = {**algorithm.defaults, **entry.params}
                if entry.tune:
                    best, _ = tune_entry(entry, train, derive_seed(run_seed, "tune", entry.label))
                    params = {**params, **best.params}
                    cell["tuned_params"] = best.params
                fit_seed = derive_seed(run_seed, "fit", entry.label)
                t0 = time.perf_counter()
                model = algorithm.fit(train, params, fit_seed)
                train_seconds = time.perf_counter() - t0
                scores = np.asarray(model.score_rows(test.matrix), dtype=np.float64)
                cell.update(_metrics_cell(scores, test.labels, spec.positive_class))
                cell["params"] = params
                cell["status"] = "ok"
            except Exception as exc:  # failed cells are recorded, not fatal
                cell["status"] = "failed"
                cell["error"] = f"{type(exc).__name__}: {exc}"
            cells.append(cell)
            timings.append(
                {
                    "algorithm": entry.label,
                    "seed": int(run_seed),
                    "train_seconds": (
                        train_seconds if cell["status"] == "ok" else None
                    ),
                    "total_seconds": time.perf_counter() - started,
                }
            )

    aggregates = _aggregate(cells, [a.label for a in spec.algorithms])
    report = {
        "spec": spec.to_json_dict(),
        "environment": {
            "package": f"aefikit {__version__}",
            "python": platform.python_version(),
            "numpy": np.__version__,
            "platform": platform.system(),
        },
        "cells": cells,
        "aggregates": aggregates,
    }
    return {"report": report, "timings": timings}


def _aggregate(cells: list[dict], labels: list[str]) -> list[dict]:
    out = []
    for label in labels:
        ok = [c for c in cells if c["algorithm"] == label and c["status"] == "ok"]
        agg = {"algorithm": label, "runs_ok": len(ok), "runs_failed":
               sum(1 for c in cells if c["algorithm"] == label and c["status"] == "failed")}
        if ok:
            agg["mean_auc"] = float(np.mean([c["auc"] for c in ok]))
            means = {}
            for key in ("acc_pos", "acc_neg", "precision", "accuracy", "f1", "g_mean"):
                defined = [c["metrics"][key] for c in ok if c["metrics"][key] is not None]
                means[key] = float(np.mean(defined)) if defined else None
            agg["mean_metrics"] = means
            agg["total_confusion"] = {
                k: int(sum(c["confusion"][k] for c in ok)) for k in ("tp", "fn", "fp", "tn")
            }
        out.append(agg)
    return out


def verify_report(report: dict, atol: float = 1e-12) -> list[str]:
    """Recompute every ok cell from its stored raw scores and labels.

    Returns a list of discrepancy descriptions; empty means the report is
    internally consistent.
    """
    problems = []
    positive_class = report["spec"].get("positive_class", "minority")
    for cell in report["cells"]:
        if cell.get("status") != "ok":
            continue
        scores = np.asarray(cell["scores"], dtype=np.float64)
        labels = np.asarray(cell["labels"], dtype=np.int8)
        fresh = _metrics_cell(scores, labels, positive_class)
        key = f"{cell['algorithm']}/seed={cell['seed']}"
        if fresh["confusion"] != cell["confusion"]:
            problems.append(f"{key}: confusion mismatch")
        if abs(fresh["auc"] - cell["auc"]) > atol:
            problems.append(f"{key}: auc mismatch")
        for name, value in fresh["metrics"].items():
            stored = cell["metrics"].get(name)
            if value is None or stored is None:
                if value != stored:
                    problems.append(f"{key}: metric {name} definedness mismatch")
            elif abs(value - stored) > atol:
                problems.append(f"{key}: metric {name} mismatch")
        if fresh["predictions"] != cell["predictions"]:
            problems.append(f"{key}: predictions mismatch")
    return problems


# ---------------------------------------------------------------------------
# Support-vector overlap experiment


@dataclass(frozen=True)
class OverlapReport:
    runs: tuple  # of {"seed": int, "k": int, "overlap": float}
    mean_overlap: float
    n: int
    k: int
    random_baseline: float
    snapshot: str

    def to_json_dict(self) -> dict:
        return {
            "runs": list(self.runs),
            "mean_overlap": self.mean_overlap,
            "n": self.n,
            "k": self.k,
            "random_baseline": self.random_baseline,
            "snapshot": self.snapshot,
            "reference_overlap_percent": REFERENCE_OVERLAP_PERCENT,
            "reference_note": (
                "published reference value measured on a private clinical dataset; "
                "shown for orientation, never asserted"
            ),
        }


def top_weight_indices(model, k: int, snapshot: str = "final") -> list:
    """Row ids of the k largest boosting weights; ties go to the lower id."""
    if snapshot == "final":
        weights = model.final_distribution
    elif snapshot == "max":
        weights = model.max_distribution
    else:
        raise InputError(f"unknown weight snapshot {snapshot!r}")
    n = weights.shape[0]
    if k > n:
        raise InputError(f"k={k} exceeds the number of rows {n}")
    if k == 0:
        return []
    order = np.lexsort((model.row_ids, -weights))
    picked = model.row_ids[order[:k]]
    return sorted(int(r) for r in picked)


def overlap_experiment(
    dataset: Dataset,
    svc_config: SvcConfig,
    boost_config: BoostConfig,
    runs: int = 10,
    snapshot: str = "final",
    boost_fitter=None,
) -> OverlapReport:
    """Measure how much the SVC support set overlaps the heaviest boosting rows.

    The SVC is fit once; each run refits an undersampling boost from a
    uniform start under a fresh derived seed and takes its ``k`` heaviest
    rows, with ``k`` the support-vector count.
    """
    if runs < 1:
        raise InputError("runs must be >= 1")
    svc_model = svc_fit(dataset, svc_config)
    support = set(int(r) for r in svc_model.support_row_ids)
    k = len(support)
    if k == 0:
        raise ExperimentError("the SVC fit produced no support vectors")
    if boost_fitter is None:
        boost_fitter = lambda cfg: rusboost_fit(dataset, cfg)  # noqa: E731

    run_rows = []
    for r in range(runs):
        cfg = replace(boost_config, seed=derive_seed(boost_config.seed, "overlap", r),
                      init_distribution=None)
        model = boost_fitter(cfg)
        top = set(top_weight_indices(model, k, snapshot))
        run_rows.append({"seed": cfg.seed, "k": k, "overlap": len(support & top) / k})

    mean_overlap = float(np.mean([row["overlap"] for row in run_rows]))
    return OverlapReport(
        runs=tuple(run_rows),
        mean_overlap=mean_overlap,
        n=dataset.n,
        k=k,
        random_baseline=k / dataset.n,
        snapshot=snapshot,
    )


# ---------------------------------------------------------------------------
# Emission


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _fmt(value, digits=3) -> str:
    if value is None:
        return "-"
    return f"{value:.{digits}f}"


def render_markdown(report: dict) -> str:
    """Aggregate comparison table plus per-algorithm confusion blocks."""
    lines = ["# Benchmark report", ""]
    lines.append(
        "| Algorithm | Accuracy | Precision | Recall | Specificity | F1 | G-mean | AUC |"
    )
    lines.append("|---|---|---|---|---|---|---|---|")
    for agg in report["aggregates"]:
        if agg.get("runs_ok", 0) == 0:
            lines.append(f"| {agg['algorithm']} | failed | | | | | | |")
            continue
        m = agg["mean_metrics"]
        lines.append(
            "| {} | {} | {} | {} | {} | {} | {} | {} |".format(
                agg["algorithm"],
                _fmt(m["accuracy"]),
                _fmt(m["precision"]),
                _fmt(m["acc_pos"]),
                _fmt(m["acc_neg"]),
                _fmt(m["f1"]),
                _fmt(m["g_mean"]),
                _fmt(agg["mean_auc"]),
            )
        )
    lines.append("")
    lines.append("Rows are means over run seeds; raw per-seed cells live in the JSON report.")
    lines.append("")
    for agg in report["aggregates"]:
        if agg.get("runs_ok", 0) == 0:
            continue
        cm = agg["total_confusion"]
        lines.append(f"## {agg['algorithm']} — confusion totals over seeds")
        lines.append("")
        lines.append("| | Predicted positive | Predicted negative |")
        lines.append("|---|---|---|")
        lines.append(f"| Actual positive | {cm['tp']} | {cm['fn']} |")
        lines.append(f"| Actual negative | {cm['fp']} | {cm['tn']} |")
        lines.append("")
    return "\n".join(lines)


def render_csv(report: dict) -> str:
    header = [
        "algorithm", "seed", "status", "tp", "fn", "fp", "tn",
        "accuracy", "precision", "recall", "specificity", "f1", "g_mean", "auc",
    ]
    rows = [",".join(header)]
    for cell in report["cells"]:
        if cell["status"] != "ok":
            rows.append(f"{cell['algorithm']},{cell['seed']},failed,,,,,,,,,,,")
            continue
        cm = cell["confusion"]
        m = cell["metrics"]

        def num(v):
            return "" if v is None else repr(float(v))

        rows.append(
            ",".join(
                [
                    cell["algorithm"],
                    str(cell["seed"]),
                    "ok",
                    str(cm["tp"]), str(cm["fn"]), str(cm["fp"]), str(cm["tn"]),
                    num(m["accuracy"]), num(m["precision"]), num(m["acc_pos"]),
                    num(m["acc_neg"]), num(m["f1"]), num(m["g_mean"]), num(cell["auc"]),
                ]
            )
        )
    return "\n".join(rows) + "\n"


def emit_report(result: dict, out_dir, formats=("json", "csv", "markdown")) -> list[str]:
    """Write report files; timings go to a separate volatile file."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    report = result["report"]
    written = []

    def write(name, text):
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        written.append(path)

    if "json" in formats:
        write("report.json", canonical_json(report))
    if "csv" in formats:
        write("report.csv", render_csv(report))
    if "markdown" in formats:
        write("report.md", render_markdown(report))
    write("timings.json", canonical_json(result["timings"]))
    return written

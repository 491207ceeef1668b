"""Hyperparameter search and the reproducible benchmark harness.

Small grid + random search with cross-validated AUC, then a multi-seed
benchmark producing JSON/CSV/markdown reports whose reruns are
byte-identical.
"""

import json
import tempfile
from pathlib import Path

from aefikit.benchmark import BenchmarkSpec, canonical_json, emit_report, run_benchmark
from aefikit.linear import KnnConfig, knn_fit
from aefikit.synth import synth_gaussian
from aefikit.tuning import FINITE, LOG_REAL_RANGE, ParamDomain, SearchPlan, search

dataset = synth_gaussian(n=400, minority_fraction=0.15, dims=4, separation=2.0, seed=3)

plan = SearchPlan(
    grid_domains=(ParamDomain("k", FINITE, values=(1, 3, 5, 9)),),
    random_domains=(ParamDomain("unused_scale", LOG_REAL_RANGE, lo=1e-2, hi=1e2),),
    n_random=2,
    cv_folds=4,
    seed=5,
)
best, leaderboard = search(
    dataset,
    lambda train, params, seed: knn_fit(train, KnnConfig(k=params["k"])),
    plan,
)
print(f"searched {len(leaderboard)} candidates; best k={best.params['k']} "
      f"with mean AUC {best.mean_auc:.3f}")
for trial in leaderboard[:3]:
    print(f"  k={trial.params['k']}: folds {[round(a, 3) for a in trial.fold_aucs]}")

spec = BenchmarkSpec.from_json_dict({
    "data": {"kind": "synth_gaussian", "n": 400, "minority_fraction": 0.1,
             "dims": 4, "separation": 2.0, "seed": 11},
    "split": {"test_fraction": 0.3, "seed": 0},
    "positive_class": "minority",
    "seeds": [1, 2, 3],
    "algorithms": [
        {"name": "cart", "params": {"max_depth": 4}},
        {"name": "rusboost", "params": {"rounds": 15}},
        {"name": "brf", "params": {"n_trees": 30}},
        {"name": "knn", "tune": True, "plan": {"grid": {"k": [1, 3, 5]}, "cv_folds": 3}},
    ],
})
result = run_benchmark(spec)

with tempfile.TemporaryDirectory() as tmp:
    files = emit_report(result, tmp)
    print("\nwrote:", *(Path(f).name for f in files))
    print("\n--- report.md ---")
    print((Path(tmp) / "report.md").read_text())

again = canonical_json(run_benchmark(spec)["report"])
print("rerun byte-identical:", again == canonical_json(result["report"]))

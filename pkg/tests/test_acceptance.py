"""Acceptance suite.

One test per shipping criterion, each printing a PASS/FAIL line (run
with ``pytest -s tests/test_acceptance.py`` to see them inline).  All
tolerances are fixed here, not calibrated at run time; benchmark B1's
expected values were pinned from the first oracle run and live in
tests/fixtures/.

Known red: one published G-mean cell (rate product 0.83 x 0.55) sits
0.00065 outside the 0.005 identity tolerance because the source table
printed rates rounded to two decimals; the check is kept at its stated
tolerance rather than widened.
"""

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

from aefikit.benchmark import (
    BenchmarkSpec,
    build_train_test,
    overlap_experiment,
    run_benchmark,
    verify_report,
)
from aefikit.bundle import ModelBundle, deserialize_model, serialize_model
from aefikit.cli import main as cli_main
from aefikit.data import Dataset
from aefikit.ensemble import (
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
from aefikit.ensemble import EPS_CLAMP
from aefikit.linear import KnnConfig, LogRegConfig, knn_fit, logreg_fit
from aefikit.metrics import ConfusionMatrix, auc, compute_metrics, roc_points
from aefikit.schema import default_schema
from aefikit.service import create_app
from aefikit.store import RecordStore
from aefikit.svm import Kernel, SvcConfig, svc_fit
from aefikit.synth import synth_gaussian
from aefikit.tree import CartConfig, CartTree, cart_fit

from _oracles import dual_svc_oracle, pairwise_auc

FIXTURES = Path(__file__).parent / "fixtures"


def verdict(name: str, failures: list) -> None:
    status = "PASS" if not failures else "FAIL"
    print(f"\n[ACCEPTANCE] {name}: {status}")
    assert not failures, f"{name}: " + "; ".join(str(f) for f in failures)


@pytest.fixture(scope="module")
def b1():
    spec = BenchmarkSpec.from_json_dict(
        json.loads((FIXTURES / "b1_spec.json").read_text())
    )
    report = run_benchmark(spec)["report"]
    pinned = json.loads((FIXTURES / "b1_pinned.json").read_text())
    return spec, report, pinned


class TestMetricIdentities:
    """Published-table identities at their stated tolerances. Runtime: well under 1 s."""

    def test_published_rows(self):
        failures = []

        # Forest baseline row from confusion matrix (364, 6, 10, 3),
        # majority class scored positive; tolerance +-0.0005.
        forest = compute_metrics(ConfusionMatrix(tp=364, fn=6, fp=10, tn=3, positive_class=0))
        for name, got, want in (
            ("forest accuracy", forest.accuracy, 0.958),
            ("forest precision", forest.precision, 0.973),
            ("forest recall", forest.recall, 0.984),
            ("forest f1", forest.f1, 0.978),
        ):
            if abs(got - want) > 5e-4:
                failures.append(f"{name}: {got:.6f} vs {want} (tol 5e-4)")

        # Degenerate linear-SVC row from (370, 0, 13, 0).
        svc_row = compute_metrics(ConfusionMatrix(tp=370, fn=0, fp=13, tn=0, positive_class=0))
        for name, got, want in (
            ("svc accuracy", svc_row.accuracy, 0.966),
            ("svc precision", svc_row.precision, 0.966),
            ("svc recall", svc_row.recall, 1.0),
        ):
            if abs(got - want) > 5e-4:
                failures.append(f"{name}: {got:.6f} vs {want} (tol 5e-4)")

        # Four published comparison columns: (precision, recall,
        # specificity, printed F1, printed G-mean); tolerance +-0.005.
        columns = {
            "undersample-committee": (0.98, 0.67, 0.64, 0.80, 0.65),
            "balanced-forest": (0.99, 0.66, 0.73, 0.79, 0.69),
            "undersample-boost": (0.98, 0.83, 0.55, 0.90, 0.67),
            "sv-seeded-boost": (0.99, 0.82, 0.73, 0.90, 0.77),
        }
        for name, (p, r, s, f1_printed, g_printed) in columns.items():
            f1 = 2 * p * r / (p + r)
            g = math.sqrt(r * s)
            if abs(f1 - f1_printed) > 5e-3:
                failures.append(f"{name} F1: {f1:.5f} vs printed {f1_printed} (tol 5e-3)")
            if abs(g - g_printed) > 5e-3:
                failures.append(
                    f"{name} G-mean: {g:.5f} vs printed {g_printed} (tol 5e-3; "
                    "the printed rates are rounded to 2 decimals, which makes this "
                    "identity unattainable for this column)"
                )
        verdict("metric identities vs published tables", failures)


class TestAucOracle:
    """Rank AUC == pairwise enumeration on 1000 instances; ROC area within 1e-12."""

    def test_thousand_instances(self):
        rng = np.random.default_rng(2024)
        failures = []
        for i in range(1000):
            n = int(rng.integers(2, 51))
            labels = rng.integers(0, 2, n)
            if labels.min() == labels.max():
                labels[0] = 1 - labels[0]
            scores = np.round(rng.random(n), int(rng.integers(1, 3)))
            ours = auc(scores, labels)
            brute = pairwise_auc(scores, labels)
            if ours != brute:
                failures.append(f"instance {i}: rank {ours!r} != pairwise {brute!r}")
            area = roc_points(scores, labels).area()
            if abs(area - ours) > 1e-12:
                failures.append(f"instance {i}: trapezoid {area!r} vs rank {ours!r}")
            if failures:
                break
        verdict("AUC oracle equivalence (1000 instances)", failures)


class TestSvcCorrectness:
    """KKT suite on 50 random small instances; oracle agreement at n <= 30."""

    def test_kkt_and_oracle(self):
        rng = np.random.default_rng(4242)
        failures = []
        for i in range(50):
            n = int(rng.integers(6, 31))
            d = int(rng.integers(1, 4))
            X = rng.normal(size=(n, d))
            y = rng.integers(0, 2, n)
            y[0], y[1] = 0, 1
            kind = ("linear", "polynomial", "rbf")[i % 3]
            kernel = {
                "linear": Kernel("linear"),
                "polynomial": Kernel("polynomial", degree=2 + i % 2, gamma=1.0, coef0=1.0),
                "rbf": Kernel("rbf", gamma=float(rng.uniform(0.2, 2.0))),
            }[kind]
            C = float(rng.choice([0.5, 1.0, 10.0]))
            config = SvcConfig(C=C, kernel=kernel, tol=1e-4)
            ds = Dataset(matrix=X, labels=y.astype(np.int8),
                         row_ids=np.arange(n, dtype=np.int64))
            model = svc_fit(ds, config)

            alpha = np.zeros(n)
            for rid, coef in zip(model.support_row_ids, model.dual_coef):
                alpha[int(rid)] = abs(coef)
            y_pm = y.astype(float) * 2 - 1
            decision = model.decision_rows(X)
            margins = y_pm * decision
            zero = alpha <= config.sv_threshold
            free = (alpha > config.sv_threshold) & (alpha < C - config.sv_threshold)

            if not (np.all(alpha >= 0) and np.all(alpha <= C + 1e-12)):
                failures.append(f"instance {i}: alpha out of box")
            if abs(float(np.sum(alpha * y_pm))) > config.tol:
                failures.append(f"instance {i}: equality constraint violated")
            if zero.any() and margins[zero].min() < 1.0 - 10 * config.tol:
                failures.append(f"instance {i}: zero-alpha margin {margins[zero].min():.6f}")
            if free.any() and np.abs(margins[free] - 1.0).max() > 10 * config.tol:
                failures.append(f"instance {i}: free-SV margin off by "
                                f"{np.abs(margins[free] - 1.0).max():.2e}")

            K = config.kernel.matrix(X, X)
            alpha_star, b_star = dual_svc_oracle(K, y_pm, C)
            oracle_decision = K @ (alpha_star * y_pm) + b_star
            solid = (np.abs(oracle_decision) > 1e-6) & (np.abs(decision) > 1e-6)
            if not np.array_equal(decision[solid] >= 0, oracle_decision[solid] >= 0):
                failures.append(f"instance {i}: prediction disagrees with dense oracle")
            if failures:
                break
        verdict("SVC KKT suite + dense dual oracle agreement", failures)


class TestBoostingIdentities:
    """Exact-structure identities and the weight-ratio invariant. Runtime: seconds."""

    def test_identities(self):
        failures = []
        ds = synth_gaussian(240, 0.125, 3, 2.5, seed=11)

        config = BoostConfig(rounds=8, rus_minority_fraction=1.0, seed=21)
        a = rusboost_fit(ds, config)
        b = adaboost_fit(ds, BoostConfig(rounds=8, seed=21))
        if a.rounds_completed != b.rounds_completed:
            failures.append("degenerate-undersample boost differs in length")
        for t, ((ta, wa), (tb, wb)) in enumerate(zip(a.stages, b.stages)):
            if wa != wb or not np.array_equal(ta.threshold, tb.threshold) \
                    or not np.array_equal(ta.feature, tb.feature):
                failures.append(f"stage {t} differs between the two fits")

        seeded, _ = svc_seeded_rusboost_fit(
            ds,
            SeededRusConfig(
                svc=SvcConfig(C=1.0, kernel=Kernel("rbf", gamma=0.5)),
                beta=1.0,
                boost=BoostConfig(rounds=6, seed=19),
            ),
        )
        plain = rusboost_fit(ds, BoostConfig(rounds=6, seed=19))
        if not np.array_equal(seeded.stage_weights, plain.stage_weights):
            failures.append("unit-beta seeding changed the boost stages")
        for (ta, _), (tb, _) in zip(seeded.stages, plain.stages):
            if not np.array_equal(ta.threshold, tb.threshold):
                failures.append("unit-beta seeding changed a tree")
                break

        model = rusboost_fit(ds, BoostConfig(rounds=10, seed=2))
        for t, d in enumerate(model.distributions):
            if abs(float(d.sum()) - 1.0) > 1e-9:
                failures.append(f"distribution {t} sums to {d.sum()!r}")

        # Weight-ratio invariant on the 8-point hand fixture: two minority
        # points at the left, one majority point inside their cluster.
        x = np.array([0.0, 0.05, 0.1, 0.15, 1.0, 1.1, 1.2, 1.3])
        y = np.array([1, 1, 0, 0, 0, 0, 0, 0], dtype=np.int8)
        hand = Dataset(matrix=x[:, None], labels=y, row_ids=np.arange(8, dtype=np.int64))
        found = 0
        for seed in range(10):
            hand_model = rusboost_fit(
                hand, BoostConfig(rounds=6, base=CartConfig(), rus_minority_fraction=0.5,
                                  seed=seed)
            )
            for t, (tree, _w) in enumerate(hand_model.stages):
                h1 = tree.score_rows(hand.matrix)
                h_true = np.where(y == 1, h1, 1 - h1)
                eps = float(np.sum(hand_model.distributions[t] * (1 - h_true)))
                if eps >= 0.5 or eps <= EPS_CLAMP:
                    continue
                hard_wrong = h_true == 0.0
                correct = h_true > 0.5
                if not hard_wrong.any() or not correct.any():
                    continue
                found += 1
                ratio = hand_model.distributions[t + 1] / hand_model.distributions[t]
                if not ratio[hard_wrong].min() > ratio[correct].max():
                    failures.append(f"weight-ratio invariant violated (seed {seed} round {t})")
        if found < 3:
            failures.append(f"only {found} qualifying rounds found on the hand fixture")
        verdict("boosting identities + weight-ratio invariant", failures)


class TestBenchmarkB1:
    """Pinned synthetic benchmark: directional claims + frozen expected values."""

    def test_directional_and_pinned(self, b1):
        spec, report, pinned = b1
        failures = []
        bad_cells = [c for c in report["cells"] if c["status"] != "ok"]
        if bad_cells:
            failures.append(f"{len(bad_cells)} cells failed: "
                            + ", ".join(f"{c['algorithm']}/{c['seed']}" for c in bad_cells))
        if (problems := verify_report(report)):
            failures.append(f"report not self-consistent: {problems[:3]}")

        agg = {a["algorithm"]: a for a in report["aggregates"]}
        for cell in report["cells"]:
            if cell["status"] == "ok" and cell["metrics"]["g_mean"] is not None:
                identity = cell["metrics"]["g_mean"] ** 2
                product = cell["metrics"]["acc_pos"] * cell["metrics"]["acc_neg"]
                if abs(identity - product) > 1e-9:
                    failures.append(f"g_mean identity broken in {cell['algorithm']}")
                    break

        ada = agg["adaboost"]["mean_auc"]
        rusb = agg["rusboost"]["mean_auc"]
        if not 0.65 <= ada <= 0.85:
            failures.append(f"tuned adaptive-boost AUC {ada:.4f} outside [0.65, 0.85]")
        if not rusb > ada:
            failures.append(f"(a) undersampling boost AUC {rusb:.4f} <= plain {ada:.4f}")

        rf_recall = agg["random_forest"]["mean_metrics"]["acc_pos"]
        brf_recall = agg["brf"]["mean_metrics"]["acc_pos"]
        if not brf_recall > rf_recall:
            failures.append(f"(b) balanced-forest recall {brf_recall:.4f} <= plain {rf_recall:.4f}")

        beta_labels = [a.label for a in spec.algorithms if a.label.startswith("seeded_")]
        best = max(beta_labels, key=lambda L: agg[L]["mean_metrics"]["g_mean"])
        best_g = agg[best]["mean_metrics"]["g_mean"]
        plain_g = agg["rusboost"]["mean_metrics"]["g_mean"]
        if not best_g >= plain_g:
            failures.append(f"(c) best-beta G-mean {best_g:.4f} < plain {plain_g:.4f}")
        if not agg[best]["mean_auc"] >= rusb - 0.01:
            failures.append(f"(c) best-beta AUC {agg[best]['mean_auc']:.4f} < plain - 0.01")
        if best != pinned["best_beta_label"]:
            failures.append(f"best beta drifted: {best} vs pinned {pinned['best_beta_label']}")

        for label, frozen in pinned["aggregates"].items():
            got = agg[label]
            checks = (
                ("mean_auc", got["mean_auc"], frozen["mean_auc"]),
                ("mean_recall", got["mean_metrics"]["acc_pos"], frozen["mean_recall"]),
                ("mean_g_mean", got["mean_metrics"]["g_mean"], frozen["mean_g_mean"]),
            )
            for what, got_v, want_v in checks:
                if abs(got_v - want_v) > 1e-9:
                    failures.append(f"{label} {what} drifted: {got_v!r} vs pinned {want_v!r}")
        verdict("benchmark B1 directional + pinned values", failures)


class TestOverlapProperty:
    def test_overlap_vs_random_baseline(self, b1):
        spec, _report, pinned = b1
        failures = []
        train, _ = build_train_test(spec, spec.seeds[0])
        report = overlap_experiment(
            train,
            SvcConfig(C=1.0, kernel=Kernel("rbf", gamma=0.125)),
            BoostConfig(rounds=30, base=CartConfig(max_depth=3),
                        rus_minority_fraction=0.5, max_retries_per_round=10,
                        seed=spec.seeds[0]),
            runs=10,
        )
        doc = report.to_json_dict()
        print(f"\n  support-vector overlap: mean {report.mean_overlap:.4f} over 10 runs, "
              f"random baseline {report.random_baseline:.4f}; published reference "
              f"{doc['reference_overlap_percent']}% (not asserted)")
        if not report.mean_overlap >= 2 * report.random_baseline:
            failures.append(
                f"mean overlap {report.mean_overlap:.4f} < 2 x baseline "
                f"{report.random_baseline:.4f}"
            )
        frozen = pinned["overlap"]
        if report.k != frozen["k"] or abs(report.mean_overlap - frozen["mean_overlap"]) > 1e-9:
            failures.append(f"overlap drifted from pinned: k={report.k} "
                            f"mean={report.mean_overlap!r}")
        verdict("support-vector overlap property", failures)


class TestDeterminism:
    """Byte-identical reruns of every file-producing CLI command."""

    def test_cli_reruns(self, tmp_path):
        failures = []

        synth_a, synth_b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (synth_a, synth_b):
            if cli_main(["data", "synth", "--kind", "aefi", "--n", "200",
                         "--minority-fraction", "0.15", "--seed", "7",
                         "--out", str(out), "--schema-out", str(tmp_path / "schema.json")]) != 0:
                failures.append("synth command failed")
        if synth_a.read_bytes() != synth_b.read_bytes():
            failures.append("synth CSV not byte-identical")

        bundle_a, bundle_b = tmp_path / "a.bundle", tmp_path / "b.bundle"
        for out in (bundle_a, bundle_b):
            if cli_main(["train", "--algo", "rusboost", "--data", str(synth_a),
                         "--schema", str(tmp_path / "schema.json"), "--seed", "3",
                         "--params", '{"rounds": 5}', "--out", str(out)]) != 0:
                failures.append("train command failed")
        if bundle_a.read_bytes() != bundle_b.read_bytes():
            failures.append("bundle not byte-identical")

        spec = {
            "data": {"kind": "synth_gaussian", "n": 150, "minority_fraction": 0.2,
                     "dims": 3, "separation": 2.5, "seed": 5},
            "split": {"test_fraction": 0.3, "seed": 0},
            "seeds": [1, 2],
            "algorithms": [{"name": "cart"}, {"name": "rusboost", "params": {"rounds": 4}}],
        }
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(spec))
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        for out in (out1, out2):
            if cli_main(["bench", "run", "--spec", str(spec_path), "--out", str(out)]) != 0:
                failures.append("bench run failed")
        for name in ("report.json", "report.csv", "report.md"):
            if (out1 / name).read_bytes() != (out2 / name).read_bytes():
                failures.append(f"{name} not byte-identical")
        verdict("CLI determinism (byte-identical reruns)", failures)


class TestSerializationAgreement:
    """Round-trip score agreement on 100 rows for every model family."""

    def test_all_families(self):
        failures = []
        ds = synth_gaussian(160, 0.2, 4, 2.5, seed=31)
        seeded, _ = svc_seeded_rusboost_fit(
            ds,
            SeededRusConfig(svc=SvcConfig(C=1.0, kernel=Kernel("rbf", gamma=0.3)),
                            beta=2.0, boost=BoostConfig(rounds=4, seed=8)),
        )
        families = {
            "cart": cart_fit(ds, None, CartConfig(max_depth=4, seed=1)),
            "forest": random_forest_fit(ds, ForestConfig(n_trees=5, feature_subsample=2, seed=2)),
            "balanced_forest": brf_fit(ds, ForestConfig(n_trees=4, balanced=True, seed=3)),
            "boosted": rusboost_fit(ds, BoostConfig(rounds=4, seed=5)),
            "sv_seeded_boosted": seeded,
            "easy": easy_ensemble_fit(ds, EasyConfig(subsets=2, rounds_per_subset=2, seed=6)),
            "svc": svc_fit(ds, SvcConfig(C=2.0, kernel=Kernel("polynomial", degree=2,
                                                              gamma=0.5, coef0=1.0))),
            "logistic": logreg_fit(ds, LogRegConfig(iterations=100)),
            "knn": knn_fit(ds, KnnConfig(k=5)),
        }
        probe = np.random.default_rng(99).normal(size=(100, ds.dim))
        for name, model in families.items():
            restored = deserialize_model(serialize_model(ModelBundle(model=model))).model
            if not np.array_equal(model.score_rows(probe), restored.score_rows(probe)):
                failures.append(f"{name} scores changed after round-trip")
        verdict("serialization round-trip score agreement", failures)


class TestServiceContract:
    def test_contract(self, tmp_path):
        from aefikit.bundle import save_bundle
        from aefikit.data import clean, fit_encoder
        from aefikit.synth import synth_aefi

        failures = []
        schema = default_schema()
        records, _ = clean(synth_aefi(250, 0.15, schema, seed=21), schema)
        encoder = fit_encoder(records, schema)
        dataset = encoder.encode_dataset(records)
        bundle = ModelBundle(
            model=cart_fit(dataset, None, CartConfig(max_depth=4, seed=0)),
            schema=schema, encoder=encoder,
            metadata={"algorithm": "cart", "threshold": 0.5},
        )
        bundle_path = tmp_path / "model.json"
        save_bundle(bundle, bundle_path)
        app = create_app(bundle_path=str(bundle_path),
                         store_path=str(tmp_path / "records.jsonl"))
        client = TestClient(app)

        payload = {
            "vaccination_times": "4", "vaccination_dose": "0.5", "gender": "Male",
            "fever": "Normal", "local_redness_and_swelling": "Normal",
            "local_induration": "Normal", "vaccination_age": "0-258days",
            "inoculation_organization_form": "Unknown", "vaccine_name": "PPV23",
            "inoculation_route": "Oral", "inoculation_interval": "0-9days",
            "inoculation_site": "Deltoid muscle of upper arm",
        }
        resp = client.post("/api/v1/predict", json={"features": payload})
        if resp.status_code != 200:
            failures.append(f"valid predict returned {resp.status_code}")
        else:
            body = resp.json()
            if body["label"] not in ("Yes", "No"):
                failures.append(f"bad label {body['label']!r}")
            if (body["label"] == "Yes") != (body["score"] >= body["threshold"]):
                failures.append("label/score/threshold inconsistency")

        resp = client.post("/api/v1/predict",
                           json={"features": {k: v for k, v in payload.items()
                                              if k != "gender"}})
        if resp.status_code != 422 or "gender" not in resp.json().get("fields", {}):
            failures.append("missing field not reported as 422 naming the field")

        store = RecordStore(str(tmp_path / "concurrent.jsonl"))
        with ThreadPoolExecutor(max_workers=16) as pool:
            ids = list(pool.map(lambda i: store.append({"i": str(i)}), range(100)))
        if sorted(ids) != list(range(1, 101)):
            failures.append("concurrent appends did not yield 100 consecutive ids")
        verdict("service contract (predict / 422 / concurrent appends)", failures)

"""Command-line interface.

Subcommands:
    data synth   — generate a seeded synthetic dataset as CSV
    train        — fit one algorithm on a CSV and write a model bundle
    bench run    — run a benchmark spec, emit report files
    bench tune   — run the hyperparameter searches a spec declares
    bench overlap— run the support-vector overlap experiment
    serve        — start the prediction/record-entry HTTP service

Exit codes: 0 success, 1 validation error (bad arguments, bad spec,
schema violations), 2 runtime failure.

All randomness flows through ``--seed`` flags or seeds inside spec
files; a rerun with identical inputs writes byte-identical outputs.
"""

import json
import sys

import click

from .benchmark import (
    BenchmarkSpec,
    build_train_test,
    canonical_json,
    emit_report,
    get_algorithm,
    load_benchmark_spec,
    overlap_experiment,
    run_benchmark,
    tune_entry,
)
from .bundle import ModelBundle, save_bundle
from .data import clean, fit_encoder, load_csv
from .ensemble import BoostConfig
from .errors import AefiError, InputError
from .metrics import auc
from .schema import default_schema, load_schema, save_schema
from .seeding import derive_seed
from .svm import Kernel, SvcConfig
from .synth import synth_aefi, synth_gaussian, write_records_csv
from .tree import CartConfig


@click.group()
def cli():
    """Class-imbalance learning toolkit."""


@cli.group()
def data():
    """Dataset generation utilities."""


@data.command("synth")
@click.option("--kind", type=click.Choice(["gaussian", "aefi"]), required=True)
@click.option("--n", type=int, required=True)
@click.option("--minority-fraction", type=float, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--dims", type=int, default=8, show_default=True, help="gaussian only")
@click.option("--separation", type=float, default=2.0, show_default=True, help="gaussian only")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--schema-out", type=click.Path(dir_okay=False), default=None,
              help="also write the record schema (aefi only)")
def data_synth(kind, n, minority_fraction, seed, dims, separation, out, schema_out):
    """Write a seeded synthetic dataset to CSV."""
    if kind == "gaussian":
        dataset = synth_gaussian(n, minority_fraction, dims, separation, seed)
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(",".join([f"x{i}" for i in range(dims)] + ["label"]) + "\n")
            for row, label in zip(dataset.matrix, dataset.labels):
                fh.write(",".join(repr(float(v)) for v in row) + f",{int(label)}\n")
        click.echo(f"wrote {n} rows ({dataset.minority_count} minority) to {out}")
        return
    schema = default_schema()
    records = synth_aefi(n, minority_fraction, schema, seed)
    write_records_csv(records, schema, out)
    if schema_out:
        save_schema(schema, schema_out)
        click.echo(f"wrote schema to {schema_out}")
    n_minority = sum(1 for r in records if r.get(schema.target) == schema.positive_label)
    click.echo(f"wrote {n} records ({n_minority} minority) to {out}")


@cli.command("train")
@click.option("--algo", required=True, help="algorithm name from the registry")
@click.option("--data", "data_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--schema", "schema_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--test-fraction", type=float, default=0.3, show_default=True,
              help="holdout fraction used only to report AUC in the bundle metadata")
@click.option("--threshold", type=float, default=0.5, show_default=True)
@click.option("--params", "params_json", default=None,
              help="JSON object of hyperparameter overrides")
@click.option("--timestamp", default=None,
              help="training timestamp to record; omitted by default so reruns are byte-identical")
def train(algo, data_path, schema_path, out, seed, test_fraction, threshold, params_json, timestamp):
    """Fit one algorithm on a schema'd CSV and write a model bundle."""
    algorithm = get_algorithm(algo)
    schema = load_schema(schema_path) if schema_path else default_schema()
    records = load_csv(data_path, schema)
    records, report = clean(records, schema)
    if report.dropped or report.total_filled:
        click.echo(f"cleaning: filled {report.total_filled} cells, dropped {report.dropped} records")

    from .benchmark import _split_records  # record-level split avoids encoder leakage

    train_records, test_records = _split_records(records, schema, test_fraction, seed)
    encoder = fit_encoder(train_records, schema)
    train_ds = encoder.encode_dataset(train_records)
    test_ds = encoder.encode_dataset(test_records)

    params = dict(algorithm.defaults)
    if params_json:
        try:
            params.update(json.loads(params_json))
        except json.JSONDecodeError as exc:
            raise InputError(f"--params is not valid JSON: {exc}") from exc

    model = algorithm.fit(train_ds, params, derive_seed(seed, "fit", algo))
    holdout_auc = float(auc(model.score_rows(test_ds.matrix), test_ds.labels))

    bundle = ModelBundle(
        model=model,
        schema=schema,
        encoder=encoder,
        metadata={
            "algorithm": algo,
            "params": params,
            "trained_at": timestamp,
            "holdout_auc": holdout_auc,
            "seed": seed,
            "threshold": threshold,
        },
    )
    save_bundle(bundle, out)
    click.echo(f"holdout AUC {holdout_auc:.4f}; bundle written to {out}")


@cli.group()
def bench():
    """Benchmarks and experiments."""


@bench.command("run")
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--formats", default="json,csv,markdown", show_default=True)
def bench_run(spec_path, out_dir, formats):
    """Run every (algorithm, seed) cell of a benchmark spec."""
    spec = load_benchmark_spec(spec_path)
    result = run_benchmark(spec)
    written = emit_report(result, out_dir, formats=tuple(formats.split(",")))
    failed = [c for c in result["report"]["cells"] if c["status"] == "failed"]
    for cell in failed:
        click.echo(f"failed cell {cell['algorithm']}/seed={cell['seed']}: {cell['error']}", err=True)
    for path in written:
        click.echo(f"wrote {path}")
    if failed:
        click.echo(f"{len(failed)} cell(s) failed; see report", err=True)


@bench.command("tune")
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
def bench_tune(spec_path, out_path):
    """Run the searches for every spec entry marked tune=true."""
    spec = load_benchmark_spec(spec_path)
    tuned = [e for e in spec.algorithms if e.tune]
    if not tuned:
        raise InputError("no algorithm in the spec has tune=true")
    run_seed = spec.seeds[0]
    train_ds, _ = build_train_test(spec, run_seed)
    results = {}
    for entry in tuned:
        best, leaderboard = tune_entry(entry, train_ds, derive_seed(run_seed, "tune", entry.label))
        click.echo(f"[{entry.label}] best mean AUC {best.mean_auc:.4f} with {best.params}")
        for rank, trial in enumerate(leaderboard[:10], start=1):
            click.echo(f"  {rank:2d}. auc={trial.mean_auc:.4f} params={trial.params}")
        results[entry.label] = [
            {"params": t.params, "fold_aucs": list(t.fold_aucs), "mean_auc": t.mean_auc}
            for t in leaderboard
        ]
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(results))
        click.echo(f"wrote {out_path}")


@bench.command("overlap")
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--runs", type=int, default=10, show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--snapshot", type=click.Choice(["final", "max"]), default="final", show_default=True)
def bench_overlap(spec_path, runs, out_dir, snapshot):
    """Compare SVC support vectors with the heaviest boosting rows."""
    import os

    with open(spec_path, encoding="utf-8") as fh:
        doc = json.load(fh)
    spec = BenchmarkSpec.from_json_dict(
        {**doc, "algorithms": doc.get("algorithms", [{"name": "rusboost"}])}
    )
    train_ds, _ = build_train_test(spec, spec.seeds[0])

    svc_doc = doc.get("svc", {})
    svc_config = SvcConfig(
        C=float(svc_doc.get("C", 1.0)),
        kernel=Kernel(
            kind=svc_doc.get("kernel", "rbf"),
            degree=int(svc_doc.get("degree", 3)),
            gamma=float(svc_doc.get("gamma", 0.125)),
            coef0=float(svc_doc.get("coef0", 0.0)),
        ),
    )
    boost_doc = doc.get("boost", {})
    boost_config = BoostConfig(
        rounds=int(boost_doc.get("rounds", 30)),
        base=CartConfig(max_depth=int(boost_doc.get("max_depth", 3))),
        rus_minority_fraction=float(boost_doc.get("rus_minority_fraction", 0.5)),
        seed=int(boost_doc.get("seed", spec.seeds[0])),
    )

    report = overlap_experiment(train_ds, svc_config, boost_config, runs=runs, snapshot=snapshot)
    os.makedirs(out_dir, exist_ok=True)
    out_path = os.path.join(out_dir, "overlap.json")
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(report.to_json_dict()))
    click.echo(f"support vectors: {report.k} of {report.n} rows")
    click.echo(f"mean overlap over {runs} runs: {report.mean_overlap:.3f} "
               f"(random baseline {report.random_baseline:.3f})")
    click.echo(
        "reference: a published run on a private clinical dataset reported "
        f"{doc.get('reference_overlap_percent', 83.9)}% mean overlap (not asserted)"
    )
    click.echo(f"wrote {out_path}")


@cli.command("serve")
@click.option("--bundle", "bundle_path", type=click.Path(exists=True, dir_okay=False),
              envvar="AEFIKIT_BUNDLE", default=None)
@click.option("--store", "store_path", type=click.Path(dir_okay=False),
              envvar="AEFIKIT_STORE", default="records.jsonl", show_default=True)
@click.option("--host", envvar="AEFIKIT_HOST", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, envvar="AEFIKIT_PORT", default=8000, show_default=True)
@click.option("--static-dir", envvar="AEFIKIT_STATIC", type=click.Path(file_okay=False),
              default=None, help="serve a built UI from this directory")
def serve(bundle_path, store_path, host, port, static_dir):
    """Start the prediction and record-entry HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(bundle_path=bundle_path, store_path=store_path, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 130
    except InputError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except AefiError as exc:
        click.echo(f"runtime failure: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"runtime failure: {exc}", err=True)
        return 2
    except Exception as exc:  # anything unexpected is a runtime failure
        click.echo(f"runtime failure: {type(exc).__name__}: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())

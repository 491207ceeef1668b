"""HTTP backend for record entry and hospitalization-risk prediction.

The service holds one model bundle (hot-swappable via the reload
endpoint) and an append-only record store.  Requests carry feature
values as strings keyed by schema feature names; validation reports
every offending field so a form can highlight them.

Endpoints (JSON bodies, UTF-8):
    POST /api/v1/predict        -> 200 {label, score, threshold, model} | 422 | 503
    POST /api/v1/records        -> 201 {id} | 422
    GET  /api/v1/records        -> 200 {records, total}
    GET  /api/v1/model          -> 200 metadata | 503
    POST /api/v1/model/reload   -> 200 | 400
    GET  /api/v1/schema         -> 200 schema document
"""

import threading

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse

from .bundle import ModelBundle, load_bundle
from .errors import AefiError, InputError
from .schema import NUMERIC, RawRecord, RecordSchema, default_schema
from .store import RecordStore


def validate_features(schema: RecordSchema, features: dict) -> dict:
    """Per-field problems for a prediction/entry payload; empty when valid."""
    problems: dict = {}
    if not isinstance(features, dict):
        return {"features": "must be an object mapping feature names to strings"}
    known = set(schema.feature_names)
    for name in features:
        if name not in known:
            problems[name] = "not a schema feature"
    record = RawRecord({k: v for k, v in features.items() if k in known})
    for spec in schema.features:
        raw = record.get(spec.name)
        if raw is None:
            if spec.unknown_level is None:
                problems[spec.name] = "required"
            continue
        if spec.kind == NUMERIC:
            try:
                float(raw)
            except ValueError:
                problems[spec.name] = f"not a number: {raw!r}"
        else:
            if raw in spec.levels:
                continue
            if spec.kind == "binned":
                try:
                    value = float(raw)
                except ValueError:
                    value = None
                if value is not None and spec.bin_for_value(value) is not None:
                    continue
            if spec.unknown_level is None:
                problems[spec.name] = f"not a known level: {raw!r}"
    return problems


class ServiceState:
    def __init__(self, store: RecordStore, bundle: ModelBundle | None = None):
        self.store = store
        self._bundle = bundle
        self._lock = threading.Lock()

    @property
    def bundle(self) -> ModelBundle | None:
        return self._bundle

    def swap_bundle(self, bundle: ModelBundle):
        with self._lock:
            self._bundle = bundle

    def active_schema(self) -> RecordSchema:
        bundle = self._bundle
        if bundle is not None and bundle.schema is not None:
            return bundle.schema
        return default_schema()


def _validation_response(fields: dict) -> JSONResponse:
    return JSONResponse(status_code=422, content={"error": "validation", "fields": fields})


def create_app(
    bundle_path: str | None = None,
    store_path: str = "records.jsonl",
    static_dir: str | None = None,
) -> FastAPI:
    bundle = load_bundle(bundle_path) if bundle_path else None
    state = ServiceState(store=RecordStore(store_path), bundle=bundle)

    app = FastAPI(title="aefikit prediction service")
    app.state.service = state

    @app.get("/api/v1/schema")
    def get_schema():
        return state.active_schema().to_json_dict()

    @app.get("/api/v1/model")
    def get_model():
        bundle = state.bundle
        if bundle is None:
            return JSONResponse(status_code=503, content={"error": "no model loaded"})
        return {"metadata": bundle.metadata, "format_version": bundle.format_version}

    @app.post("/api/v1/model/reload")
    def reload_model(body: dict):
        path = body.get("path") if isinstance(body, dict) else None
        if not path:
            return JSONResponse(status_code=400, content={"error": "missing 'path'"})
        try:
            fresh = load_bundle(path)
        except (AefiError, OSError) as exc:
            # The previous bundle keeps serving.
            return JSONResponse(status_code=400, content={"error": str(exc)})
        state.swap_bundle(fresh)
        return {"metadata": fresh.metadata, "format_version": fresh.format_version}

    @app.post("/api/v1/predict")
    def predict(body: dict):
        bundle = state.bundle
        if bundle is None or bundle.encoder is None:
            return JSONResponse(
                status_code=503, content={"error": "no model loaded"}
            )
        features = body.get("features") if isinstance(body, dict) else None
        if features is None:
            return _validation_response({"features": "required"})
        schema = bundle.schema or bundle.encoder.schema
        problems = validate_features(schema, features)
        if problems:
            return _validation_response(problems)
        row = bundle.encoder.encode_row(RawRecord(dict(features)))
        score = float(bundle.model.score_rows(row[None, :])[0])
        threshold = bundle.threshold
        label = schema.positive_label if score >= threshold else schema.negative_label
        return {
            "label": label,
            "score": score,
            "threshold": threshold,
            "model": bundle.metadata,
        }

    @app.post("/api/v1/records")
    def add_record(body: dict):
        schema = state.active_schema()
        features = body.get("features") if isinstance(body, dict) else None
        if features is None:
            return _validation_response({"features": "required"})
        problems = validate_features(schema, features)
        outcome = body.get("outcome")
        if outcome is not None and outcome not in schema.target_levels:
            problems["outcome"] = f"must be one of {list(schema.target_levels)} or null"
        if problems:
            return _validation_response(problems)
        new_id = state.store.append(dict(features), outcome)
        return JSONResponse(status_code=201, content={"id": new_id})

    @app.get("/api/v1/records")
    def list_records(limit: int = Query(50, ge=0), offset: int = Query(0, ge=0)):
        page, total = state.store.list(limit=limit, offset=offset)
        return {
            "records": [r.to_json_dict() for r in page],
            "total": total,
        }

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app

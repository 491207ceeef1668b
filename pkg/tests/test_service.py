import hashlib
import json
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from fastapi.testclient import TestClient

from aefikit.bundle import ModelBundle, save_bundle
from aefikit.data import clean, fit_encoder
from aefikit.schema import RawRecord, default_schema
from aefikit.service import create_app, validate_features
from aefikit.store import RecordStore
from aefikit.synth import synth_aefi
from aefikit.tree import CartConfig, cart_fit

FIG4_RECORD = {
    "vaccination_times": "4",
    "vaccination_dose": "0.5",
    "gender": "Male",
    "fever": "Normal",
    "local_redness_and_swelling": "Normal",
    "local_induration": "Normal",
    "vaccination_age": "0-258days",
    "inoculation_organization_form": "Unknown",
    "vaccine_name": "PPV23",
    "inoculation_route": "Oral",
    "inoculation_interval": "0-9days",
    "inoculation_site": "Deltoid muscle of upper arm",
}


@pytest.fixture(scope="module")
def trained_bundle(tmp_path_factory):
    schema = default_schema()
    records, _ = clean(synth_aefi(300, 0.15, schema, seed=21), schema)
    encoder = fit_encoder(records, schema)
    dataset = encoder.encode_dataset(records)
    model = cart_fit(dataset, None, CartConfig(max_depth=4, seed=0))
    bundle = ModelBundle(
        model=model,
        schema=schema,
        encoder=encoder,
        metadata={"algorithm": "cart", "threshold": 0.5, "holdout_auc": None,
                  "seed": 0, "trained_at": None},
    )
    path = tmp_path_factory.mktemp("bundles") / "model.json"
    save_bundle(bundle, path)
    return bundle, path


@pytest.fixture
def client(trained_bundle, tmp_path):
    _, bundle_path = trained_bundle
    app = create_app(bundle_path=str(bundle_path), store_path=str(tmp_path / "records.jsonl"))
    return TestClient(app)


class TestSchemaEndpoint:
    def test_serves_twelve_features(self, client):
        doc = client.get("/api/v1/schema").json()
        assert len(doc["features"]) == 12
        assert doc["target"] == "hospitalization"

    def test_default_schema_without_bundle(self, tmp_path):
        app = create_app(store_path=str(tmp_path / "r.jsonl"))
        doc = TestClient(app).get("/api/v1/schema").json()
        assert [f["name"] for f in doc["features"]] == default_schema().feature_names


class TestPredict:
    def test_known_form_record(self, client):
        resp = client.post("/api/v1/predict", json={"features": FIG4_RECORD})
        assert resp.status_code == 200
        body = resp.json()
        assert body["label"] in ("Yes", "No")
        assert 0.0 <= body["score"] <= 1.0
        assert (body["label"] == "Yes") == (body["score"] >= body["threshold"])
        assert body["model"]["algorithm"] == "cart"

    def test_missing_field_names_it(self, client):
        features = {k: v for k, v in FIG4_RECORD.items() if k != "gender"}
        resp = client.post("/api/v1/predict", json={"features": features})
        assert resp.status_code == 422
        assert "gender" in resp.json()["fields"]

    def test_bad_level_names_field(self, client):
        features = {**FIG4_RECORD, "vaccine_name": "Unobtainium"}
        resp = client.post("/api/v1/predict", json={"features": features})
        assert resp.status_code == 422
        assert "vaccine_name" in resp.json()["fields"]

    def test_no_model_is_503(self, tmp_path):
        app = create_app(store_path=str(tmp_path / "r.jsonl"))
        resp = TestClient(app).post("/api/v1/predict", json={"features": FIG4_RECORD})
        assert resp.status_code == 503

    def test_score_equal_to_threshold_is_yes(self, trained_bundle, tmp_path):
        # Pin the threshold exactly at this record's score: boundary is inclusive.
        bundle, _ = trained_bundle
        row = bundle.encoder.encode_row(RawRecord(FIG4_RECORD))
        score = float(bundle.model.score_rows(row[None, :])[0])
        pinned = ModelBundle(
            model=bundle.model, schema=bundle.schema, encoder=bundle.encoder,
            metadata={**bundle.metadata, "threshold": score},
        )
        path = tmp_path / "pinned.json"
        save_bundle(pinned, path)
        app = create_app(bundle_path=str(path), store_path=str(tmp_path / "r.jsonl"))
        resp = TestClient(app).post("/api/v1/predict", json={"features": FIG4_RECORD})
        assert resp.status_code == 200
        assert resp.json()["score"] == score
        assert resp.json()["label"] == "Yes"

    def test_predict_does_not_touch_store(self, client):
        before = client.get("/api/v1/records").json()["total"]
        client.post("/api/v1/predict", json={"features": FIG4_RECORD})
        assert client.get("/api/v1/records").json()["total"] == before


class TestRecords:
    def test_first_append_gets_id_one(self, client):
        resp = client.post("/api/v1/records",
                           json={"features": FIG4_RECORD, "outcome": "Yes"})
        assert resp.status_code == 201
        assert resp.json()["id"] == 1

    def test_sequential_ids_and_listing(self, client):
        for expected in (1, 2):
            resp = client.post("/api/v1/records",
                               json={"features": FIG4_RECORD, "outcome": None})
            assert resp.json()["id"] == expected
        page = client.get("/api/v1/records", params={"limit": 1}).json()
        assert page["total"] == 2
        assert page["records"][0]["id"] == 2  # newest first

    def test_offset_beyond_end_is_empty(self, client):
        client.post("/api/v1/records", json={"features": FIG4_RECORD})
        page = client.get("/api/v1/records", params={"limit": 5, "offset": 99}).json()
        assert page["records"] == []

    def test_bad_outcome_rejected(self, client):
        resp = client.post("/api/v1/records",
                           json={"features": FIG4_RECORD, "outcome": "Maybe"})
        assert resp.status_code == 422
        assert "outcome" in resp.json()["fields"]

    def test_invalid_feature_rejected(self, client):
        features = {**FIG4_RECORD, "gender": "Robot"}
        resp = client.post("/api/v1/records", json={"features": features})
        assert resp.status_code == 422


class TestStore:
    def test_concurrent_appends_distinct_consecutive_ids(self, tmp_path):
        store = RecordStore(str(tmp_path / "records.jsonl"))
        with ThreadPoolExecutor(max_workers=16) as pool:
            ids = list(pool.map(lambda i: store.append({"i": str(i)}), range(100)))
        assert sorted(ids) == list(range(1, 101))
        with open(tmp_path / "records.jsonl") as fh:
            lines = [json.loads(line) for line in fh if line.strip()]
        assert len(lines) == 100
        assert [r["id"] for r in lines] == list(range(1, 101))

    def test_append_only_prefix_preserved(self, tmp_path):
        path = tmp_path / "records.jsonl"
        store = RecordStore(str(path))
        store.append({"a": "1"})
        store.append({"a": "2"})
        prefix = path.read_bytes()
        digest = hashlib.sha256(prefix).hexdigest()
        store.append({"a": "3"})
        assert path.read_bytes()[: len(prefix)] == prefix
        assert hashlib.sha256(path.read_bytes()[: len(prefix)]).hexdigest() == digest

    def test_reload_from_disk_continues_ids(self, tmp_path):
        path = str(tmp_path / "records.jsonl")
        store = RecordStore(path)
        store.append({"a": "1"})
        again = RecordStore(path)
        assert again.append({"a": "2"}) == 2


class TestReload:
    def test_reload_same_bundle_keeps_metadata(self, client, trained_bundle):
        _, path = trained_bundle
        before = client.get("/api/v1/model").json()
        resp = client.post("/api/v1/model/reload", json={"path": str(path)})
        assert resp.status_code == 200
        assert client.get("/api/v1/model").json() == before

    def test_reload_corrupt_keeps_serving(self, client, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{broken")
        resp = client.post("/api/v1/model/reload", json={"path": str(bad)})
        assert resp.status_code == 400
        assert client.post("/api/v1/predict", json={"features": FIG4_RECORD}).status_code == 200

    def test_reload_missing_path_field(self, client):
        assert client.post("/api/v1/model/reload", json={}).status_code == 400

    def test_predictions_switch_after_swap(self, trained_bundle, tmp_path):
        bundle, path = trained_bundle
        # second bundle with an extreme threshold always answers "No"
        alt = ModelBundle(model=bundle.model, schema=bundle.schema, encoder=bundle.encoder,
                          metadata={**bundle.metadata, "threshold": 1.0 - 1e-12})
        alt_path = tmp_path / "alt.json"
        save_bundle(alt, alt_path)
        app = create_app(bundle_path=str(path), store_path=str(tmp_path / "r.jsonl"))
        client = TestClient(app)
        first = client.post("/api/v1/predict", json={"features": FIG4_RECORD}).json()
        client.post("/api/v1/model/reload", json={"path": str(alt_path)})
        second = client.post("/api/v1/predict", json={"features": FIG4_RECORD}).json()
        assert first["threshold"] != second["threshold"]
        assert second["threshold"] == 1.0 - 1e-12


class TestValidateFeatures:
    def test_unknown_key_flagged(self):
        schema = default_schema()
        problems = validate_features(schema, {**FIG4_RECORD, "bogus": "1"})
        assert "bogus" in problems

    def test_numeric_parse_flagged(self):
        schema = default_schema()
        problems = validate_features(schema, {**FIG4_RECORD, "vaccination_dose": "much"})
        assert "vaccination_dose" in problems

    def test_clean_payload_passes(self):
        assert validate_features(default_schema(), FIG4_RECORD) == {}

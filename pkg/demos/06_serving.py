"""Train a model, bundle it, and serve predictions plus record entry.

Runs the HTTP app in-process via the test client; the same app serves
real traffic under ``aefikit serve``.
"""

import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from aefikit.bundle import ModelBundle, save_bundle
from aefikit.data import clean, fit_encoder
from aefikit.ensemble import BoostConfig, rusboost_fit
from aefikit.schema import default_schema
from aefikit.service import create_app
from aefikit.synth import synth_aefi

schema = default_schema()
records, _ = clean(synth_aefi(500, 0.1, schema, seed=3), schema)
encoder = fit_encoder(records, schema)
dataset = encoder.encode_dataset(records)
model = rusboost_fit(dataset, BoostConfig(rounds=15, seed=1))

with tempfile.TemporaryDirectory() as tmp:
    bundle_path = Path(tmp) / "model.json"
    save_bundle(
        ModelBundle(model=model, schema=schema, encoder=encoder,
                    metadata={"algorithm": "rusboost", "threshold": 0.5,
                              "seed": 1, "trained_at": None}),
        bundle_path,
    )
    app = create_app(bundle_path=str(bundle_path), store_path=str(Path(tmp) / "records.jsonl"))
    client = TestClient(app)

    form = {
        "vaccination_times": "4", "vaccination_dose": "0.5", "gender": "Male",
        "fever": "Severe", "local_redness_and_swelling": "Severe",
        "local_induration": "Mild", "vaccination_age": "0-258days",
        "inoculation_organization_form": "Unknown", "vaccine_name": "PPV23",
        "inoculation_route": "Oral", "inoculation_interval": "0-9days",
        "inoculation_site": "Deltoid muscle of upper arm",
    }
    body = client.post("/api/v1/predict", json={"features": form}).json()
    print(f"prediction: {body['label']} (score {body['score']:.3f}, "
          f"threshold {body['threshold']})")

    bad = client.post("/api/v1/predict",
                      json={"features": {**form, "vaccine_name": "Unknown brand"}})
    print(f"invalid value -> {bad.status_code}, offending fields: "
          f"{list(bad.json()['fields'])}")

    for outcome in ("Yes", None):
        resp = client.post("/api/v1/records", json={"features": form, "outcome": outcome})
        print(f"stored record id {resp.json()['id']} (outcome {outcome})")
    page = client.get("/api/v1/records", params={"limit": 10}).json()
    print(f"store now holds {page['total']} records; newest id {page['records'][0]['id']}")

print("\nfor a real server:  aefikit serve --bundle model.json --store records.jsonl "
      "--static-dir frontend/dist")

"""From raw vaccination records to an encoded train/test split.

Generates schema-shaped records, writes and re-reads them as CSV, cleans
them (missing-value fills, over-age drops), fits the encoder, and splits.
"""

import tempfile
from pathlib import Path

from aefikit import SplitSpec, default_schema, load_csv, stratified_split
from aefikit.data import clean, fit_encoder
from aefikit.schema import RawRecord
from aefikit.synth import synth_aefi, write_records_csv

schema = default_schema()
print(f"schema: {len(schema.features)} features, target {schema.target!r} "
      f"with levels {schema.target_levels}")

records = synth_aefi(n=1315, minority_fraction=0.04, schema=schema, seed=7)
with tempfile.TemporaryDirectory() as tmp:
    csv_path = Path(tmp) / "aefi.csv"
    write_records_csv(records, schema, csv_path)
    records = load_csv(csv_path, schema)
print(f"loaded {len(records)} records from CSV")

# poke some holes and an outlier to show cleaning at work
records[3] = records[3].with_value("gender", None)
records[5] = records[5].with_value("vaccination_dose", None)
records[9] = records[9].with_value("vaccination_age", "40000")

cleaned, report = clean(records, schema)
print(f"cleaning: filled {report.total_filled} cells {dict(report.filled)}, "
      f"dropped {report.dropped} over-age record(s)")

encoder = fit_encoder(cleaned, schema)
print(f"encoder: {encoder.dim} columns, e.g. {encoder.column_names[:3]} ...")

dataset = encoder.encode_dataset(cleaned)
print(f"dataset: {dataset.n} rows, {dataset.minority_count} minority "
      f"({dataset.minority_count / dataset.n:.1%})")

train, test = stratified_split(dataset, SplitSpec(test_fraction=0.29, stratified=True, seed=1))
print(f"split: train {train.n} ({train.minority_count} minority) / "
      f"test {test.n} ({test.minority_count} minority)")

row = encoder.encode_row(RawRecord({
    "vaccination_times": "4", "vaccination_dose": "0.5", "gender": "Male",
    "fever": "Normal", "local_redness_and_swelling": "Normal",
    "local_induration": "Normal", "vaccination_age": "0-258days",
    "inoculation_organization_form": "Unknown", "vaccine_name": "PPV23",
    "inoculation_route": "Oral", "inoculation_interval": "0-9days",
    "inoculation_site": "Deltoid muscle of upper arm",
}))
print(f"a single form record encodes to a {row.shape[0]}-vector, "
      f"first entries {row[:4].round(3)}")

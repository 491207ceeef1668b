"""CSV intake, record cleaning, numeric encoding, and dataset splitting.

The pipeline is load -> clean -> fit encoder -> encode -> split.  Cleaning
fills missing values per each feature's declared policy and drops records
whose vaccination age exceeds the schema threshold.  Encoding one-hot
expands categorical and binned features and z-scores numeric ones so that
distance- and margin-based learners see comparable scales; tree learners
are unaffected by the scaling.
"""

import csv
import statistics
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CleaningError,
    EncodingError,
    ParseError,
    SchemaError,
    SplitError,
)
from .schema import (
    BINNED,
    CATEGORICAL,
    FILL_MEDIAN,
    FILL_MODE,
    MAP_TO_UNKNOWN,
    NUMERIC,
    FeatureSpec,
    RawRecord,
    RecordSchema,
)
from .seeding import rng_from


def load_csv(path, schema: RecordSchema) -> list[RawRecord]:
    """Read a header-first CSV into raw records.

    Empty cells become missing values.  Numeric columns must parse as
    numbers when present; the error names the offending line and column.
    Columns outside the schema are rejected.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("file is empty: expected a header row") from None
        header = [h.strip() for h in header]

        allowed = set(schema.feature_names) | {schema.target}
        unknown = [h for h in header if h not in allowed]
        if unknown:
            raise SchemaError(f"CSV header has columns outside the schema: {unknown}")
        missing = [name for name in schema.feature_names if name not in header]
        if missing:
            raise SchemaError(f"CSV header is missing required column {missing[0]!r}")

        numeric_cols = {
            f.name for f in schema.features if f.kind == NUMERIC
        }
        records = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ParseError(
                    f"line {lineno}: expected {len(header)} fields, got {len(row)}",
                    line=lineno,
                )
            values: dict = {}
            for col, cell in zip(header, row):
                cell = cell.strip()
                if not cell:
                    values[col] = None
                    continue
                if col in numeric_cols:
                    try:
                        float(cell)
                    except ValueError:
                        raise ParseError(
                            f"line {lineno}, column {col!r}: cannot parse {cell!r} as a number",
                            line=lineno,
                            column=col,
                        ) from None
                values[col] = cell
            records.append(RawRecord(values))
    return records


@dataclass(frozen=True)
class CleanReport:
    filled: dict  # feature name -> count of filled cells
    dropped: int

    @property
    def total_filled(self) -> int:
        return sum(self.filled.values())


def _numeric_value(record: RawRecord, name: str) -> float | None:
    v = record.get(name)
    if v is None:
        return None
    try:
        return float(v)
    except ValueError:
        return None


def _over_age(record: RawRecord, schema: RecordSchema) -> bool:
    if schema.age_feature not in schema.feature_names:
        return False
    raw = record.get(schema.age_feature)
    if raw is None:
        return False
    spec = schema.feature(schema.age_feature)
    num = _numeric_value(record, schema.age_feature)
    if num is not None:
        return num > schema.max_age_days
    # A bin label is over-age only if even its lower bound exceeds the cap.
    for lo, hi, label in spec.intervals():
        if label == raw:
            return lo > schema.max_age_days
    return False


def clean(records: list[RawRecord], schema: RecordSchema) -> tuple[list[RawRecord], CleanReport]:
    """Fill missing values and drop over-age records.

    Fill values (mode / median) are computed over the records that survive
    the age cut, so a dropped outlier cannot skew them.
    """
    kept = [r for r in records if not _over_age(r, schema)]
    dropped = len(records) - len(kept)

    fills: dict = {}
    for spec in schema.features:
        if not any(r.get(spec.name) is None for r in kept):
            continue
        if spec.missing_policy == MAP_TO_UNKNOWN:
            fills[spec.name] = spec.unknown_level
        elif spec.missing_policy == FILL_MEDIAN:
            values = [v for r in kept if (v := _numeric_value(r, spec.name)) is not None]
            if not values:
                raise CleaningError(
                    f"feature {spec.name!r}: no values present to take a median from"
                )
            fills[spec.name] = repr(statistics.median(values))
        else:  # FILL_MODE
            observed = [v for r in kept if (v := r.get(spec.name)) is not None]
            if not observed:
                raise CleaningError(
                    f"feature {spec.name!r}: all values missing, no mode exists"
                )
            counts = Counter(observed)
            top = max(counts.values())
            # Deterministic tie-break: first-observed among the most common.
            fills[spec.name] = next(v for v in observed if counts[v] == top)

    filled_counts: dict = {}
    cleaned = []
    for record in kept:
        out = record
        for spec in schema.features:
            if out.get(spec.name) is None:
                out = out.with_value(spec.name, fills[spec.name])
                filled_counts[spec.name] = filled_counts.get(spec.name, 0) + 1
        cleaned.append(out)
    return cleaned, CleanReport(filled=filled_counts, dropped=dropped)


@dataclass(frozen=True)
class Encoder:
    """Fitted record-to-vector encoding.

    Categorical and binned features map to one-hot blocks over their
    declared levels; numeric features are z-scored with the population
    standard deviation (sigma=1 substituted when sigma=0 so constant
    columns encode to zero).
    """

    schema: RecordSchema
    numeric_stats: dict  # name -> (mean, std)
    column_names: tuple[str, ...]

    @property
    def dim(self) -> int:
        return len(self.column_names)

    def _feature_columns(self, spec: FeatureSpec) -> int:
        return 1 if spec.kind == NUMERIC else len(spec.levels)

    def encode_row(self, record: RawRecord) -> np.ndarray:
        """Deterministically encode one record's features to a d-vector."""
        self.schema.validate_record(record)
        out = np.zeros(self.dim, dtype=np.float64)
        col = 0
        for spec in self.schema.features:
            raw = record.get(spec.name)
            if raw is None:
                raise EncodingError(f"feature {spec.name!r} is missing; clean records first")
            width = self._feature_columns(spec)
            if spec.kind == NUMERIC:
                try:
                    value = float(raw)
                except ValueError:
                    raise EncodingError(
                        f"feature {spec.name!r}: cannot parse {raw!r} as a number"
                    ) from None
                mean, std = self.numeric_stats[spec.name]
                out[col] = (value - mean) / std
            else:
                level = self._resolve_level(spec, raw)
                out[col + spec.levels.index(level)] = 1.0
            col += width
        return out

    def _resolve_level(self, spec: FeatureSpec, raw: str) -> str:
        if raw in spec.levels:
            return raw
        if spec.kind == BINNED:
            try:
                value = float(raw)
            except ValueError:
                value = None
            if value is not None:
                label = spec.bin_for_value(value)
                if label is not None:
                    return label
        if spec.unknown_level is not None:
            return spec.unknown_level
        raise EncodingError(
            f"feature {spec.name!r}: value {raw!r} is not a declared level "
            "and no Unknown level exists"
        )

    def encode_label(self, raw: str) -> int:
        if raw == self.schema.positive_label:
            return 1
        if raw == self.schema.negative_label:
            return 0
        raise EncodingError(
            f"target {self.schema.target!r}: value {raw!r} is not one of "
            f"{self.schema.target_levels}"
        )

    def encode_dataset(self, records: list[RawRecord]) -> "Dataset":
        """Encode labelled records into a dataset; row ids follow input order."""
        if not records:
            raise EncodingError("no records to encode")
        matrix = np.empty((len(records), self.dim), dtype=np.float64)
        labels = np.empty(len(records), dtype=np.int8)
        for i, record in enumerate(records):
            raw_label = record.get(self.schema.target)
            if raw_label is None:
                raise EncodingError(f"record {i} is missing the target label")
            matrix[i] = self.encode_row(record)
            labels[i] = self.encode_label(raw_label)
        return Dataset(
            matrix=matrix,
            labels=labels,
            row_ids=np.arange(len(records), dtype=np.int64),
            schema=self.schema,
            encoder=self,
        )

    def to_json_dict(self) -> dict:
        return {
            "schema": self.schema.to_json_dict(),
            "numeric_stats": {k: [v[0], v[1]] for k, v in self.numeric_stats.items()},
            "column_names": list(self.column_names),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Encoder":
        return cls(
            schema=RecordSchema.from_json_dict(doc["schema"]),
            numeric_stats={k: (float(v[0]), float(v[1])) for k, v in doc["numeric_stats"].items()},
            column_names=tuple(doc["column_names"]),
        )


def fit_encoder(records: list[RawRecord], schema: RecordSchema) -> Encoder:
    """Fit one-hot tables and z-score parameters on cleaned records."""
    if not records:
        raise EncodingError("cannot fit an encoder on an empty record list")
    numeric_stats = {}
    column_names: list[str] = []
    for spec in schema.features:
        if spec.kind == NUMERIC:
            values = []
            for i, record in enumerate(records):
                raw = record.get(spec.name)
                if raw is None:
                    raise EncodingError(
                        f"record {i}: feature {spec.name!r} missing; clean records first"
                    )
                try:
                    values.append(float(raw))
                except ValueError:
                    raise EncodingError(
                        f"record {i}: feature {spec.name!r} value {raw!r} is not numeric"
                    ) from None
            arr = np.asarray(values, dtype=np.float64)
            mean = float(arr.mean())
            std = float(arr.std())  # population form: deterministic, no n-1 edge case
            if std == 0.0:
                std = 1.0
            numeric_stats[spec.name] = (mean, std)
            column_names.append(spec.name)
        else:
            column_names.extend(f"{spec.name}={level}" for level in spec.levels)
    return Encoder(
        schema=schema,
        numeric_stats=numeric_stats,
        column_names=tuple(column_names),
    )


@dataclass(frozen=True)
class Dataset:
    """Encoded feature matrix with binary labels and stable row ids.

    Label 1 is the minority/adverse class ("Yes"), 0 the majority ("No").
    Arrays are frozen after construction; datasets are safe to share.
    """

    matrix: np.ndarray
    labels: np.ndarray
    row_ids: np.ndarray
    schema: RecordSchema | None = None
    encoder: Encoder | None = None

    def __post_init__(self):
        matrix = np.ascontiguousarray(self.matrix, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int8)
        row_ids = np.asarray(self.row_ids, dtype=np.int64)
        if matrix.ndim != 2:
            raise SchemaError("dataset matrix must be 2-D")
        n = matrix.shape[0]
        if labels.shape != (n,) or row_ids.shape != (n,):
            raise SchemaError("matrix, labels, and row_ids must agree in length")
        if not np.all(np.isfinite(matrix)):
            raise SchemaError("dataset matrix contains non-finite values")
        if n and not np.all((labels == 0) | (labels == 1)):
            raise SchemaError("labels must be 0 or 1")
        for name, arr in (("matrix", matrix), ("labels", labels), ("row_ids", row_ids)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def minority_count(self) -> int:
        return int(np.sum(self.labels == 1))

    @property
    def majority_count(self) -> int:
        return int(np.sum(self.labels == 0))

    def subset(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(
            matrix=self.matrix[indices],
            labels=self.labels[indices],
            row_ids=self.row_ids[indices],
            schema=self.schema,
            encoder=self.encoder,
        )


@dataclass(frozen=True)
class SplitSpec:
    test_fraction: float
    stratified: bool = True
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.test_fraction < 1.0:
            raise SplitError("test_fraction must lie strictly between 0 and 1")


def stratified_split(dataset: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Partition rows into (train, test), per-class when stratified.

    Per-class test counts are ``round(class_count * test_fraction)``;
    each class must keep at least one row on each side.
    """
    rng = rng_from(spec.seed, "split")
    n = dataset.n
    if n < 2:
        raise SplitError("need at least two rows to split")

    test_idx: list[int] = []
    if spec.stratified:
        for cls in (0, 1):
            members = np.flatnonzero(dataset.labels == cls)
            if members.size == 0:
                raise SplitError("stratified split requires both classes present")
            n_test = int(round(members.size * spec.test_fraction))
            if n_test < 1 or n_test >= members.size:
                raise SplitError(
                    f"class {cls} has {members.size} rows: test_fraction "
                    f"{spec.test_fraction} leaves an empty side"
                )
            picked = rng.permutation(members)[:n_test]
            test_idx.extend(int(i) for i in picked)
    else:
        n_test = int(round(n * spec.test_fraction))
        if n_test < 1 or n_test >= n:
            raise SplitError("test_fraction leaves an empty side")
        picked = rng.permutation(n)[:n_test]
        test_idx.extend(int(i) for i in picked)

    test_mask = np.zeros(n, dtype=bool)
    test_mask[test_idx] = True
    train = dataset.subset(np.flatnonzero(~test_mask))
    test = dataset.subset(np.flatnonzero(test_mask))
    return train, test

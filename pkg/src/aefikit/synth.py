"""Seeded synthetic data: Gaussian benchmark clouds and schema-shaped records.

The Gaussian generator produces two isotropic clouds at a controlled mean
separation for benchmarking.  The record generator emits raw
schema-conformant vaccination records whose category frequencies differ
by class according to the fixed tables below, so the minority class is
learnable but not trivially separable.
"""

import numpy as np

from .data import Dataset
from .errors import GenerationError
from .schema import (
    AGE_BINS,
    BINNED,
    CATEGORICAL,
    INTERVAL_BINS,
    NUMERIC,
    ORG_FORMS,
    RawRecord,
    RecordSchema,
    ROUTES,
    SITES,
    VACCINE_NAMES,
    default_schema,
    parse_interval_label,
)
from .seeding import rng_from


def _check_fraction(n: int, minority_fraction: float):
    if not 0.0 < minority_fraction < 0.5:
        raise GenerationError("minority_fraction must lie in (0, 0.5)")
    if n * minority_fraction < 2:
        raise GenerationError(
            f"n={n} at minority_fraction={minority_fraction} yields fewer than 2 minority rows"
        )


def synth_gaussian(
    n: int,
    minority_fraction: float,
    dims: int,
    separation: float,
    seed: int,
) -> Dataset:
    """Two isotropic unit-variance Gaussian clouds with means ``separation`` apart.

    The majority cloud sits at the origin; the minority mean is displaced
    along the all-ones direction.  ``separation = 0`` makes the classes
    indistinguishable.
    """
    if dims < 1:
        raise GenerationError("dims must be at least 1")
    if separation < 0:
        raise GenerationError("separation must be nonnegative")
    _check_fraction(n, minority_fraction)

    rng = rng_from(seed, "synth_gaussian")
    n_min = int(round(n * minority_fraction))
    n_maj = n - n_min
    offset = separation / np.sqrt(dims)

    matrix = rng.standard_normal((n, dims))
    matrix[n_maj:] += offset
    labels = np.concatenate([np.zeros(n_maj, dtype=np.int8), np.ones(n_min, dtype=np.int8)])

    perm = rng.permutation(n)
    return Dataset(
        matrix=matrix[perm],
        labels=labels[perm],
        row_ids=np.arange(n, dtype=np.int64),
    )


# Class-conditional tables for record synthesis.  Key: feature name;
# value: (levels, majority probabilities, minority probabilities).
# Probabilities are normalized at draw time.
CLASS_TABLES = {
    "gender": (("Male", "Female"), (0.52, 0.48), (0.56, 0.44)),
    "fever": (("Normal", "Mild", "Severe"), (0.80, 0.15, 0.05), (0.30, 0.30, 0.40)),
    "local_redness_and_swelling": (
        ("Normal", "Mild", "Severe"), (0.85, 0.10, 0.05), (0.50, 0.28, 0.22),
    ),
    "local_induration": (
        ("Normal", "Mild", "Severe"), (0.88, 0.09, 0.03), (0.55, 0.27, 0.18),
    ),
    "vaccination_age": (AGE_BINS, (0.35, 0.25, 0.20, 0.12, 0.08), (0.15, 0.18, 0.22, 0.22, 0.23)),
    "inoculation_organization_form": (
        ORG_FORMS, (0.55, 0.25, 0.12, 0.08), (0.40, 0.30, 0.15, 0.15),
    ),
    "vaccine_name": (
        VACCINE_NAMES,
        (0.10, 0.18, 0.22, 0.15, 0.10, 0.08, 0.12, 0.05),
        (0.05, 0.10, 0.30, 0.10, 0.15, 0.12, 0.08, 0.10),
    ),
    "inoculation_route": (ROUTES, (0.55, 0.25, 0.12, 0.08), (0.60, 0.25, 0.05, 0.10)),
    "inoculation_interval": (
        INTERVAL_BINS, (0.12, 0.28, 0.30, 0.20, 0.10), (0.30, 0.30, 0.20, 0.12, 0.08),
    ),
    "inoculation_site": (SITES, (0.55, 0.20, 0.15, 0.10), (0.50, 0.25, 0.20, 0.05)),
}

# Numeric features: (support values, majority probs, minority probs).
NUMERIC_TABLES = {
    "vaccination_times": ((1, 2, 3, 4), (0.40, 0.30, 0.20, 0.10), (0.15, 0.20, 0.30, 0.35)),
    "vaccination_dose": ((0.25, 0.5, 1.0), (0.30, 0.50, 0.20), (0.15, 0.45, 0.40)),
}


def _draw_level(rng, levels, probs) -> str:
    p = np.asarray(probs, dtype=float)
    p = p / p.sum()
    return str(levels[rng.choice(len(levels), p=p)])


def _draw_binned_raw(rng, spec, label: str) -> str:
    """Emit a raw day count uniform inside the labelled interval."""
    bounds = parse_interval_label(label)
    if bounds is None:
        return label
    lo, hi = int(bounds[0]), int(bounds[1])
    return str(int(rng.integers(lo, hi + 1)))


def synth_aefi(
    n: int,
    minority_fraction: float,
    schema: RecordSchema | None = None,
    seed: int = 0,
) -> list[RawRecord]:
    """Schema-conformant raw records with class-dependent category frequencies.

    Binned features are emitted as raw day counts inside a drawn bin, the
    way field data would arrive, so the full load -> clean -> encode path
    is exercised.
    """
    schema = schema or default_schema()
    _check_fraction(n, minority_fraction)
    rng = rng_from(seed, "synth_aefi")

    n_min = int(round(n * minority_fraction))
    labels = np.zeros(n, dtype=np.int8)
    labels[:n_min] = 1
    labels = labels[rng.permutation(n)]

    records = []
    for i in range(n):
        is_minority = bool(labels[i])
        values: dict = {}
        for spec in schema.features:
            if spec.kind == NUMERIC:
                if spec.name in NUMERIC_TABLES:
                    support, p_maj, p_min = NUMERIC_TABLES[spec.name]
                    p = p_min if is_minority else p_maj
                    pick = support[int(rng.choice(len(support), p=np.asarray(p) / np.sum(p)))]
                    values[spec.name] = repr(float(pick)) if isinstance(pick, float) else str(pick)
                else:
                    values[spec.name] = repr(float(np.round(rng.normal(1.0, 0.3), 3)))
            else:
                if spec.name in CLASS_TABLES:
                    levels, p_maj, p_min = CLASS_TABLES[spec.name]
                    label = _draw_level(rng, levels, p_min if is_minority else p_maj)
                else:
                    label = str(spec.levels[int(rng.integers(len(spec.levels)))])
                if spec.kind == BINNED:
                    values[spec.name] = _draw_binned_raw(rng, spec, label)
                else:
                    values[spec.name] = label
        values[schema.target] = schema.positive_label if is_minority else schema.negative_label
        records.append(RawRecord(values))
    return records


def write_records_csv(records: list[RawRecord], schema: RecordSchema, path):
    """Write raw records as a header-first CSV (empty cell = missing)."""
    import csv as _csv

    columns = schema.feature_names + [schema.target]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for record in records:
            writer.writerow([record.get(c) or "" for c in columns])

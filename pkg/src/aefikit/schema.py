"""Record schema for vaccination-reaction data.

A schema is an ordered list of feature specifications plus a binary
target.  Features come in three kinds:

* ``numeric`` — a real value, optionally annotated with a unit;
* ``categorical`` — an ordered list of levels, optionally including an
  explicit "Unknown" level that absorbs unseen or missing values;
* ``binned`` — ordered interval labels such as ``"0-258days"``; raw data
  may carry either a bin label or a plain number that falls inside one of
  the intervals.

The default schema mirrors a twelve-field childhood-vaccination entry
form with a yes/no hospitalization outcome.
"""

import json
import re
from dataclasses import dataclass, field

from .errors import SchemaError

NUMERIC = "numeric"
CATEGORICAL = "categorical"
BINNED = "binned"

FILL_MODE = "fill_mode"
FILL_MEDIAN = "fill_median"
MAP_TO_UNKNOWN = "map_to_unknown"

_KINDS = (NUMERIC, CATEGORICAL, BINNED)
_POLICIES = (FILL_MODE, FILL_MEDIAN, MAP_TO_UNKNOWN)

_INTERVAL_RE = re.compile(r"^\s*(-?\d+(?:\.\d+)?)\s*-\s*(-?\d+(?:\.\d+)?)")


def parse_interval_label(label: str) -> tuple[float, float] | None:
    """Extract (lo, hi) from labels like ``"259-516days"``; None if not interval-shaped."""
    m = _INTERVAL_RE.match(label)
    if not m:
        return None
    lo, hi = float(m.group(1)), float(m.group(2))
    if lo > hi:
        return None
    return lo, hi


@dataclass(frozen=True)
class FeatureSpec:
    name: str
    kind: str
    levels: tuple[str, ...] = ()
    unit: str | None = None
    unknown_level: str | None = None
    missing_policy: str = FILL_MODE

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise SchemaError("feature name must be non-empty")
        if self.kind not in _KINDS:
            raise SchemaError(f"unknown feature kind {self.kind!r} for {self.name!r}")
        if self.missing_policy not in _POLICIES:
            raise SchemaError(
                f"unknown missing policy {self.missing_policy!r} for {self.name!r}"
            )
        if self.kind == NUMERIC:
            if self.levels:
                raise SchemaError(f"numeric feature {self.name!r} must not declare levels")
            if self.missing_policy == MAP_TO_UNKNOWN:
                raise SchemaError(
                    f"numeric feature {self.name!r} cannot map missing values to a level"
                )
        else:
            if not self.levels:
                raise SchemaError(f"feature {self.name!r} must declare at least one level")
            if len(set(self.levels)) != len(self.levels):
                raise SchemaError(f"duplicate levels in feature {self.name!r}")
            if self.missing_policy == FILL_MEDIAN:
                raise SchemaError(
                    f"feature {self.name!r} is not numeric; median fill is undefined"
                )
            if self.missing_policy == MAP_TO_UNKNOWN:
                if self.unknown_level is None:
                    raise SchemaError(
                        f"feature {self.name!r} maps missing values to a level "
                        "but declares no unknown_level"
                    )
            if self.unknown_level is not None and self.unknown_level not in self.levels:
                raise SchemaError(
                    f"unknown_level {self.unknown_level!r} is not among the levels "
                    f"of {self.name!r}"
                )
        if self.kind == BINNED:
            self._check_intervals()

    def _check_intervals(self):
        bounds = [parse_interval_label(lv) for lv in self.levels if lv != self.unknown_level]
        if any(b is None for b in bounds):
            # Opaque ordered labels; nothing further to verify.
            return
        for (lo0, hi0), (lo1, hi1) in zip(bounds, bounds[1:]):
            if lo1 <= hi0:
                raise SchemaError(
                    f"binned feature {self.name!r} has overlapping or unordered "
                    f"intervals near {hi0:g} / {lo1:g}"
                )

    def intervals(self) -> list[tuple[float, float, str]]:
        """(lo, hi, label) triples for parseable bin labels, in declared order."""
        out = []
        for lv in self.levels:
            if lv == self.unknown_level:
                continue
            b = parse_interval_label(lv)
            if b is not None:
                out.append((b[0], b[1], lv))
        return out

    def bin_for_value(self, value: float) -> str | None:
        """Label of the first interval whose upper bound covers ``value``."""
        ivs = self.intervals()
        if not ivs:
            return None
        if value < ivs[0][0]:
            return None
        for lo, hi, label in ivs:
            if value <= hi:
                return label
        return None


@dataclass(frozen=True)
class RawRecord:
    """One data row: feature name -> raw string, or None when missing."""

    values: dict

    def get(self, name: str) -> str | None:
        v = self.values.get(name)
        if v is None:
            return None
        v = str(v).strip()
        return v if v else None

    def with_value(self, name: str, value: str | None) -> "RawRecord":
        values = dict(self.values)
        values[name] = value
        return RawRecord(values)


@dataclass(frozen=True)
class RecordSchema:
    features: tuple[FeatureSpec, ...]
    target: str = "hospitalization"
    target_levels: tuple[str, str] = ("Yes", "No")
    max_age_days: int = 6570
    age_feature: str = "vaccination_age"

    def __post_init__(self):
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise SchemaError("feature names must be unique")
        if self.target in names:
            raise SchemaError("target name collides with a feature name")
        if self.max_age_days <= 0:
            raise SchemaError("max_age_days must be positive")
        if len(self.target_levels) != 2 or self.target_levels[0] == self.target_levels[1]:
            raise SchemaError("target must have exactly two distinct levels")

    @property
    def feature_names(self) -> list[str]:
        return [f.name for f in self.features]

    def feature(self, name: str) -> FeatureSpec:
        for f in self.features:
            if f.name == name:
                return f
        raise SchemaError(f"no feature named {name!r}")

    @property
    def positive_label(self) -> str:
        """Level encoded as 1 (the minority / adverse outcome)."""
        return self.target_levels[0]

    @property
    def negative_label(self) -> str:
        return self.target_levels[1]

    def validate_record(self, record: RawRecord, require_target: bool = False):
        """Raise SchemaError if the record carries keys outside the schema."""
        allowed = set(self.feature_names) | {self.target}
        extra = set(record.values) - allowed
        if extra:
            raise SchemaError(f"record carries unknown fields: {sorted(extra)}")
        if require_target and record.get(self.target) is None:
            raise SchemaError(f"record is missing the target {self.target!r}")

    def to_json_dict(self) -> dict:
        return {
            "features": [
                {
                    "name": f.name,
                    "kind": f.kind,
                    "levels": list(f.levels),
                    "unit": f.unit,
                    "unknown_level": f.unknown_level,
                    "missing_policy": f.missing_policy,
                }
                for f in self.features
            ],
            "target": self.target,
            "target_levels": list(self.target_levels),
            "max_age_days": self.max_age_days,
            "age_feature": self.age_feature,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "RecordSchema":
        try:
            features = tuple(
                FeatureSpec(
                    name=fd["name"],
                    kind=fd["kind"],
                    levels=tuple(fd.get("levels") or ()),
                    unit=fd.get("unit"),
                    unknown_level=fd.get("unknown_level"),
                    missing_policy=fd.get("missing_policy", FILL_MODE),
                )
                for fd in doc["features"]
            )
            return cls(
                features=features,
                target=doc.get("target", "hospitalization"),
                target_levels=tuple(doc.get("target_levels", ("Yes", "No"))),
                max_age_days=doc.get("max_age_days", 6570),
                age_feature=doc.get("age_feature", "vaccination_age"),
            )
        except KeyError as exc:
            raise SchemaError(f"schema document missing key {exc}") from exc


def load_schema(path) -> RecordSchema:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"schema file is not valid JSON: {exc}") from exc
    return RecordSchema.from_json_dict(doc)


def save_schema(schema: RecordSchema, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(schema.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


REACTION_LEVELS = ("Normal", "Mild", "Severe")

AGE_BINS = (
    "0-258days",
    "259-516days",
    "517-1032days",
    "1033-2064days",
    "2065-6570days",
)

INTERVAL_BINS = (
    "0-9days",
    "10-30days",
    "31-90days",
    "91-365days",
    "366-3650days",
)

ORG_FORMS = ("Fixed site", "Door-to-door", "Temporary site", "Unknown")

VACCINE_NAMES = ("BCG", "HepB", "DTP", "MMR", "JE", "MenA", "OPV", "PPV23")

ROUTES = ("Intramuscular", "Subcutaneous", "Oral", "Intradermal")

SITES = ("Deltoid muscle of upper arm", "Buttock", "Thigh", "Mouth")


def default_schema() -> RecordSchema:
    """The twelve-field vaccination-reaction entry schema."""
    return RecordSchema(
        features=(
            FeatureSpec("vaccination_times", NUMERIC, unit="count",
                        missing_policy=FILL_MEDIAN),
            FeatureSpec("vaccination_dose", NUMERIC, unit="ml",
                        missing_policy=FILL_MEDIAN),
            FeatureSpec("gender", CATEGORICAL, levels=("Male", "Female")),
            FeatureSpec("fever", CATEGORICAL, levels=REACTION_LEVELS),
            FeatureSpec("local_redness_and_swelling", CATEGORICAL, levels=REACTION_LEVELS),
            FeatureSpec("local_induration", CATEGORICAL, levels=REACTION_LEVELS),
            FeatureSpec("vaccination_age", BINNED, levels=AGE_BINS),
            FeatureSpec("inoculation_organization_form", CATEGORICAL, levels=ORG_FORMS,
                        unknown_level="Unknown", missing_policy=MAP_TO_UNKNOWN),
            FeatureSpec("vaccine_name", CATEGORICAL, levels=VACCINE_NAMES),
            FeatureSpec("inoculation_route", CATEGORICAL, levels=ROUTES),
            FeatureSpec("inoculation_interval", BINNED, levels=INTERVAL_BINS),
            FeatureSpec("inoculation_site", CATEGORICAL, levels=SITES),
        ),
        target="hospitalization",
        target_levels=("Yes", "No"),
        max_age_days=6570,
        age_feature="vaccination_age",
    )

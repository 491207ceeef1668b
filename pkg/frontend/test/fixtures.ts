/**
 * Canned documents replayed by the stub server: the default schema as the
 * real backend serves it, and a complete form record for request tests.
 */

import type { SchemaDoc } from "../src/api.js";

export const DEFAULT_SCHEMA: SchemaDoc = {
  "features": [
    {
      "name": "vaccination_times",
      "kind": "numeric",
      "levels": [],
      "unit": "count",
      "unknown_level": null,
      "missing_policy": "fill_median"
    },
    {
      "name": "vaccination_dose",
      "kind": "numeric",
      "levels": [],
      "unit": "ml",
      "unknown_level": null,
      "missing_policy": "fill_median"
    },
    {
      "name": "gender",
      "kind": "categorical",
      "levels": [
        "Male",
        "Female"
      ],
      "unit": null,
      "unknown_level": null,
      "missing_policy": "fill_mode"
    },
    {
      "name": "fever",
      "kind": "categorical",
      "levels": [
        "Normal",
        "Mild",
        "Severe"
      ],
      "unit": null,
      "unknown_level": null,
      "missing_policy": "fill_mode"
    },
    {
      "name": "local_redness_and_swelling",
      "kind": "categorical",
      "levels": [
        "Normal",
        "Mild",
        "Severe"
      ],
      "unit": null,
      "unknown_level": null,
      "missing_policy": "fill_mode"
    },
    {
      "name": "local_induration",
      "kind": "categorical",
      "levels": [
        "Normal",
        "Mild",
        "Severe"
      ],
      "unit": null,
      "unknown_level": null,
      "missing_policy": "fill_mode"
    },
    {
      "name": "vaccination_age",
      "kind": "binned",
      "levels": [
        "0-258days",
        "259-516days",
        "517-1032days",
        "1033-2064days",
        "2065-6570days"
      ],
      "unit": null,
      "unknown_level": null,
      "missing_policy": "fill_mode"
    },
    {
      "name": "inoculation_organization_form",
      "kind": "categorical",
      "levels": [
        "Fixed site",
        "Door-to-door",
        "Temporary site",
        "Unknown"
      ],
      "unit": null,
      "unknown_level": "Unknown",
      "missing_policy": "map_to_unknown"
    },
    {
      "name": "vaccine_name",
      "kind": "categorical",
      "levels": [
        "BCG",
        "HepB",
        "DTP",
        "MMR",
        "JE",
        "MenA",
        "OPV",
        "PPV23"
      ],
      "unit": null,
      "unknown_level": null,
      "missing_policy": "fill_mode"
    },
    {
      "name": "inoculation_route",
      "kind": "categorical",
      "levels": [
        "Intramuscular",
        "Subcutaneous",
        "Oral",
        "Intradermal"
      ],
      "unit": null,
      "unknown_level": null,
      "missing_policy": "fill_mode"
    },
    {
      "name": "inoculation_interval",
      "kind": "binned",
      "levels": [
        "0-9days",
        "10-30days",
        "31-90days",
        "91-365days",
        "366-3650days"
      ],
      "unit": null,
      "unknown_level": null,
      "missing_policy": "fill_mode"
    },
    {
      "name": "inoculation_site",
      "kind": "categorical",
      "levels": [
        "Deltoid muscle of upper arm",
        "Buttock",
        "Thigh",
        "Mouth"
      ],
      "unit": null,
      "unknown_level": null,
      "missing_policy": "fill_mode"
    }
  ],
  "target": "hospitalization",
  "target_levels": [
    "Yes",
    "No"
  ],
  "max_age_days": 6570,
  "age_feature": "vaccination_age"
};

export const FORM_RECORD: Record<string, string> = {
  vaccination_times: "4",
  vaccination_dose: "0.5",
  gender: "Male",
  fever: "Normal",
  local_redness_and_swelling: "Normal",
  local_induration: "Normal",
  vaccination_age: "0-258days",
  inoculation_organization_form: "Unknown",
  vaccine_name: "PPV23",
  inoculation_route: "Oral",
  inoculation_interval: "0-9days",
  inoculation_site: "Deltoid muscle of upper arm",
};

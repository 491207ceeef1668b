"""Portable model bundles: schema + encoder + model + operating metadata.

Bundles serialize to canonical JSON (sorted keys, shortest round-trip
float rendering, no NaN), so serializing the same bundle twice yields
identical bytes and a deserialized model scores bit-identically to the
original.  The CLI trainer and the prediction service share this format.
"""

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .data import Encoder
from .ensemble import BoostConfig, BoostedModel, EasyConfig, EasyModel, ForestConfig, ForestModel
from .errors import BundleError, VersionError
from .linear import KnnConfig, KnnModel, LogRegConfig, LogRegModel
from .schema import RecordSchema
from .svm import Kernel, SvcConfig, SvcModel
from .tree import CartConfig, CartTree

FORMAT_VERSION = 1


@dataclass(frozen=True)
class ModelBundle:
    model: object
    schema: RecordSchema | None = None
    encoder: Encoder | None = None
    metadata: dict = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    @property
    def threshold(self) -> float:
        return float(self.metadata.get("threshold", 0.5))


def _floats(arr) -> list:
    return np.asarray(arr, dtype=np.float64).tolist()


def _ints(arr) -> list:
    return [int(v) for v in np.asarray(arr).ravel()]


def _cart_config_doc(config: CartConfig) -> dict:
    return asdict(config)


def _cart_config_from(doc: dict) -> CartConfig:
    return CartConfig(**doc)


def _tree_doc(tree: CartTree) -> dict:
    return {
        "feature": _ints(tree.feature),
        "threshold": _floats(tree.threshold),
        "left": _ints(tree.left),
        "right": _ints(tree.right),
        "probs": _floats(tree.probs),
        "dim": tree.dim,
        "config": _cart_config_doc(tree.config),
    }


def _tree_from(doc: dict) -> CartTree:
    return CartTree(
        feature=doc["feature"],
        threshold=doc["threshold"],
        left=doc["left"],
        right=doc["right"],
        probs=doc["probs"],
        dim=doc["dim"],
        config=_cart_config_from(doc["config"]),
    )


def _boost_config_doc(config: BoostConfig) -> dict:
    return {
        "rounds": config.rounds,
        "base": _cart_config_doc(config.base),
        "rus_minority_fraction": config.rus_minority_fraction,
        "max_retries_per_round": config.max_retries_per_round,
        "seed": config.seed,
    }


def _boost_config_from(doc: dict) -> BoostConfig:
    return BoostConfig(
        rounds=doc["rounds"],
        base=_cart_config_from(doc["base"]),
        rus_minority_fraction=doc["rus_minority_fraction"],
        max_retries_per_round=doc["max_retries_per_round"],
        seed=doc["seed"],
    )


def _boosted_doc(model: BoostedModel) -> dict:
    return {
        "stages": [
            {"tree": _tree_doc(tree), "weight": float(w)} for tree, w in model.stages
        ],
        "final_distribution": _floats(model.final_distribution),
        "row_ids": _ints(model.row_ids),
        "rounds_completed": model.rounds_completed,
        "config": _boost_config_doc(model.config),
    }


def _boosted_from(doc: dict) -> BoostedModel:
    # Only the final weight snapshot survives serialization; the full
    # per-round history is a training-time artifact.
    return BoostedModel(
        stages=[(_tree_from(s["tree"]), float(s["weight"])) for s in doc["stages"]],
        distributions=[np.asarray(doc["final_distribution"], dtype=np.float64)],
        row_ids=doc["row_ids"],
        config=_boost_config_from(doc["config"]),
        rounds_completed=doc["rounds_completed"],
    )


def _encode_model(model) -> dict:
    if isinstance(model, CartTree):
        return {"type": "cart", **_tree_doc(model)}
    if isinstance(model, ForestModel):
        return {
            "type": "forest",
            "trees": [_tree_doc(t) for t in model.trees],
            "config": asdict(model.config),
        }
    if isinstance(model, BoostedModel):
        return {"type": "boosted", **_boosted_doc(model)}
    if isinstance(model, EasyModel):
        return {
            "type": "easy",
            "members": [_boosted_doc(m) for m in model.members],
            "config": {
                "subsets": model.config.subsets,
                "rounds_per_subset": model.config.rounds_per_subset,
                "base": _cart_config_doc(model.config.base),
                "seed": model.config.seed,
            },
        }
    if isinstance(model, SvcModel):
        return {
            "type": "svc",
            "support_rows": _floats(model.support_rows),
            "dual_coef": _floats(model.dual_coef),
            "bias": float(model.bias),
            "support_row_ids": _ints(model.support_row_ids),
            "config": {
                "C": model.config.C,
                "kernel": asdict(model.config.kernel),
                "tol": model.config.tol,
                "max_iter": model.config.max_iter,
                "sv_threshold": model.config.sv_threshold,
                "seed": model.config.seed,
            },
            "converged": model.converged,
            "n_iter": model.n_iter,
        }
    if isinstance(model, LogRegModel):
        return {
            "type": "logistic",
            "weights": _floats(model.weights),
            "bias": float(model.bias),
            "config": asdict(model.config),
        }
    if isinstance(model, KnnModel):
        return {
            "type": "knn",
            "matrix": _floats(model.matrix),
            "labels": _ints(model.labels),
            "row_ids": _ints(model.row_ids),
            "config": asdict(model.config),
        }
    raise BundleError(f"cannot serialize model of type {type(model).__name__}")


def _decode_model(doc: dict):
    kind = doc.get("type")
    if kind == "cart":
        return _tree_from(doc)
    if kind == "forest":
        config = ForestConfig(**doc["config"])
        return ForestModel(trees=[_tree_from(t) for t in doc["trees"]], config=config)
    if kind == "boosted":
        return _boosted_from(doc)
    if kind == "easy":
        cfg = doc["config"]
        config = EasyConfig(
            subsets=cfg["subsets"],
            rounds_per_subset=cfg["rounds_per_subset"],
            base=_cart_config_from(cfg["base"]),
            seed=cfg["seed"],
        )
        return EasyModel(members=[_boosted_from(m) for m in doc["members"]], config=config)
    if kind == "svc":
        cfg = doc["config"]
        config = SvcConfig(
            C=cfg["C"],
            kernel=Kernel(**cfg["kernel"]),
            tol=cfg["tol"],
            max_iter=cfg["max_iter"],
            sv_threshold=cfg["sv_threshold"],
            seed=cfg["seed"],
        )
        return SvcModel(
            support_rows=np.asarray(doc["support_rows"], dtype=np.float64).reshape(
                len(doc["support_row_ids"]), -1
            ),
            dual_coef=np.asarray(doc["dual_coef"], dtype=np.float64),
            bias=float(doc["bias"]),
            support_row_ids=np.asarray(doc["support_row_ids"], dtype=np.int64),
            config=config,
            converged=doc["converged"],
            n_iter=doc["n_iter"],
        )
    if kind == "logistic":
        return LogRegModel(
            weights=np.asarray(doc["weights"], dtype=np.float64),
            bias=float(doc["bias"]),
            config=LogRegConfig(**doc["config"]),
        )
    if kind == "knn":
        labels = np.asarray(doc["labels"], dtype=np.int8)
        return KnnModel(
            matrix=np.asarray(doc["matrix"], dtype=np.float64).reshape(labels.size, -1),
            labels=labels,
            row_ids=np.asarray(doc["row_ids"], dtype=np.int64),
            config=KnnConfig(**doc["config"]),
        )
    raise BundleError(f"unknown model type {kind!r}")


def serialize_model(bundle: ModelBundle) -> bytes:
    doc = {
        "format_version": bundle.format_version,
        "schema": bundle.schema.to_json_dict() if bundle.schema else None,
        "encoder": bundle.encoder.to_json_dict() if bundle.encoder else None,
        "model": _encode_model(bundle.model),
        "metadata": bundle.metadata,
    }
    return (json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n").encode("utf-8")


def deserialize_model(data: bytes) -> ModelBundle:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise BundleError(f"bundle document is corrupt: {exc}") from exc
    if not isinstance(doc, dict):
        raise BundleError("bundle document must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionError(f"unsupported bundle format_version {version!r}")
    try:
        return ModelBundle(
            model=_decode_model(doc["model"]),
            schema=RecordSchema.from_json_dict(doc["schema"]) if doc.get("schema") else None,
            encoder=Encoder.from_json_dict(doc["encoder"]) if doc.get("encoder") else None,
            metadata=dict(doc.get("metadata", {})),
            format_version=version,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise BundleError(f"bundle document is malformed: {exc}") from exc


def save_bundle(bundle: ModelBundle, path):
    with open(path, "wb") as fh:
        fh.write(serialize_model(bundle))


def load_bundle(path) -> ModelBundle:
    with open(path, "rb") as fh:
        return deserialize_model(fh.read())

"""Class-imbalance learning toolkit for adverse-event severity prediction.

Core pieces: a record schema and encoding pipeline, weighted CART trees,
a sequential-dual-solver SVC, undersampling boosting and balanced
forests, rank-AUC evaluation, combined grid/random hyperparameter
search, a reproducible benchmark harness, and a small prediction
service with portable model bundles.
"""

__version__ = "0.1.0"

from .data import Dataset, Encoder, SplitSpec, clean, fit_encoder, load_csv, stratified_split
from .ensemble import (
    BoostConfig,
    BoostedModel,
    EasyConfig,
    ForestConfig,
    SeededRusConfig,
    adaboost_fit,
    brf_fit,
    easy_ensemble_fit,
    predict_label,
    predict_score,
    random_forest_fit,
    rus,
    rusboost_fit,
    svc_seeded_rusboost_fit,
)
from .metrics import ConfusionMatrix, MetricsReport, RocCurve, auc, compute_metrics, confusion, roc_points
from .schema import FeatureSpec, RawRecord, RecordSchema, default_schema, load_schema, save_schema
from .svm import Kernel, SvcConfig, SvcModel, support_indices, svc_decision, svc_fit
from .synth import synth_aefi, synth_gaussian
from .tree import CartConfig, CartTree, cart_fit, cart_predict, gini
from .tuning import ParamDomain, SearchPlan, Trial, cross_validate, enumerate_candidates, search

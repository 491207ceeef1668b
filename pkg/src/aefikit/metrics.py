"""Confusion-matrix statistics, ROC construction, and AUC.

Rates that would divide by zero are reported as ``None`` rather than 0 or
NaN: on heavily skewed data a silent zero would misrepresent a model that
never predicts the rare class.  The positive class is always an explicit
argument because published comparisons sometimes score the majority class
as positive while the clinically interesting class is the minority.
"""

from dataclasses import dataclass

import numpy as np

from .errors import MetricError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fn: int
    fp: int
    tn: int
    positive_class: int | str = 1

    def __post_init__(self):
        for name in ("tp", "fn", "fp", "tn"):
            if getattr(self, name) < 0:
                raise MetricError(f"negative count for {name}")
        if self.total < 1:
            raise MetricError("confusion matrix must cover at least one instance")

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    def swapped(self) -> "ConfusionMatrix":
        """The same predictions scored with the opposite positive class."""
        return ConfusionMatrix(
            tp=self.tn, fn=self.fp, fp=self.fn, tn=self.tp,
            positive_class=self.positive_class,
        )


@dataclass(frozen=True)
class MetricsReport:
    """All rates derived from one confusion matrix.

    ``acc_pos`` is the true-positive rate (recall); ``acc_neg`` the
    true-negative rate (specificity).  ``g_mean`` is the geometric mean of
    the two.  A field is ``None`` when its denominator is zero.
    """

    acc_pos: float | None
    acc_neg: float | None
    precision: float | None
    accuracy: float
    f1: float | None
    g_mean: float | None

    @property
    def recall(self) -> float | None:
        return self.acc_pos

    @property
    def specificity(self) -> float | None:
        return self.acc_neg

    def as_dict(self) -> dict:
        return {
            "acc_pos": self.acc_pos,
            "acc_neg": self.acc_neg,
            "precision": self.precision,
            "accuracy": self.accuracy,
            "f1": self.f1,
            "g_mean": self.g_mean,
        }


def confusion(labels, predictions, positive_class=1) -> ConfusionMatrix:
    """Count TP/FN/FP/TN with the designated positive class."""
    labels = np.asarray(labels)
    predictions = np.asarray(predictions)
    if labels.shape != predictions.shape:
        raise MetricError(
            f"labels and predictions differ in length: {labels.shape} vs {predictions.shape}"
        )
    if labels.size < 1:
        raise MetricError("empty label vector")
    pos = labels == positive_class
    pred_pos = predictions == positive_class
    return ConfusionMatrix(
        tp=int(np.sum(pos & pred_pos)),
        fn=int(np.sum(pos & ~pred_pos)),
        fp=int(np.sum(~pos & pred_pos)),
        tn=int(np.sum(~pos & ~pred_pos)),
        positive_class=positive_class,
    )


def _ratio(num: int, den: int) -> float | None:
    return num / den if den > 0 else None


def compute_metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Derive every rate from a confusion matrix.

    accuracy = (TP+TN)/total, precision = TP/(TP+FP),
    recall = TP/(TP+FN), specificity = TN/(TN+FP),
    F1 = 2PR/(P+R), G-mean = sqrt(recall * specificity).
    """
    acc_pos = _ratio(cm.tp, cm.tp + cm.fn)
    acc_neg = _ratio(cm.tn, cm.tn + cm.fp)
    precision = _ratio(cm.tp, cm.tp + cm.fp)
    accuracy = (cm.tp + cm.tn) / cm.total

    if precision is None or acc_pos is None or precision + acc_pos == 0:
        f1 = None
    else:
        f1 = 2 * precision * acc_pos / (precision + acc_pos)

    if acc_pos is None or acc_neg is None:
        g_mean = None
    else:
        g_mean = float(np.sqrt(acc_pos * acc_neg))

    return MetricsReport(
        acc_pos=acc_pos,
        acc_neg=acc_neg,
        precision=precision,
        accuracy=accuracy,
        f1=f1,
        g_mean=g_mean,
    )


def _check_score_inputs(scores, labels):
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise MetricError("scores and labels must be equal-length vectors")
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise MetricError("AUC requires both classes present")
    if n_pos + n_neg != labels.size:
        raise MetricError("labels must be binary 0/1")
    return scores, labels, n_pos, n_neg


def _average_ranks(scores: np.ndarray) -> np.ndarray:
    """1-based ranks with ties assigned the group average rank."""
    order = np.argsort(scores, kind="mergesort")
    ranks = np.empty(scores.size, dtype=float)
    sorted_scores = scores[order]
    i = 0
    while i < scores.size:
        j = i
        while j + 1 < scores.size and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        # average of 1-based ranks i+1 .. j+1
        avg = (i + j + 2) / 2.0
        ranks[order[i : j + 1]] = avg
        i = j + 1
    return ranks


def auc(scores, labels) -> float:
    """Rank-statistic AUC: P(score_pos > score_neg), ties counted 1/2.

    Computed via the rank-sum identity, which matches exhaustive pairwise
    enumeration exactly (ranks and pair counts are dyadic rationals).
    """
    scores, labels, n_pos, n_neg = _check_score_inputs(scores, labels)
    ranks = _average_ranks(scores)
    rank_sum = float(np.sum(ranks[labels == 1]))
    u = rank_sum - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


@dataclass(frozen=True)
class RocCurve:
    """Threshold-sweep ROC points from (0,0) to (1,1), both coordinates nondecreasing."""

    points: tuple  # of (fpr, tpr) pairs

    def area(self) -> float:
        """Trapezoidal area under the curve."""
        total = 0.0
        pts = self.points
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            total += (x1 - x0) * (y0 + y1) / 2.0
        return total


def roc_points(scores, labels) -> RocCurve:
    """ROC from sweeping thresholds at each distinct score, descending.

    Tied scores enter the curve as one step, so the trapezoidal area under
    the returned curve equals ``auc(scores, labels)``.
    """
    scores, labels, n_pos, n_neg = _check_score_inputs(scores, labels)
    order = np.argsort(-scores, kind="mergesort")
    sorted_scores = scores[order]
    sorted_labels = labels[order]

    points = [(0.0, 0.0)]
    tp = fp = 0
    i = 0
    n = scores.size
    while i < n:
        j = i
        while j + 1 < n and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        block = sorted_labels[i : j + 1]
        tp += int(np.sum(block == 1))
        fp += int(np.sum(block == 0))
        points.append((fp / n_neg, tp / n_pos))
        i = j + 1
    return RocCurve(points=tuple(points))

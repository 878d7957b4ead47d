"""Weighted confusion matrices and the base classification metrics.

All metrics accept per-row weights. Weights are rescaled by their maximum
before accumulation; every metric here is a ratio, so the rescaling changes
nothing mathematically, and a set of equal weights reduces to exactly 1.0
per row, reproducing the unweighted numbers bit for bit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ArityMismatch, DegenerateClass, EmptyInput, NoPositives

METRIC_KEYS = ("Acc", "bAcc", "Prec", "Recall", "F1", "mAP", "AUC")


def _unit_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.size and np.any(w < 0):
        raise ValueError("weights must be non-negative")
    top = w.max() if w.size else 0.0
    return w / top if top > 0 else w


def _div(num: float, den: float) -> float:
    return float(num / den) if den > 0 else 0.0


@dataclass
class ConfusionAccumulator:
    """Rows are ground truth, columns are predictions."""

    n_classes: int
    counts: np.ndarray

    @classmethod
    def empty(cls, n_classes: int) -> "ConfusionAccumulator":
        return cls(n_classes, np.zeros((n_classes, n_classes)))

    @property
    def total_weight(self) -> float:
        return float(self.counts.sum())

    def add(self, gt: int, pred: int, weight: float = 1.0) -> None:
        self.counts[gt, pred] += weight

    def merge(self, other: "ConfusionAccumulator") -> "ConfusionAccumulator":
        if other.n_classes != self.n_classes:
            raise ArityMismatch("cannot merge confusion matrices of different size")
        return ConfusionAccumulator(self.n_classes, self.counts + other.counts)


def confusion(gt: Sequence[int], pred: Sequence[int], n_classes: int, weights=None) -> ConfusionAccumulator:
    gt = np.asarray(gt, dtype=int)
    pred = np.asarray(pred, dtype=int)
    w = np.ones(len(gt)) if weights is None else _unit_weights(weights)
    cm = ConfusionAccumulator.empty(n_classes)
    # sequential adds keep the summation order fixed
    for g, p, wi in zip(gt, pred, w):
        cm.counts[g, p] += wi
    return cm


def argmax(confidences: Sequence[float]) -> int:
    """Index of the largest value; ties go to the lowest index."""
    return int(np.argmax(np.asarray(confidences, dtype=float)))


def accumulate(rows) -> ConfusionAccumulator:
    if not rows:
        raise EmptyInput("no rows to accumulate")
    tasks = {r.sample.task for r in rows}
    if len(tasks) != 1:
        raise ValueError(f"rows mix tasks {sorted(tasks)}")
    n = len(rows[0].pred.confidences)
    return confusion(
        [r.sample.class_index for r in rows],
        [argmax(r.pred.confidences) for r in rows],
        n,
        [r.weight for r in rows],
    )


def accuracy(cm: ConfusionAccumulator) -> float:
    return _div(np.trace(cm.counts), cm.total_weight)


def precision(cm: ConfusionAccumulator, cls: int) -> float:
    return _div(cm.counts[cls, cls], cm.counts[:, cls].sum())


def recall(cm: ConfusionAccumulator, cls: int) -> float:
    return _div(cm.counts[cls, cls], cm.counts[cls, :].sum())


def f1(cm: ConfusionAccumulator, cls: int) -> float:
    p, r = precision(cm, cls), recall(cm, cls)
    return _div(2 * p * r, p + r)


def present_classes(cm: ConfusionAccumulator) -> list[int]:
    """Classes with non-zero ground-truth weight."""
    return [c for c in range(cm.n_classes) if cm.counts[c, :].sum() > 0]


def balanced_accuracy(cm: ConfusionAccumulator) -> float:
    classes = present_classes(cm)
    return float(np.mean([recall(cm, c) for c in classes])) if classes else 0.0


def binary_metrics_positive(cm: ConfusionAccumulator) -> dict:
    """Acc/bAcc plus precision, recall and F1 of class 1 (crossing)."""
    if cm.n_classes != 2:
        raise ArityMismatch(f"binary metrics need 2 classes, got {cm.n_classes}")
    return {
        "Acc": accuracy(cm),
        "bAcc": balanced_accuracy(cm),
        "Prec": precision(cm, 1),
        "Recall": recall(cm, 1),
        "F1": f1(cm, 1),
    }


def label_metrics(cm: ConfusionAccumulator) -> dict:
    """Threshold-free summary: positive class for binary tasks, macro mean otherwise."""
    if cm.n_classes == 2:
        return binary_metrics_positive(cm)
    classes = present_classes(cm)

    def macro(fn):
        return float(np.mean([fn(cm, c) for c in classes])) if classes else 0.0

    return {
        "Acc": accuracy(cm),
        "bAcc": balanced_accuracy(cm),
        "Prec": macro(precision),
        "Recall": macro(recall),
        "F1": macro(f1),
    }


def degenerate_cells(cm: ConfusionAccumulator) -> list[str]:
    """Names of per-class ratios that fell back to the 0/0 -> 0 convention."""
    out = []
    for c in range(cm.n_classes):
        if cm.counts[:, c].sum() == 0:
            out.append(f"precision[{c}]")
        if cm.counts[c, :].sum() == 0:
            out.append(f"recall[{c}]")
    return out


# ---------------------------------------------------------------------------
# ranking metrics


@dataclass(frozen=True)
class RankedScores:
    """One-vs-rest view of a single class."""

    scores: np.ndarray
    positive: np.ndarray
    weights: np.ndarray

    @classmethod
    def build(cls, scores, positive, weights=None) -> "RankedScores":
        s = np.asarray(scores, dtype=float)
        if not np.all(np.isfinite(s)):
            raise ValueError("scores must be finite")
        w = np.ones(len(s)) if weights is None else _unit_weights(weights)
        return cls(s, np.asarray(positive, dtype=bool), w)


def ranked_scores(rows, cls: int) -> RankedScores:
    return RankedScores.build(
        [r.pred.confidences[cls] for r in rows],
        [r.sample.class_index == cls for r in rows],
        [r.weight for r in rows],
    )


def average_precision(rs: RankedScores, cls: int = -1) -> float:
    """All-points AP; equal scores keep their input order."""
    pos_w = rs.weights * rs.positive
    total_pos = pos_w.sum()
    if not total_pos > 0:
        raise NoPositives(cls)
    order = np.argsort(-rs.scores, kind="stable")
    w, pw = rs.weights[order], pos_w[order]
    tp = np.cumsum(pw)
    seen = np.cumsum(w)
    prec = np.divide(tp, seen, out=np.zeros_like(tp), where=seen > 0)
    return float(np.sum(pw * prec) / total_pos)


def auc(rs: RankedScores, cls: int = -1) -> float:
    """Weighted Mann-Whitney statistic; tied pairs earn half credit."""
    pos_w = rs.weights * rs.positive
    neg_w = rs.weights * ~rs.positive
    wp, wn = pos_w.sum(), neg_w.sum()
    if not (wp > 0 and wn > 0):
        raise DegenerateClass(cls)
    uniq, inv = np.unique(rs.scores, return_inverse=True)
    gp = np.bincount(inv, weights=pos_w, minlength=len(uniq))
    gn = np.bincount(inv, weights=neg_w, minlength=len(uniq))
    below = np.cumsum(gn) - gn
    return float(np.sum(gp * (below + 0.5 * gn)) / (wp * wn))


def per_class_ap(rows) -> dict[int, float]:
    n = len(rows[0].pred.confidences)
    out = {}
    for c in range(n):
        try:
            out[c] = average_precision(ranked_scores(rows, c), c)
        except NoPositives as exc:
            warnings.warn(f"AP skipped: {exc}", stacklevel=2)
    return out


def per_class_auc(rows) -> dict[int, float]:
    n = len(rows[0].pred.confidences)
    out = {}
    for c in range(n):
        try:
            out[c] = auc(ranked_scores(rows, c), c)
        except DegenerateClass as exc:
            warnings.warn(f"AUC skipped: {exc}", stacklevel=2)
    return out


def mean_average_precision(rows) -> float | None:
    if not rows:
        raise EmptyInput("no rows")
    ap = per_class_ap(rows)
    return float(np.mean(list(ap.values()))) if ap else None


def macro_auc(rows, average: str = "macro") -> float | None:
    """Class-1 AUC for binary tasks, one-vs-rest average otherwise.

    ``average="weighted"`` weights each class by its ground-truth mass.
    """
    if not rows:
        raise EmptyInput("no rows")
    n = len(rows[0].pred.confidences)
    if n == 2:
        try:
            return auc(ranked_scores(rows, 1), 1)
        except DegenerateClass as exc:
            warnings.warn(f"AUC undefined: {exc}", stacklevel=2)
            return None
    per = per_class_auc(rows)
    if not per:
        return None
    if average == "macro":
        return float(np.mean(list(per.values())))
    if average == "weighted":
        w = _unit_weights([r.weight for r in rows])
        mass = {c: sum(wi for r, wi in zip(rows, w) if r.sample.class_index == c) for c in per}
        return float(sum(per[c] * mass[c] for c in per) / sum(mass.values()))
    raise ValueError(f"unknown average {average!r}")


def base_metrics(rows, auc_average: str = "macro") -> dict:
    """Acc, bAcc, Prec, Recall, F1, mAP and AUC over ``rows``."""
    cm = accumulate(rows)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out = label_metrics(cm)
        out["mAP"] = mean_average_precision(rows)
        out["AUC"] = macro_auc(rows, auc_average)
    return out


def per_class_report(rows) -> list[dict]:
    cm = accumulate(rows)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ap = per_class_ap(rows)
        au = per_class_auc(rows)
    return [
        {
            "class": c,
            "support": float(cm.counts[c, :].sum()),
            "AP": ap.get(c),
            "AUC": au.get(c),
            "Prec": precision(cm, c),
            "Recall": recall(cm, c),
            "F1": f1(cm, c),
        }
        for c in range(cm.n_classes)
    ]

"""Instance-level (per-pedestrian) metrics and confidence consistency."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, InconsistentGroundTruth
from .metrics_core import argmax, confusion, label_metrics
from .predlog import EvalRow

_SCALARS = ("Acc", "bAcc", "Prec", "F1")


@dataclass(frozen=True)
class InstanceSeries:
    ped_id: str
    gt_label: int
    obs_starts: tuple[int, ...]
    confidences: np.ndarray  # (n_samples, n_classes), ordered by obs_start

    def __post_init__(self):
        if len(self.obs_starts) < 1:
            raise ValueError("a series needs at least one sample")
        if any(b <= a for a, b in zip(self.obs_starts, self.obs_starts[1:])):
            raise ValueError(f"{self.ped_id}: obs_start values must be strictly increasing")

    @property
    def n_classes(self) -> int:
        return self.confidences.shape[1]

    @property
    def n(self) -> int:
        return len(self.obs_starts)


def group_instances(rows: list[EvalRow], split_on_label_change: bool = False) -> list[InstanceSeries]:
    """One series per pedestrian, ordered by ped_id, samples by window start.

    With ``split_on_label_change`` a track whose ground truth changes between
    windows (risk regions do) is cut into runs of constant label, each run
    becoming its own series named ``ped_id@first_start``.
    """
    groups: dict[str, list[EvalRow]] = {}
    for r in rows:
        groups.setdefault(r.sample.ped_id, []).append(r)
    out = []
    for ped_id in sorted(groups):
        members = sorted(groups[ped_id], key=lambda r: r.sample.obs_start)
        if split_on_label_change:
            runs: list[list[EvalRow]] = []
            for r in members:
                if runs and runs[-1][-1].sample.class_index == r.sample.class_index:
                    runs[-1].append(r)
                else:
                    runs.append([r])
            if len(runs) > 1:
                out.extend(_series(f"{ped_id}@{run[0].sample.obs_start}", run) for run in runs)
                continue
        out.append(_series(ped_id, members))
    return out


def _series(name: str, members: list[EvalRow]) -> InstanceSeries:
    labels = {r.sample.class_index for r in members}
    if len(labels) != 1:
        raise InconsistentGroundTruth(name)
    return InstanceSeries(
        ped_id=name,
        gt_label=labels.pop(),
        obs_starts=tuple(r.sample.obs_start for r in members),
        confidences=np.array([r.pred.confidences for r in members], dtype=float),
    )


def soft_prediction(series: InstanceSeries) -> tuple[int, np.ndarray]:
    mean_conf = series.confidences.mean(axis=0)
    return argmax(mean_conf), mean_conf


def wrong_label(gt: int, n_classes: int) -> int:
    return (gt + 1) % n_classes


def hard_prediction(series: InstanceSeries, wrong=wrong_label) -> int:
    """Shared argmax if all samples agree, otherwise ``wrong(gt, n_classes)``."""
    labels = {argmax(c) for c in series.confidences}
    if len(labels) == 1:
        return labels.pop()
    return wrong(series.gt_label, series.n_classes)


def confidence_delta(series: InstanceSeries, cls: int) -> tuple[float, float]:
    """(max, mean) absolute change of one class's confidence between neighbours."""
    if series.n == 1:
        return 0.0, 0.0
    deltas = np.abs(np.diff(series.confidences[:, cls]))
    return float(deltas.max()), float(deltas.mean())


def confidence_delta_matrix(series_list: list[InstanceSeries]) -> dict:
    """Instance-averaged (max, avg) delta for every class."""
    n = series_list[0].n_classes
    out = {}
    for c in range(n):
        pairs = np.array([confidence_delta(s, c) for s in series_list])
        out[c] = {"max": float(pairs[:, 0].mean()), "avg": float(pairs[:, 1].mean())}
    return out


def instance_report(series_list: list[InstanceSeries], wrong=wrong_label) -> dict:
    if not series_list:
        raise EmptyInput("no instances")
    n = series_list[0].n_classes
    gt = [s.gt_label for s in series_list]
    soft = [soft_prediction(s)[0] for s in series_list]
    hard = [hard_prediction(s, wrong) for s in series_list]
    deltas = np.array([confidence_delta(s, s.gt_label) for s in series_list])
    soft_m = label_metrics(confusion(gt, soft, n))
    hard_m = label_metrics(confusion(gt, hard, n))
    return {
        "soft": {k: soft_m[k] for k in _SCALARS},
        "hard": {k: hard_m[k] for k in _SCALARS},
        "conf_delta": {"max": float(deltas[:, 0].mean()), "avg": float(deltas[:, 1].mean())},
    }

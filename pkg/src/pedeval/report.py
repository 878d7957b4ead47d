"""End-to-end evaluation and report serialization."""

from __future__ import annotations

import dataclasses
import io
import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import _jsonfmt
from .annotation import Dataset
from .errors import IoFailure, JoinError
from .metrics_core import METRIC_KEYS, base_metrics, per_class_report
from .metrics_instance import confidence_delta_matrix, group_instances, instance_report
from .metrics_weighted import TteWeightConfig, weighted_report
from .predlog import EvalRow, PredictionRecord, join
from .risk_grid import RiskGridConfig, fold_to_risk_class
from .sampler import (
    ACTION_CLASSES,
    INTENTION_CLASSES,
    SamplerConfig,
    action_samples_on_windows,
    sample_dataset,
)
from .scenario import FACTORS, ScenarioBinning, agreement, outcome_fractions, scenario_slice

REPORT_VERSION = 1


@dataclass(frozen=True)
class EvalConfig:
    sampler: SamplerConfig = SamplerConfig()
    grid: RiskGridConfig = RiskGridConfig()
    tte: TteWeightConfig = TteWeightConfig()
    binning: ScenarioBinning = ScenarioBinning()
    join_policy: str = "strict"
    auc_average: str = "macro"
    scenario: bool = False
    per_class_delta: bool = False
    export_weights: bool = False
    threads: int = 1

    def echo(self) -> dict:
        """Every setting that influences the numbers (``threads`` does not)."""
        return {
            "sampler": dataclasses.asdict(self.sampler),
            "grid": dataclasses.asdict(self.grid),
            "tte": dataclasses.asdict(self.tte),
            "binning": {
                "scale_bins": list(self.binning.scale_bins),
                "speed_bins": list(self.binning.speed_bins),
                "factors": [f for f in FACTORS if f in self.binning.factors],
                "min_samples": self.binning.min_samples,
            },
            "join_policy": self.join_policy,
            "auc_average": self.auc_average,
            "scenario": self.scenario,
            "per_class_delta": self.per_class_delta,
            "export_weights": self.export_weights,
        }

    @classmethod
    def from_echo(cls, d: dict, threads: int = 1) -> "EvalConfig":
        s = dict(d["sampler"])
        s["intention_bins"] = tuple(s["intention_bins"])
        b = d["binning"]
        return cls(
            sampler=SamplerConfig(**s),
            grid=RiskGridConfig(**d["grid"]),
            tte=TteWeightConfig(**d["tte"]),
            binning=ScenarioBinning(
                scale_bins=tuple(b["scale_bins"]),
                speed_bins=tuple(b["speed_bins"]),
                factors=frozenset(b["factors"]),
                min_samples=b["min_samples"],
            ),
            join_policy=d["join_policy"],
            auc_average=d["auc_average"],
            scenario=d["scenario"],
            per_class_delta=d["per_class_delta"],
            export_weights=d["export_weights"],
            threads=threads,
        )


@dataclass
class MetricReport:
    model: str
    task: str
    n_samples: int
    n_instances: int
    base: dict
    soft: dict
    hard: dict
    conf_delta: dict
    per_class: list[dict]
    config_echo: dict
    weighted: dict | None = None
    scenario: dict | None = None
    agreement: list[dict] | None = None
    coverage: dict | None = None
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "report_version": REPORT_VERSION,
            "model": self.model,
            "task": self.task,
            "n_samples": self.n_samples,
            "n_instances": self.n_instances,
            "base": self.base,
            "weighted": self.weighted,
            "soft": self.soft,
            "hard": self.hard,
            "conf_delta": self.conf_delta,
            "per_class": self.per_class,
            "scenario": self.scenario,
            "agreement": self.agreement,
            "coverage": self.coverage,
            "config_echo": self.config_echo,
        }
        out.update(self.extras)
        return out


def class_names(task: str, n_regions: int) -> list[str]:
    if task == "intention":
        return list(INTENTION_CLASSES)
    if task == "action":
        return list(ACTION_CLASSES)
    return [f"R{r}" for r in range(1, n_regions + 1)]


def select_model(preds: list[PredictionRecord], task: str, model: str | None = None) -> tuple[str, list[PredictionRecord]]:
    preds = [p for p in preds if p.task == task]
    models = sorted({p.model for p in preds})
    if model is None:
        if len(models) != 1:
            raise JoinError(f"pick one model for task {task}; log holds {models or 'none'}")
        model = models[0]
    elif model not in models:
        raise JoinError(f"model {model!r} has no {task} predictions")
    return model, [p for p in preds if p.model == model]


def fold_risk_rows(rows: list[EvalRow], grid: RiskGridConfig) -> list[EvalRow]:
    """Symmetric risk-class view: paired regions merged, confidences summed."""
    n_folded = grid.m
    out = []
    for r in rows:
        conf = np.zeros(n_folded)
        for region, c in enumerate(r.pred.confidences, 1):
            conf[fold_to_risk_class(region, grid)] += c
        folded_label = fold_to_risk_class(int(r.sample.label), grid) + 1
        sample = dataclasses.replace(r.sample, label=folded_label)
        pred = dataclasses.replace(r.pred, confidences=tuple(float(v) for v in conf))
        out.append(EvalRow(sample, pred, r.weight))
    return out


def evaluate_rows(rows: list[EvalRow], task: str, model: str, cfg: EvalConfig) -> MetricReport:
    series = group_instances(rows, split_on_label_change=(task == "risk"))
    inst = instance_report(series)
    weighted = None
    extras: dict[str, Any] = {}
    scheme = {"action": "tte", "risk": "risk_region"}.get(task)
    if scheme is not None:
        wr = weighted_report(rows, scheme, cfg.tte, cfg.grid, cfg.auc_average)
        weighted = wr["weighted"]
        if cfg.export_weights:
            extras["weights"] = {r.sample.sample_id: r.weight for r in wr["rows"]}
    names = class_names(task, cfg.grid.n_regions)
    per_class = [dict(entry, name=names[entry["class"]]) for entry in per_class_report(rows)]
    if task == "risk":
        folded = fold_risk_rows(rows, cfg.grid)
        extras["folded"] = {
            "base": base_metrics(folded, cfg.auc_average),
            "per_class": per_class_report(folded),
        }
    if cfg.per_class_delta:
        extras["conf_delta_per_class"] = {names[c]: v for c, v in confidence_delta_matrix(series).items()}
    return MetricReport(
        model=model,
        task=task,
        n_samples=len(rows),
        n_instances=len(series),
        base=base_metrics(rows, cfg.auc_average),
        weighted=weighted,
        soft=inst["soft"],
        hard=inst["hard"],
        conf_delta=inst["conf_delta"],
        per_class=per_class,
        scenario=scenario_slice(rows, cfg.binning) if cfg.scenario else None,
        config_echo=cfg.echo(),
        extras=extras,
    )


def evaluate(
    ds: Dataset,
    preds: list[PredictionRecord],
    task: str,
    cfg: EvalConfig = EvalConfig(),
    model: str | None = None,
) -> MetricReport:
    model, preds = select_model(preds, task, model)
    samples = sample_dataset(ds, task, cfg.sampler, cfg.grid, threads=cfg.threads)
    rows, cov = join(samples, preds, cfg.join_policy)
    report = evaluate_rows(rows, task, model, cfg)
    report.coverage = cov.as_dict()
    return report


def evaluate_agreement(
    ds: Dataset, preds: list[PredictionRecord], cfg: EvalConfig = EvalConfig(), model: str | None = None
) -> dict:
    if model is None:
        shared = {p.model for p in preds if p.task == "intention"} & {p.model for p in preds if p.task == "action"}
        if len(shared) != 1:
            raise JoinError(f"pick one model with both intention and action predictions; candidates {sorted(shared)}")
        model = shared.pop()
    _, int_preds = select_model(preds, "intention", model)
    _, act_preds = select_model(preds, "action", model)
    int_samples = sample_dataset(ds, "intention", cfg.sampler, cfg.grid, threads=cfg.threads)
    int_rows, _ = join(int_samples, int_preds, "inner")
    act_rows, cov = join(action_samples_on_windows(ds, [r.sample for r in int_rows]), act_preds, "inner")
    cells = agreement(int_rows, act_rows)
    return {
        "model": model,
        "n_matched": sum(c.count for c in cells),
        "outcomes": outcome_fractions(cells),
        "cells": [dataclasses.asdict(c) for c in cells],
        "config_echo": cfg.echo(),
    }


# ---------------------------------------------------------------------------
# serialization


def dumps_report(report: MetricReport | dict) -> str:
    d = report.to_dict() if isinstance(report, MetricReport) else report
    return _jsonfmt.dumps(d, indent=2) + "\n"


def write_text(text: str, path: str | Path) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def per_class_csv(report: MetricReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = ("AP", "AUC", "Prec", "Recall", "F1")
    writer.writerow(["class", "name", "support", *cols])
    for e in report.per_class:
        writer.writerow(
            [e["class"], e["name"], f"{e['support']:.6f}", *("" if e[k] is None else f"{e[k]:.6f}" for k in cols)]
        )
    return buf.getvalue()


def _fmt(v) -> str:
    return "n/a" if v is None else f"{v:.2f}"


def report_to_markdown(report: MetricReport) -> str:
    lines = [f"# {report.model} / {report.task}", ""]
    lines.append(f"{report.n_samples} samples from {report.n_instances} instances.")
    lines.append("")
    header = "| metric | base |" + (" weighted |" if report.weighted else "")
    lines += [header, "|---|---|" + ("---|" if report.weighted else "")]
    for k in METRIC_KEYS:
        row = f"| {k} | {_fmt(report.base.get(k))} |"
        if report.weighted:
            row += f" {_fmt(report.weighted.get(k))} |"
        lines.append(row)
    lines += ["", "| metric | soft | hard |", "|---|---|---|"]
    for k in report.soft:
        lines.append(f"| {k} | {_fmt(report.soft[k])} | {_fmt(report.hard[k])} |")
    cd = report.conf_delta
    lines += ["", f"conf_delta max/avg: {_fmt(cd['max'])}/{_fmt(cd['avg'])}", ""]
    return "\n".join(lines)

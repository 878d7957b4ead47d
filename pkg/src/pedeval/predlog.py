"""Prediction logs (JSONL) and their join with task samples."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from . import _jsonfmt
from .errors import (
    ArityMismatch,
    DuplicatePrediction,
    IoFailure,
    JoinError,
    MalformedLine,
    MissingPrediction,
    OrphanPrediction,
)
from .sampler import TASKS, TaskSample, task_arity


@dataclass(frozen=True)
class PredictionRecord:
    sample_id: str
    model: str
    task: str
    confidences: tuple[float, ...]


@dataclass(frozen=True)
class EvalRow:
    sample: TaskSample
    pred: PredictionRecord
    weight: float = 1.0


@dataclass
class Coverage:
    """Rows dropped on each side by an inner join."""

    matched: int = 0
    missing: int = 0
    orphan: int = 0
    missing_ids: list[str] = field(default_factory=list)
    orphan_ids: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"matched": self.matched, "missing": self.missing, "orphan": self.orphan}


def parse_prediction(obj: object, lineno: int, n_regions: int = 12) -> PredictionRecord:
    if not isinstance(obj, dict):
        raise MalformedLine(lineno, "expected a JSON object")
    for key, kind in (("sample_id", str), ("model", str), ("task", str), ("confidences", list)):
        if not isinstance(obj.get(key), kind):
            raise MalformedLine(lineno, f"field {key!r} missing or not {kind.__name__}")
    task = obj["task"]
    if task not in TASKS:
        raise MalformedLine(lineno, f"unknown task {task!r}")
    confs = obj["confidences"]
    for c in confs:
        if isinstance(c, bool) or not isinstance(c, (int, float)) or not math.isfinite(c):
            raise MalformedLine(lineno, f"confidence {c!r} is not a finite number")
        if not 0.0 <= c <= 1.0:
            raise MalformedLine(lineno, f"confidence {c!r} outside [0, 1]")
    arity = task_arity(task, n_regions)
    if len(confs) != arity:
        raise ArityMismatch(f"line {lineno}: task {task} expects {arity} confidences, got {len(confs)}")
    return PredictionRecord(obj["sample_id"], obj["model"], task, tuple(float(c) for c in confs))


def read_predictions(path: str | Path, n_regions: int = 12) -> list[PredictionRecord]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    records = []
    seen: set[tuple[str, str]] = set()
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedLine(lineno, str(exc)) from exc
        rec = parse_prediction(obj, lineno, n_regions)
        key = (rec.model, rec.sample_id)
        if key in seen:
            raise DuplicatePrediction(lineno, rec.model, rec.sample_id)
        seen.add(key)
        records.append(rec)
    return records


def prediction_to_dict(p: PredictionRecord) -> dict:
    return {"sample_id": p.sample_id, "model": p.model, "task": p.task, "confidences": list(p.confidences)}


def write_predictions(preds: list[PredictionRecord], path: str | Path) -> None:
    text = "".join(_jsonfmt.dumps(prediction_to_dict(p)) + "\n" for p in preds)
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def join(
    samples: list[TaskSample], preds: list[PredictionRecord], policy: str = "strict"
) -> tuple[list[EvalRow], Coverage]:
    """Pair samples with the predictions of a single model, in sample order."""
    if policy not in ("strict", "inner"):
        raise ValueError(f"unknown join policy {policy!r}")
    models = {p.model for p in preds}
    if len(models) > 1:
        raise JoinError(f"join expects one model per call, got {sorted(models)}")
    by_id = {p.sample_id: p for p in preds}
    sample_ids = {s.sample_id for s in samples}
    missing = [s.sample_id for s in samples if s.sample_id not in by_id]
    orphan = [p.sample_id for p in preds if p.sample_id not in sample_ids]
    if policy == "strict":
        if missing:
            raise MissingPrediction(missing)
        if orphan:
            raise OrphanPrediction(orphan)
    rows = []
    for s in samples:
        p = by_id.get(s.sample_id)
        if p is None:
            continue
        if p.task != s.task:
            raise JoinError(f"{s.sample_id}: sample task {s.task} but prediction task {p.task}")
        rows.append(EvalRow(s, p))
    cov = Coverage(len(rows), len(missing), len(orphan), missing, orphan)
    return rows, cov

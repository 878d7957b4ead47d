"""Scenario-factor slicing and intention/action agreement tables."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .errors import JoinMismatch
from .metrics_core import METRIC_KEYS, argmax, base_metrics
from .predlog import EvalRow
from .sampler import ACTION_CLASSES, INTENTION_CLASSES

FACTORS = ("scale", "state", "speed", "signal", "road")
OUTCOMES = ("both_correct", "intention_only", "action_only", "both_incorrect")
_CATEGORIES = {
    "state": ("walking", "standing"),
    "signal": ("forbid", "allow", "none"),
    "road": ("one_way", "two_way", "unknown"),
}


@dataclass(frozen=True)
class ScenarioBinning:
    # placeholder edges; tune for the dataset at hand
    scale_bins: tuple[float, ...] = (60.0, 120.0)
    speed_bins: tuple[float, ...] = (0.0, 10.0, 20.0, 30.0)
    factors: frozenset = field(default_factory=lambda: frozenset(FACTORS))
    min_samples: int = 10

    def __post_init__(self):
        for name in ("scale_bins", "speed_bins"):
            cuts = getattr(self, name)
            if any(b <= a for a, b in zip(cuts, cuts[1:])):
                raise ValueError(f"{name} must be strictly ascending")
        if not self.factors:
            raise ValueError("enable at least one factor")
        unknown = set(self.factors) - set(FACTORS)
        if unknown:
            raise ValueError(f"unknown factors {sorted(unknown)}")


def _numeric_labels(cuts: tuple[float, ...], zero_bin: bool) -> list[str]:
    labels = []
    for i, c in enumerate(cuts):
        if i == 0:
            labels.append("=0" if zero_bin and c == 0 else f"<={c:g}")
        else:
            labels.append(f"({cuts[i - 1]:g},{c:g}]")
    labels.append(f">{cuts[-1]:g}")
    return labels


def _numeric_bin(value: float, cuts: tuple[float, ...], labels: list[str]) -> str:
    # right-closed intervals; the first bin takes everything up to cuts[0]
    for c, label in zip(cuts, labels):
        if value <= c:
            return label
    return labels[-1]


def factor_bins(factor: str, binning: ScenarioBinning) -> list[str]:
    if factor == "scale":
        return _numeric_labels(binning.scale_bins, zero_bin=False)
    if factor == "speed":
        return _numeric_labels(binning.speed_bins, zero_bin=True)
    return list(_CATEGORIES[factor])


def bin_of(row: EvalRow, factor: str, binning: ScenarioBinning) -> str:
    ctx = row.sample.context
    if factor == "scale":
        return _numeric_bin(ctx.mean_scale, binning.scale_bins, factor_bins("scale", binning))
    if factor == "speed":
        return _numeric_bin(ctx.mean_speed, binning.speed_bins, factor_bins("speed", binning))
    return {"state": ctx.state, "signal": ctx.signal, "road": ctx.road_type}[factor]


def _summary(rows: list[EvalRow], binning: ScenarioBinning) -> dict:
    return {
        "n": len(rows),
        "low_confidence": len(rows) < binning.min_samples,
        "metrics": base_metrics(rows) if rows else None,
    }


def scenario_slice(rows: list[EvalRow], binning: ScenarioBinning = ScenarioBinning()) -> dict:
    """Per enabled factor, a partition of ``rows`` into bins with metrics per bin."""
    out = {}
    for factor in FACTORS:
        if factor not in binning.factors:
            continue
        parts: dict[str, list[EvalRow]] = {b: [] for b in factor_bins(factor, binning)}
        for r in rows:
            parts[bin_of(r, factor, binning)].append(r)
        out[factor] = {b: _summary(members, binning) for b, members in parts.items()}
    return out


def cross_slice(rows: list[EvalRow], first: str, second: str, binning: ScenarioBinning = ScenarioBinning()) -> dict:
    """Two-factor cross product (experimental; sparse bins are common)."""
    out = {}
    for a in factor_bins(first, binning):
        for b in factor_bins(second, binning):
            members = [r for r in rows if bin_of(r, first, binning) == a and bin_of(r, second, binning) == b]
            out[f"{first}={a}|{second}={b}"] = _summary(members, binning)
    return out


def slice_to_csv(table: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["factor", "bin", "n", "low_confidence", *METRIC_KEYS])
    for factor, bins in table.items():
        for label, cell in bins.items():
            m = cell["metrics"] or {}
            values = ["" if m.get(k) is None else f"{m[k]:.6f}" for k in METRIC_KEYS]
            writer.writerow([factor, label, cell["n"], int(cell["low_confidence"]), *values])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# agreement


@dataclass(frozen=True)
class AgreementCell:
    intention_class: str
    action_class: str
    outcome: str
    count: int
    fraction: float


def outcome_of(intention_ok: bool, action_ok: bool) -> str:
    if intention_ok and action_ok:
        return "both_correct"
    if intention_ok:
        return "intention_only"
    if action_ok:
        return "action_only"
    return "both_incorrect"


def agreement_from_records(records: list[tuple[int, int, bool, bool]]) -> list[AgreementCell]:
    """Cells from (intention gt, action gt, intention correct, action correct) tuples."""
    if not records:
        raise JoinMismatch("no matched samples")
    counts = {
        (i, a, o): 0
        for i in range(len(INTENTION_CLASSES))
        for a in range(len(ACTION_CLASSES))
        for o in OUTCOMES
    }
    for i_gt, a_gt, i_ok, a_ok in records:
        counts[(i_gt, a_gt, outcome_of(i_ok, a_ok))] += 1
    total = len(records)
    return [
        AgreementCell(INTENTION_CLASSES[i], ACTION_CLASSES[a], o, c, c / total)
        for (i, a, o), c in counts.items()
    ]


def agreement(intention_rows: list[EvalRow], action_rows: list[EvalRow]) -> list[AgreementCell]:
    """Joint correctness of one model on the same windows for both tasks.

    Rows are matched on the window (pedestrian and start frame), since the
    sample ids of the two tasks differ only in their task suffix.
    """
    by_window = {r.sample.window_key: r for r in action_rows}
    records = []
    for ir in intention_rows:
        ar = by_window.get(ir.sample.window_key)
        if ar is None:
            continue
        i_gt, a_gt = ir.sample.class_index, ar.sample.class_index
        records.append(
            (i_gt, a_gt, argmax(ir.pred.confidences) == i_gt, argmax(ar.pred.confidences) == a_gt)
        )
    if not records:
        raise JoinMismatch("intention and action rows share no windows")
    return agreement_from_records(records)


def outcome_fractions(cells: list[AgreementCell]) -> dict[str, float]:
    total = sum(c.count for c in cells)
    return {o: sum(c.count for c in cells if c.outcome == o) / total for o in OUTCOMES}


def agreement_to_csv(cells: list[AgreementCell]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["intention_class", "action_class", "outcome", "count", "fraction"])
    for c in cells:
        writer.writerow([c.intention_class, c.action_class, c.outcome, c.count, f"{c.fraction:.6f}"])
    return buf.getvalue()

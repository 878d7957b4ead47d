"""Per-sample weights for action (time-to-event) and risk (region) evaluation."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .errors import EmptyInput, OutOfRangeTte, SchemeTaskMismatch
from .metrics_core import base_metrics
from .predlog import EvalRow
from .risk_grid import RiskGridConfig, risk_weight

SCHEMES = ("tte", "risk_region", "uniform")


@dataclass(frozen=True)
class TteWeightConfig:
    sigma_a: float = 0.3
    tte_max_ref: float = 90.0

    def __post_init__(self):
        if self.sigma_a <= 0 or self.tte_max_ref <= 0:
            raise ValueError("sigma_a and tte_max_ref must be positive")


def tte_weight_raw(tte: float, cfg: TteWeightConfig = TteWeightConfig()) -> float:
    """Unnormalized Gaussian weight; samples far from the event weigh most."""
    if not 0 <= tte <= cfg.tte_max_ref:
        raise OutOfRangeTte(f"tte {tte} outside [0, {cfg.tte_max_ref}]")
    d = (cfg.tte_max_ref - tte) / cfg.tte_max_ref
    return math.exp(-0.5 * (d / cfg.sigma_a) ** 2)


def normalize_weights(raw: list[float]) -> list[float]:
    if not raw:
        raise EmptyInput("no weights to normalize")
    if any(not w > 0 for w in raw):
        raise ValueError("weights must be positive")
    total = math.fsum(raw)
    return [w / total for w in raw]


def assign_weights(
    rows: list[EvalRow],
    scheme: str,
    tte_cfg: TteWeightConfig = TteWeightConfig(),
    grid: RiskGridConfig = RiskGridConfig(),
) -> list[EvalRow]:
    """Copies of ``rows`` carrying normalized weights for ``scheme``."""
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    if not rows:
        raise EmptyInput("no rows to weight")
    task = rows[0].sample.task
    if scheme == "tte":
        if task != "action":
            raise SchemeTaskMismatch(f"tte weighting needs action rows, got {task}")
        raw = [tte_weight_raw(r.sample.tte, tte_cfg) for r in rows]
    elif scheme == "risk_region":
        if task != "risk":
            raise SchemeTaskMismatch(f"risk_region weighting needs risk rows, got {task}")
        raw = [risk_weight(int(r.sample.label), grid) for r in rows]
    else:
        raw = [1.0] * len(rows)
    return [dataclasses.replace(r, weight=w) for r, w in zip(rows, normalize_weights(raw))]


def weighted_report(
    rows: list[EvalRow],
    scheme: str,
    tte_cfg: TteWeightConfig = TteWeightConfig(),
    grid: RiskGridConfig = RiskGridConfig(),
    auc_average: str = "macro",
) -> dict:
    """Base and weighted metric maps side by side, plus the weighted rows."""
    unit = [dataclasses.replace(r, weight=1.0) for r in rows]
    weighted = assign_weights(rows, scheme, tte_cfg, grid)
    return {
        "scheme": scheme,
        "base": base_metrics(unit, auc_average),
        "weighted": base_metrics(weighted, auc_average),
        "rows": weighted,
    }

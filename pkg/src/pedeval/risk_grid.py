"""Vertical risk regions of the image plane and their weights.

Regions are numbered 1..n_regions from left to right. The two central
regions (or the single central one, for an odd count) carry the highest
risk; risk decays symmetrically towards the image edges.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass


@dataclass(frozen=True)
class RiskGridConfig:
    region_width: float = 160.0
    n_regions: int = 12
    sigma_r: float = 0.5

    def __post_init__(self):
        if self.region_width <= 0:
            raise ValueError("region_width must be positive")
        if self.n_regions < 2:
            raise ValueError("n_regions must be at least 2")
        if self.sigma_r <= 0:
            raise ValueError("sigma_r must be positive")

    @property
    def m(self) -> int:
        return math.ceil(self.n_regions / 2)


def assign_region(center_x: float, image_width: float, cfg: RiskGridConfig = RiskGridConfig()) -> int:
    """1-based region holding ``center_x``; boundaries belong to the right band."""
    if image_width <= 0:
        raise ValueError("image_width must be positive")
    if cfg.region_width * cfg.n_regions != image_width:
        warnings.warn(
            f"{cfg.n_regions} regions of {cfg.region_width}px do not tile a "
            f"{image_width}px frame; the last region absorbs the remainder",
            stacklevel=2,
        )
    if center_x >= image_width:
        return cfg.n_regions
    x = max(center_x, 0.0)
    return min(cfg.n_regions, 1 + int(math.floor(x / cfg.region_width)))


def class_distance(region: int, cfg: RiskGridConfig = RiskGridConfig()) -> int:
    """Number of regions separating ``region`` from the central region(s)."""
    n = cfg.n_regions
    if not 1 <= region <= n:
        raise ValueError(f"region {region} outside 1..{n}")
    m = cfg.m
    if n % 2 == 1 or region <= m:
        return abs(region - m)
    return abs(region - m - 1)


def risk_weight(region: int, cfg: RiskGridConfig = RiskGridConfig()) -> float:
    d = class_distance(region, cfg)
    return math.exp(-0.5 * (d / (cfg.m * cfg.sigma_r)) ** 2)


def fold_to_risk_class(region: int, cfg: RiskGridConfig = RiskGridConfig()) -> int:
    """Symmetric risk class: 0 at the center, m-1 at the edges."""
    return class_distance(region, cfg)


def weight_vector(cfg: RiskGridConfig = RiskGridConfig()) -> list[float]:
    return [risk_weight(r, cfg) for r in range(1, cfg.n_regions + 1)]

"""Seeded synthetic datasets and prediction logs for desk-scale testing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .annotation import Dataset, FrameObservation, PedestrianInstance, VideoMeta
from .predlog import PredictionRecord
from .risk_grid import RiskGridConfig
from .sampler import SamplerConfig, TaskSample, action_samples_on_windows, sample_dataset, task_arity

PREDICTORS = ("oracle", "noisy", "constant", "anti_oracle")
LAWS = ("uniform", "bimodal")


@dataclass(frozen=True)
class SynthSpec:
    n_instances: int = 200
    track_len_range: tuple[int, int] = (40, 180)
    crossing_frac: float = 0.3
    intention_prob_law: str = "bimodal"
    predictor: str = "noisy"
    epsilon: float = 0.3
    constant: float = 0.5
    seed: int = 7
    # also emit action predictions on intention windows (agreement analysis)
    joint: bool = False
    width: int = 1920
    height: int = 1080
    instances_per_video: int = 20

    def __post_init__(self):
        lo, hi = self.track_len_range
        if not 1 <= lo <= hi:
            raise ValueError("track_len_range must satisfy 1 <= min <= max")
        for name in ("crossing_frac", "epsilon", "constant"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.intention_prob_law not in LAWS:
            raise ValueError(f"intention_prob_law must be one of {LAWS}")
        if self.predictor not in PREDICTORS:
            raise ValueError(f"predictor must be one of {PREDICTORS}")

    @property
    def model_name(self) -> str:
        if self.predictor == "noisy":
            return f"noisy-{self.epsilon:g}"
        if self.predictor == "constant":
            return f"constant-{self.constant:g}"
        return self.predictor


def _r3(x: float) -> float:
    return float(round(float(x), 3))


def _make_instance(k: int, crossing: bool, spec: SynthSpec, rng: np.random.Generator) -> PedestrianInstance:
    length = int(rng.integers(spec.track_len_range[0], spec.track_len_range[1] + 1))
    first = int(rng.integers(0, 300))
    t = np.arange(length)
    x0 = rng.uniform(60, spec.width - 60)
    # crossers drift towards the image center, others wander slowly
    drift = (spec.width / 2 - x0) / max(length, 1) * rng.uniform(0.5, 1.5) if crossing else rng.normal(0, 1.0)
    cx = x0 + drift * t + rng.normal(0, 1.5, length)
    h = rng.uniform(40, 200) + rng.uniform(0, 0.5) * t + rng.normal(0, 0.8, length)
    h = np.maximum(h, 10.0)
    bottom = spec.height * 0.65 + 0.3 * h
    w = 0.41 * h

    walking_base = bool(rng.random() < (0.8 if crossing else 0.4))
    switch = int(rng.integers(0, length)) if rng.random() < 0.5 else length
    signal = str(rng.choice(["none", "forbid", "allow"], p=[0.6, 0.2, 0.2]))
    stationary = rng.random() < 0.25
    base_speed = 0.0 if stationary else rng.uniform(2, 45)
    speed = np.zeros(length) if stationary else np.clip(base_speed + rng.normal(0, 1.0, length), 0, None)
    occl = rng.choice(["none", "partial", "full"], size=length, p=[0.85, 0.12, 0.03])

    frames = tuple(
        FrameObservation(
            frame_index=first + i,
            bbox=(_r3(cx[i] - w[i] / 2), _r3(bottom[i] - h[i]), _r3(cx[i] + w[i] / 2), _r3(bottom[i])),
            occlusion=str(occl[i]),
            walking=walking_base if i < switch else not walking_base,
            signal_state=signal,
            ego_speed=_r3(speed[i]),
        )
        for i in range(length)
    )
    last = first + length - 1
    crossing_point = last - int(rng.integers(0, 11)) if crossing else last
    crossing_point = max(crossing_point, first)

    labelled = rng.random() < 0.9
    intention_prob = exp_start = critical = None
    if labelled:
        if spec.intention_prob_law == "uniform":
            intention_prob = _r3(rng.uniform(0, 1))
        else:
            intention_prob = _r3(rng.beta(5, 2) if crossing else rng.beta(2, 5))
        exp_start = first + int(rng.integers(0, length // 4 + 1))
        critical = max(exp_start, min(last, crossing_point) - int(rng.integers(0, length // 4 + 1)))
    return PedestrianInstance(
        ped_id=f"p{k:05d}",
        video_id=f"v{k // spec.instances_per_video:04d}",
        frames=frames,
        crossing_label="crossing" if crossing else "non_crossing",
        crossing_point=crossing_point,
        intention_prob=intention_prob,
        exp_start_point=exp_start,
        critical_point=critical,
        road_type=str(rng.choice(["one_way", "two_way", "unknown"])),
    )


def synth_dataset(spec: SynthSpec, rng: np.random.Generator | None = None) -> Dataset:
    rng = rng if rng is not None else np.random.default_rng(spec.seed)
    n = spec.n_instances
    n_cross = int(round(spec.crossing_frac * n))
    crossers = set(rng.permutation(n)[:n_cross].tolist())
    instances = tuple(_make_instance(k, k in crossers, spec, rng) for k in range(n))
    n_videos = -(-n // spec.instances_per_video) if n else 0
    videos = tuple(VideoMeta(f"v{v:04d}", spec.width, spec.height, 30) for v in range(n_videos))
    return Dataset(name=f"synth-seed{spec.seed}", split="test", videos=videos, instances=instances)


def _confidences(gt: int, k: int, spec: SynthSpec, rng: np.random.Generator) -> tuple[float, ...]:
    if spec.predictor == "oracle":
        conf = np.eye(k)[gt]
    elif spec.predictor == "anti_oracle":
        conf = np.eye(k)[(gt + 1) % k]
    elif spec.predictor == "constant":
        conf = np.full(k, (1.0 - spec.constant) / (k - 1))
        conf[-1] = spec.constant
    else:
        believed = gt
        if rng.random() < spec.epsilon:
            believed = int((gt + rng.integers(1, k)) % k)
        conf = 0.6 * np.eye(k)[believed] + 0.4 * rng.dirichlet(np.ones(k))
    return tuple(float(min(1.0, max(0.0, round(float(c), 6)))) for c in conf)


def synth_predictions(
    ds: Dataset,
    spec: SynthSpec,
    rng: np.random.Generator | None = None,
    cfg: SamplerConfig = SamplerConfig(),
    grid: RiskGridConfig = RiskGridConfig(),
) -> list[PredictionRecord]:
    """One record per sample of every task under ``cfg``."""
    rng = rng if rng is not None else np.random.default_rng([spec.seed, 1])
    samples: list[TaskSample] = []
    for task in ("intention", "action", "risk"):
        samples.extend(sample_dataset(ds, task, cfg, grid))
    if spec.joint:
        seen = {s.sample_id for s in samples}
        extra = action_samples_on_windows(ds, [s for s in samples if s.task == "intention"])
        samples.extend(s for s in extra if s.sample_id not in seen)
    out = []
    for s in samples:
        k = task_arity(s.task, grid.n_regions)
        out.append(PredictionRecord(s.sample_id, spec.model_name, s.task, _confidences(s.class_index, k, spec, rng)))
    return out


def synthesize(spec: SynthSpec) -> tuple[Dataset, list[PredictionRecord]]:
    data_rng, pred_rng = (np.random.default_rng(s) for s in np.random.SeedSequence(spec.seed).spawn(2))
    ds = synth_dataset(spec, data_rng)
    return ds, synth_predictions(ds, spec, pred_rng)

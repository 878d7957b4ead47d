"""Observation-window extraction for the intention, action and risk tasks."""

from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _jsonfmt
from .annotation import Dataset, PedestrianInstance, VideoMeta
from .errors import IoFailure, MalformedLine
from .risk_grid import RiskGridConfig, assign_region

TASKS = ("intention", "action", "risk")
INTENTION_CLASSES = ("NCI", "UI", "CI")
ACTION_CLASSES = ("NC", "C")
# tie precedence for the per-window signal vote
_SIGNAL_PRECEDENCE = ("forbid", "allow", "none")


@dataclass(frozen=True)
class SamplerConfig:
    obs_len: int = 15
    overlap_frac: float = 0.3
    tte_min: int = 30
    tte_max: int = 90
    horizon: int = 90
    intention_bins: tuple[float, float] = (1 / 3, 2 / 3)
    keep_long_tte: bool = False
    # where action/risk windows may start: "track" or "exp_start"
    window_origin: str = "track"

    def __post_init__(self):
        if self.obs_len < 1:
            raise ValueError("obs_len must be >= 1")
        if not 0 <= self.overlap_frac < 1:
            raise ValueError("overlap_frac must lie in [0, 1)")
        if self.tte_min > self.tte_max:
            raise ValueError("tte_min must not exceed tte_max")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        lo, hi = self.intention_bins
        if not 0 < lo < hi < 1:
            raise ValueError("intention_bins must be strictly increasing cut points in (0, 1)")
        if self.window_origin not in ("track", "exp_start"):
            raise ValueError("window_origin must be 'track' or 'exp_start'")

    @property
    def stride(self) -> int:
        return max(1, int(np.floor(self.obs_len * (1.0 - self.overlap_frac) + 1e-9)))


@dataclass(frozen=True)
class ScenarioContext:
    mean_scale: float
    state: str
    mean_speed: float
    signal: str
    road_type: str


@dataclass(frozen=True)
class TaskSample:
    sample_id: str
    ped_id: str
    task: str
    obs_start: int
    obs_end: int
    label: str | int
    context: ScenarioContext
    tte: int | None = None

    @property
    def class_index(self) -> int:
        return label_index(self.task, self.label)

    @property
    def window_key(self) -> str:
        """Identifier of the window, shared by samples of different tasks."""
        return f"{self.ped_id}#{self.obs_start}"


def make_sample_id(ped_id: str, start: int, task: str) -> str:
    return f"{ped_id}#{start}#{task}"


def label_index(task: str, label: str | int) -> int:
    if task == "intention":
        return INTENTION_CLASSES.index(label)
    if task == "action":
        return ACTION_CLASSES.index(label)
    if task == "risk":
        return int(label) - 1
    raise ValueError(f"unknown task {task!r}")


def task_arity(task: str, n_regions: int = 12) -> int:
    return {"intention": 3, "action": 2, "risk": n_regions}[task]


def window_starts(track_first: int, track_last: int, cfg: SamplerConfig = SamplerConfig()) -> list[int]:
    """Start frames of every window of ``obs_len`` frames fitting in the range."""
    if track_last < track_first:
        raise ValueError("track_last precedes track_first")
    last_start = track_last - cfg.obs_len + 1
    return list(range(track_first, last_start + 1, cfg.stride)) if last_start >= track_first else []


def intention_class(prob: float, cfg: SamplerConfig = SamplerConfig()) -> str:
    lo, hi = cfg.intention_bins
    if prob < lo:
        return "NCI"
    if prob < hi:
        return "UI"
    return "CI"


def aggregate_context(inst: PedestrianInstance, obs_start: int, obs_end: int) -> ScenarioContext:
    frames = [f for f in inst.frames if obs_start <= f.frame_index <= obs_end]
    if not frames:
        raise ValueError(f"window [{obs_start}, {obs_end}] holds no frames of {inst.ped_id}")
    heights = [f.height for f in frames]
    walking = np.mean([1.0 if f.walking else 0.0 for f in frames])
    counts = {s: 0 for s in _SIGNAL_PRECEDENCE}
    for f in frames:
        counts[f.signal_state] += 1
    signal = max(_SIGNAL_PRECEDENCE, key=lambda s: (counts[s], -_SIGNAL_PRECEDENCE.index(s)))
    return ScenarioContext(
        mean_scale=float(np.mean(heights)),
        state="walking" if walking > 0.5 else "standing",
        mean_speed=float(np.mean([f.ego_speed for f in frames])),
        signal=signal,
        road_type=inst.road_type,
    )


def _complete_windows(inst: PedestrianInstance, first: int, last: int, cfg: SamplerConfig) -> list[int]:
    # skip windows that would span gaps in the annotation
    present = {f.frame_index for f in inst.frames}
    return [
        s for s in window_starts(first, last, cfg)
        if all(k in present for k in range(s, s + cfg.obs_len))
    ]


def _origin(inst: PedestrianInstance, cfg: SamplerConfig) -> int:
    if cfg.window_origin == "exp_start" and inst.exp_start_point is not None:
        return max(inst.first_frame, inst.exp_start_point)
    return inst.first_frame


def sample_intention(inst: PedestrianInstance, cfg: SamplerConfig = SamplerConfig()) -> list[TaskSample]:
    if inst.intention_prob is None or inst.exp_start_point is None or inst.critical_point is None:
        return []
    label = intention_class(inst.intention_prob, cfg)
    out = []
    for s in _complete_windows(inst, inst.exp_start_point, inst.critical_point, cfg):
        e = s + cfg.obs_len - 1
        out.append(
            TaskSample(
                sample_id=make_sample_id(inst.ped_id, s, "intention"),
                ped_id=inst.ped_id,
                task="intention",
                obs_start=s,
                obs_end=e,
                label=label,
                context=aggregate_context(inst, s, e),
            )
        )
    return out


def sample_action(inst: PedestrianInstance, cfg: SamplerConfig = SamplerConfig()) -> list[TaskSample]:
    label = "C" if inst.crossing_label == "crossing" else "NC"
    out = []
    for s in _complete_windows(inst, _origin(inst, cfg), inst.last_frame, cfg):
        e = s + cfg.obs_len - 1
        tte = inst.crossing_point - e
        if tte < cfg.tte_min or (tte > cfg.tte_max and not cfg.keep_long_tte):
            continue
        out.append(
            TaskSample(
                sample_id=make_sample_id(inst.ped_id, s, "action"),
                ped_id=inst.ped_id,
                task="action",
                obs_start=s,
                obs_end=e,
                label=label,
                context=aggregate_context(inst, s, e),
                tte=tte,
            )
        )
    return out


def sample_risk(
    inst: PedestrianInstance,
    video: VideoMeta,
    cfg: SamplerConfig = SamplerConfig(),
    grid: RiskGridConfig = RiskGridConfig(),
) -> list[TaskSample]:
    frames = inst.frames
    indices = [f.frame_index for f in frames]
    out = []
    for s in _complete_windows(inst, _origin(inst, cfg), inst.last_frame, cfg):
        e = s + cfg.obs_len - 1
        target = e + cfg.horizon
        # latest annotated frame not after the target; falls back to the last visible box
        k = int(np.searchsorted(indices, target, side="right")) - 1
        region = assign_region(frames[k].center_x, video.width, grid)
        out.append(
            TaskSample(
                sample_id=make_sample_id(inst.ped_id, s, "risk"),
                ped_id=inst.ped_id,
                task="risk",
                obs_start=s,
                obs_end=e,
                label=region,
                context=aggregate_context(inst, s, e),
            )
        )
    return out


def sample_instance(
    inst: PedestrianInstance,
    task: str,
    video: VideoMeta | None = None,
    cfg: SamplerConfig = SamplerConfig(),
    grid: RiskGridConfig = RiskGridConfig(),
) -> list[TaskSample]:
    if task == "intention":
        return sample_intention(inst, cfg)
    if task == "action":
        return sample_action(inst, cfg)
    if task == "risk":
        if video is None:
            raise ValueError("risk sampling needs the instance's VideoMeta")
        return sample_risk(inst, video, cfg, grid)
    raise ValueError(f"unknown task {task!r}")


def sample_dataset(
    ds: Dataset,
    task: str,
    cfg: SamplerConfig = SamplerConfig(),
    grid: RiskGridConfig = RiskGridConfig(),
    threads: int = 1,
) -> list[TaskSample]:
    """Samples of every instance, in instance order then by window start."""

    def one(inst: PedestrianInstance) -> list[TaskSample]:
        video = ds.video(inst.video_id) if task == "risk" else None
        return sample_instance(inst, task, video, cfg, grid)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(one, ds.instances))
    else:
        chunks = [one(inst) for inst in ds.instances]
    return [s for chunk in chunks for s in chunk]


def action_samples_on_windows(ds: Dataset, windows: list[TaskSample]) -> list[TaskSample]:
    """Action-labelled copies of (intention) windows for the agreement analysis."""
    by_ped = {i.ped_id: i for i in ds.instances}
    out = []
    for s in windows:
        inst = by_ped[s.ped_id]
        out.append(
            dataclasses.replace(
                s,
                sample_id=make_sample_id(s.ped_id, s.obs_start, "action"),
                task="action",
                label="C" if inst.crossing_label == "crossing" else "NC",
                tte=inst.crossing_point - s.obs_end,
            )
        )
    return out


# ---------------------------------------------------------------------------
# JSONL export


def sample_to_dict(s: TaskSample) -> dict:
    out = {
        "sample_id": s.sample_id,
        "ped_id": s.ped_id,
        "task": s.task,
        "obs_start": s.obs_start,
        "obs_end": s.obs_end,
        "label": s.label,
        "context": {
            "mean_scale": s.context.mean_scale,
            "state": s.context.state,
            "mean_speed": s.context.mean_speed,
            "signal": s.context.signal,
            "road_type": s.context.road_type,
        },
    }
    if s.tte is not None:
        out["tte"] = s.tte
    return out


def sample_from_dict(d: dict) -> TaskSample:
    c = d["context"]
    return TaskSample(
        sample_id=d["sample_id"],
        ped_id=d["ped_id"],
        task=d["task"],
        obs_start=int(d["obs_start"]),
        obs_end=int(d["obs_end"]),
        label=d["label"],
        context=ScenarioContext(
            mean_scale=float(c["mean_scale"]),
            state=c["state"],
            mean_speed=float(c["mean_speed"]),
            signal=c["signal"],
            road_type=c["road_type"],
        ),
        tte=d.get("tte"),
    )


def write_samples(samples: list[TaskSample], path: str | Path) -> None:
    text = "".join(_jsonfmt.dumps(sample_to_dict(s)) + "\n" for s in samples)
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_samples(path: str | Path) -> list[TaskSample]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    out = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            out.append(sample_from_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise MalformedLine(lineno, str(exc)) from exc
    return out

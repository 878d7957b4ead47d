"""Canonical annotation model and its JSON reader/writer.

The on-disk format is a single UTF-8 JSON object::

    {"name": ..., "split": "train|val|test",
     "videos": [{"video_id", "width", "height", "fps"}, ...],
     "instances": [{"ped_id", "video_id", "frames": [...], ...}, ...]}

Floats are written with exactly six decimals and keys are sorted, so writing
the same dataset twice produces identical bytes. Optional fields that are
absent are omitted rather than written as ``null``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import _jsonfmt
from .errors import DanglingVideoRef, IoFailure, MalformedFile, SchemaViolation

OCCLUSION = ("none", "partial", "full")
SIGNAL_STATES = ("forbid", "allow", "none")
CROSSING_LABELS = ("crossing", "non_crossing")
ROAD_TYPES = ("one_way", "two_way", "unknown")
SPLITS = ("train", "val", "test")


@dataclass(frozen=True)
class VideoMeta:
    video_id: str
    width: int
    height: int
    fps: int = 30


@dataclass(frozen=True)
class FrameObservation:
    frame_index: int
    bbox: tuple[float, float, float, float]
    occlusion: str = "none"
    walking: bool = False
    signal_state: str = "none"
    ego_speed: float = 0.0

    @property
    def height(self) -> float:
        return self.bbox[3] - self.bbox[1]

    @property
    def center_x(self) -> float:
        return (self.bbox[0] + self.bbox[2]) / 2.0


@dataclass(frozen=True)
class PedestrianInstance:
    ped_id: str
    video_id: str
    frames: tuple[FrameObservation, ...]
    crossing_label: str
    crossing_point: int
    intention_prob: float | None = None
    exp_start_point: int | None = None
    critical_point: int | None = None
    road_type: str = "unknown"

    @property
    def first_frame(self) -> int:
        return self.frames[0].frame_index

    @property
    def last_frame(self) -> int:
        return self.frames[-1].frame_index

    def frame_map(self) -> dict[int, FrameObservation]:
        return {f.frame_index: f for f in self.frames}


@dataclass(frozen=True)
class Dataset:
    name: str
    split: str
    videos: tuple[VideoMeta, ...] = ()
    instances: tuple[PedestrianInstance, ...] = ()
    _video_index: dict[str, VideoMeta] = field(default=None, init=False, repr=False, compare=False)

    def video(self, video_id: str) -> VideoMeta:
        if self._video_index is None:
            object.__setattr__(self, "_video_index", {v.video_id: v for v in self.videos})
        return self._video_index[video_id]


def instance_duration(inst: PedestrianInstance) -> int:
    """Number of annotated frames in the track."""
    return len(inst.frames)


# ---------------------------------------------------------------------------
# validation


def validate_instance(inst: PedestrianInstance) -> list[str]:
    """Return every invariant violation of ``inst`` (empty list when valid)."""
    where = f"instance {inst.ped_id!r}"
    problems = []
    if not inst.frames:
        return [f"{where}: frames must be non-empty"]
    indices = [f.frame_index for f in inst.frames]
    if len(set(indices)) != len(indices):
        problems.append(f"{where}: duplicate frame_index values")
    if any(b <= a for a, b in zip(indices, indices[1:])):
        problems.append(f"{where}: frames not strictly increasing by frame_index")
    for f in inst.frames:
        fw = f"{where} frame {f.frame_index}"
        if f.frame_index < 0:
            problems.append(f"{fw}: frame_index must be non-negative")
        x1, y1, x2, y2 = f.bbox
        if not math.isfinite(x1 + y1 + x2 + y2):
            problems.append(f"{fw}: bbox has non-finite coordinates")
        elif x1 > x2 or y1 > y2:
            problems.append(f"{fw}: bbox must satisfy x1 <= x2 and y1 <= y2")
        if f.occlusion not in OCCLUSION:
            problems.append(f"{fw}: occlusion {f.occlusion!r} not in {OCCLUSION}")
        if f.signal_state not in SIGNAL_STATES:
            problems.append(f"{fw}: signal_state {f.signal_state!r} not in {SIGNAL_STATES}")
        if not (f.ego_speed >= 0 and math.isfinite(f.ego_speed)):
            problems.append(f"{fw}: ego_speed must be a non-negative number")
    first, last = min(indices), max(indices)
    if inst.crossing_label not in CROSSING_LABELS:
        problems.append(f"{where}: crossing_label {inst.crossing_label!r} not in {CROSSING_LABELS}")
    if inst.road_type not in ROAD_TYPES:
        problems.append(f"{where}: road_type {inst.road_type!r} not in {ROAD_TYPES}")
    if inst.crossing_point < first:
        problems.append(f"{where}: crossing_point {inst.crossing_point} precedes first frame {first}")
    if inst.crossing_point > last:
        problems.append(f"{where}: crossing_point {inst.crossing_point} exceeds last frame {last}")
    if inst.intention_prob is not None and not 0.0 <= inst.intention_prob <= 1.0:
        problems.append(f"{where}: intention_prob {inst.intention_prob} outside [0, 1]")
    es, cp = inst.exp_start_point, inst.critical_point
    if es is not None and cp is not None:
        if es > cp:
            problems.append(f"{where}: critical_point {cp} precedes exp_start_point {es}")
        for name, v in (("exp_start_point", es), ("critical_point", cp)):
            if not first <= v <= last:
                problems.append(f"{where}: {name} {v} outside track [{first}, {last}]")
    return problems


def validate_dataset(ds: Dataset, check_instances: bool = True) -> None:
    problems = []
    if ds.split not in SPLITS:
        problems.append(f"split {ds.split!r} not in {SPLITS}")
    seen = set()
    for v in ds.videos:
        if v.video_id in seen:
            problems.append(f"video {v.video_id!r}: duplicate video_id")
        seen.add(v.video_id)
        for name in ("width", "height", "fps"):
            if getattr(v, name) <= 0:
                problems.append(f"video {v.video_id!r}: {name} must be positive")
    ped_ids = set()
    for inst in ds.instances:
        if inst.ped_id in ped_ids:
            problems.append(f"instance {inst.ped_id!r}: duplicate ped_id")
        ped_ids.add(inst.ped_id)
        if check_instances:
            problems.extend(validate_instance(inst))
    if problems:
        raise SchemaViolation(problems)
    dangling = [(i.ped_id, i.video_id) for i in ds.instances if i.video_id not in seen]
    if dangling:
        raise DanglingVideoRef(dangling)


# ---------------------------------------------------------------------------
# decoding


class _Fields:
    """Typed field extraction that records problems instead of raising."""

    def __init__(self, obj: Any, where: str, problems: list[str]):
        self.where = where
        self.problems = problems
        if not isinstance(obj, dict):
            problems.append(f"{where}: expected an object")
            obj = {}
        self.obj = obj

    def get(self, key: str, kind: str, required: bool = True, default: Any = None) -> Any:
        if key not in self.obj:
            if required:
                self.problems.append(f"{self.where}: missing field {key!r}")
            return default
        value = self.obj[key]
        ok = {
            "str": isinstance(value, str),
            "int": isinstance(value, int) and not isinstance(value, bool),
            "float": isinstance(value, (int, float)) and not isinstance(value, bool),
            "bool": isinstance(value, bool),
            "list": isinstance(value, list),
        }[kind]
        if not ok:
            self.problems.append(f"{self.where}: field {key!r} must be {kind}, got {value!r}")
            return default
        return float(value) if kind == "float" else value


_FRAME_DEFAULTS = {"occlusion": "none", "walking": False, "signal_state": "none", "ego_speed": 0.0}


def _is_num(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _decode_frame(obj: Any, where: str, problems: list[str]) -> FrameObservation | None:
    if not isinstance(obj, dict):
        problems.append(f"{where}: expected an object")
        return None
    n_before = len(problems)
    idx = obj.get("frame_index")
    if not isinstance(idx, int) or isinstance(idx, bool):
        problems.append(f"{where}: frame_index missing or not an integer")
    bbox = obj.get("bbox")
    if not (isinstance(bbox, list) and len(bbox) == 4 and all(_is_num(v) for v in bbox)):
        problems.append(f"{where}: bbox must be four numbers")
    vals = {k: obj.get(k, d) for k, d in _FRAME_DEFAULTS.items()}
    if not isinstance(vals["occlusion"], str) or not isinstance(vals["signal_state"], str):
        problems.append(f"{where}: occlusion and signal_state must be strings")
    if not isinstance(vals["walking"], bool):
        problems.append(f"{where}: walking must be a boolean")
    if not _is_num(vals["ego_speed"]):
        problems.append(f"{where}: ego_speed must be a number")
    if len(problems) != n_before:
        return None
    return FrameObservation(
        idx,
        (float(bbox[0]), float(bbox[1]), float(bbox[2]), float(bbox[3])),
        vals["occlusion"],
        vals["walking"],
        vals["signal_state"],
        float(vals["ego_speed"]),
    )


def _decode_instance(obj: Any, where: str, problems: list[str]) -> PedestrianInstance | None:
    f = _Fields(obj, where, problems)
    n_before = len(problems)
    ped_id = f.get("ped_id", "str", default="?")
    where = f"instance {ped_id!r}"
    f.where = where
    raw_frames = f.get("frames", "list", default=[])
    frames = []
    for k, fo in enumerate(raw_frames):
        fr = _decode_frame(fo, f"{where} frames[{k}]", problems)
        if fr is not None:
            frames.append(fr)
    frames.sort(key=lambda fr: fr.frame_index)
    inst = PedestrianInstance(
        ped_id=ped_id,
        video_id=f.get("video_id", "str", default=""),
        frames=tuple(frames),
        crossing_label=f.get("crossing_label", "str", default="non_crossing"),
        crossing_point=f.get("crossing_point", "int", default=0),
        intention_prob=f.get("intention_prob", "float", required=False),
        exp_start_point=f.get("exp_start_point", "int", required=False),
        critical_point=f.get("critical_point", "int", required=False),
        road_type=f.get("road_type", "str", default="unknown"),
    )
    if len(problems) != n_before:
        return None
    problems.extend(validate_instance(inst))
    return inst if len(problems) == n_before else None


def dataset_from_dict(obj: Any) -> Dataset:
    problems: list[str] = []
    top = _Fields(obj, "dataset", problems)
    name = top.get("name", "str", default="")
    split = top.get("split", "str", default="test")
    videos = []
    for k, vo in enumerate(top.get("videos", "list", default=[])):
        vf = _Fields(vo, f"videos[{k}]", problems)
        videos.append(
            VideoMeta(
                video_id=vf.get("video_id", "str", default=""),
                width=vf.get("width", "int", default=1),
                height=vf.get("height", "int", default=1),
                fps=vf.get("fps", "int", required=False, default=30),
            )
        )
    instances = []
    for k, io in enumerate(top.get("instances", "list", default=[])):
        inst = _decode_instance(io, f"instances[{k}]", problems)
        if inst is not None:
            instances.append(inst)
    if problems:
        raise SchemaViolation(problems)
    ds = Dataset(name=name, split=split, videos=tuple(videos), instances=tuple(instances))
    validate_dataset(ds, check_instances=False)
    return ds


def read_dataset(path: str | Path) -> Dataset:
    """Load and fully validate a canonical dataset file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise MalformedFile(f"{path}: not UTF-8: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise MalformedFile(f"{path}: top level must be a JSON object")
    return dataset_from_dict(obj)


# ---------------------------------------------------------------------------
# encoding


def frame_to_dict(f: FrameObservation) -> dict:
    return {
        "frame_index": int(f.frame_index),
        "bbox": [float(v) for v in f.bbox],
        "occlusion": f.occlusion,
        "walking": bool(f.walking),
        "signal_state": f.signal_state,
        "ego_speed": float(f.ego_speed),
    }


def instance_to_dict(inst: PedestrianInstance) -> dict:
    out = {
        "ped_id": inst.ped_id,
        "video_id": inst.video_id,
        "frames": [frame_to_dict(f) for f in inst.frames],
        "crossing_label": inst.crossing_label,
        "crossing_point": int(inst.crossing_point),
        "road_type": inst.road_type,
    }
    if inst.intention_prob is not None:
        out["intention_prob"] = float(inst.intention_prob)
    if inst.exp_start_point is not None:
        out["exp_start_point"] = int(inst.exp_start_point)
    if inst.critical_point is not None:
        out["critical_point"] = int(inst.critical_point)
    return out


def dataset_to_dict(ds: Dataset) -> dict:
    return {
        "name": ds.name,
        "split": ds.split,
        "videos": [
            {"video_id": v.video_id, "width": int(v.width), "height": int(v.height), "fps": int(v.fps)}
            for v in ds.videos
        ],
        "instances": [instance_to_dict(i) for i in ds.instances],
    }


def dumps_dataset(ds: Dataset) -> str:
    """One instance per line inside an otherwise compact, key-sorted object."""
    d = dataset_to_dict(ds)
    instances = ",\n".join(_jsonfmt.dumps(i) for i in d["instances"])
    head = "{\"instances\": [\n" + instances + "\n]" if instances else '{"instances": []'
    rest = ", ".join(f"{_jsonfmt.dumps(k)}: {_jsonfmt.dumps(d[k])}" for k in ("name", "split", "videos"))
    return f"{head}, {rest}}}\n"


def write_dataset(ds: Dataset, path: str | Path) -> None:
    text = dumps_dataset(ds)
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc

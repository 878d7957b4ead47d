import sys
from pathlib import Path

import pytest

from pedeval.annotation import FrameObservation, PedestrianInstance
from pedeval.predlog import EvalRow, PredictionRecord
from pedeval.sampler import ScenarioContext, TaskSample, make_sample_id

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

CTX = ScenarioContext(mean_scale=100.0, state="walking", mean_speed=0.0, signal="none", road_type="unknown")


def make_instance(first=0, last=34, ped_id="p1", video_id="v1", **kw):
    frames = tuple(
        FrameObservation(
            frame_index=k,
            bbox=(900.0, 400.0, 980.0, 600.0),
            walking=True,
            ego_speed=5.0,
        )
        for k in range(first, last + 1)
    )
    kw.setdefault("crossing_label", "crossing")
    kw.setdefault("crossing_point", last)
    return PedestrianInstance(ped_id=ped_id, video_id=video_id, frames=frames, **kw)


def make_row(task, label, confs, ped_id="p1", start=0, weight=1.0, tte=None, ctx=CTX, model="m"):
    sid = make_sample_id(ped_id, start, task)
    sample = TaskSample(sid, ped_id, task, start, start + 14, label, ctx, tte)
    return EvalRow(sample, PredictionRecord(sid, model, task, tuple(confs)), weight)


@pytest.fixture
def instance():
    return make_instance

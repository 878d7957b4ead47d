"""
Cutting a pedestrian track into task samples
============================================

One synthetic crossing pedestrian, sampled three ways.
"""

import numpy as np

from pedeval.annotation import FrameObservation, PedestrianInstance, VideoMeta
from pedeval.sampler import SamplerConfig, sample_action, sample_intention, sample_risk

# a 150-frame track drifting from the left edge toward the image center
xs = np.linspace(200, 900, 150)
frames = tuple(
    FrameObservation(frame_index=k, bbox=(x - 30, 400.0, x + 30, 560.0), walking=True, ego_speed=12.0)
    for k, x in enumerate(xs)
)
ped = PedestrianInstance(
    ped_id="demo",
    video_id="v0",
    frames=frames,
    crossing_label="crossing",
    crossing_point=140,
    intention_prob=0.82,
    exp_start_point=0,
    critical_point=100,
)

cfg = SamplerConfig()
print("window stride:", cfg.stride)

# intention: every complete window between the two labelled points, one label
for s in sample_intention(ped, cfg):
    print("intention", s.obs_start, s.obs_end, s.label)

# action: only windows ending 30..90 frames before the crossing survive
for s in sample_action(ped, cfg):
    print("action", s.obs_start, s.obs_end, "tte", s.tte)

# risk: where the box center sits 90 frames after the window ends
for s in sample_risk(ped, VideoMeta("v0", 1920, 1080), cfg):
    print("risk", s.obs_start, s.obs_end, "region", s.label)

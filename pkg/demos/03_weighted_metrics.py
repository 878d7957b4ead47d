"""
Weighting action samples by time-to-event and risk samples by region
====================================================================

Late windows (short time-to-event) get small weights, so a model that only
fails close to the crossing loses little weighted accuracy.
"""

import numpy as np

from pedeval.metrics_weighted import tte_weight_raw, weighted_report
from pedeval.predlog import EvalRow, PredictionRecord
from pedeval.risk_grid import weight_vector
from pedeval.sampler import ScenarioContext, TaskSample, make_sample_id

ctx = ScenarioContext(mean_scale=80.0, state="walking", mean_speed=10.0, signal="none", road_type="two_way")

for tte in (90, 75, 60, 45, 30):
    print(f"tte {tte:2d} -> raw weight {tte_weight_raw(tte):.5f}")

print("risk weights by region:", np.round(weight_vector(), 4))


def action_row(k, tte, correct):
    sid = make_sample_id(f"p{k}", 0, "action")
    sample = TaskSample(sid, f"p{k}", "action", 0, 14, "C", ctx, tte)
    confs = (0.2, 0.8) if correct else (0.8, 0.2)
    return EvalRow(sample, PredictionRecord(sid, "toy", "action", confs))


# right on every early window, wrong on every late one
rows = [action_row(k, tte, tte >= 60) for k, tte in enumerate(range(30, 91, 5))]
rep = weighted_report(rows, "tte")
print("base Acc    ", round(rep["base"]["Acc"], 4))
print("weighted Acc", round(rep["weighted"]["Acc"], 4))

"""
Base classification metrics on a handful of rows
================================================
"""

from pedeval.metrics_core import accumulate, base_metrics, per_class_report
from pedeval.predlog import EvalRow, PredictionRecord
from pedeval.sampler import ScenarioContext, TaskSample, make_sample_id

ctx = ScenarioContext(mean_scale=80.0, state="walking", mean_speed=0.0, signal="none", road_type="unknown")


def row(label, confs, start):
    sid = make_sample_id("p1", start, "intention")
    sample = TaskSample(sid, "p1", "intention", start, start + 14, label, ctx)
    return EvalRow(sample, PredictionRecord(sid, "toy", "intention", confs))


rows = [
    row("NCI", (0.7, 0.2, 0.1), 0),
    row("NCI", (0.3, 0.5, 0.2), 10),
    row("UI", (0.2, 0.6, 0.2), 20),
    row("CI", (0.1, 0.2, 0.7), 30),
    row("CI", (0.4, 0.1, 0.5), 40),
]

# the confusion matrix: rows are ground truth, columns are predictions
print(accumulate(rows).counts)

for name, value in base_metrics(rows).items():
    print(f"{name:>6}: {value:.3f}")

# one line per class
for entry in per_class_report(rows):
    print(entry)

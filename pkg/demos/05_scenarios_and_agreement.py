"""
Slicing by scenario and checking intention/action agreement
===========================================================

Uses the synthetic generator so the demo needs no files.
"""

from pedeval.predlog import join
from pedeval.report import evaluate_agreement, select_model
from pedeval.sampler import sample_dataset
from pedeval.scenario import scenario_slice, slice_to_csv
from pedeval.synth import SynthSpec, synthesize

ds, preds = synthesize(SynthSpec(n_instances=120, epsilon=0.25, seed=3, joint=True))

_, action_preds = select_model(preds, "action")
rows, coverage = join(sample_dataset(ds, "action"), action_preds, "inner")
print(coverage.as_dict())

table = scenario_slice(rows)
print(slice_to_csv({"speed": table["speed"], "signal": table["signal"]}))

result = evaluate_agreement(ds, preds)
print("matched windows:", result["n_matched"])
for outcome, frac in result["outcomes"].items():
    print(f"{outcome:>15}: {frac:.3f}")

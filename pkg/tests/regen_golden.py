"""Rebuild the shipped fixture and golden reports.

Run from the repository root:  python3 tests/regen_golden.py
Only do this on purpose; the goldens pin byte-level output.
"""

from pathlib import Path

from pedeval.cli import main

HERE = Path(__file__).parent
DATA, GOLDEN = HERE / "data", HERE / "golden"


def regen():
    DATA.mkdir(exist_ok=True)
    GOLDEN.mkdir(exist_ok=True)
    ds, preds = DATA / "synth200.json", DATA / "synth200_noisy0.3.jsonl"
    joint = DATA / "synth200_noisy0.3_joint.jsonl"
    main(["synth", "--seed", "7", "--epsilon", "0.3",
          "--out-dataset", str(ds), "--out-predictions", str(preds)])
    # same seed, same dataset; the joint log adds action predictions on intention windows
    main(["synth", "--seed", "7", "--epsilon", "0.3", "--joint",
          "--out-dataset", str(ds), "--out-predictions", str(joint)])
    for task in ("intention", "action", "risk"):
        main(["evaluate", str(ds), str(preds), "--task", task, "--out", str(GOLDEN / f"{task}.json")])
    main(["agreement", str(ds), str(joint), "--out", str(GOLDEN / "agreement.json")])


if __name__ == "__main__":
    regen()

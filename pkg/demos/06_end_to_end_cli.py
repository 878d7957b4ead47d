"""
The command line, start to finish
=================================

Generates a fixture, evaluates each task and draws the per-class AP charts
into a temporary directory.
"""

import json
import tempfile
from pathlib import Path

from pedeval.cli import main

work = Path(tempfile.mkdtemp(prefix="pedeval-demo-"))
ds, preds = work / "ds.json", work / "preds.jsonl"

main(["synth", "--n-instances", "80", "--seed", "1", "--out-dataset", str(ds), "--out-predictions", str(preds)])
main(["ingest-check", str(ds)])

reports = []
for task in ("intention", "action", "risk"):
    out = work / f"{task}.json"
    main(["evaluate", str(ds), str(preds), "--task", task, "--out", str(out), "--markdown", str(work / f"{task}.md")])
    rep = json.loads(out.read_text())
    print(task, "Acc", rep["base"]["Acc"], "hard Acc", rep["hard"]["Acc"])
    reports.append(str(out))

main(["plot", *reports, "--out-dir", str(work / "plots")])
print((work / "risk.md").read_text())

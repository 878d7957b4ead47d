"""Acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line (bypassing output capture) with
the measured runtime, then asserts.  Criterion 9 needs converted real
annotations and is skipped unless PEDEVAL_PIE_DIR points at them.
"""

import math
import os
import random
import time
from pathlib import Path

import numpy as np
import pytest

import oracles
from conftest import GOLDEN, make_instance, make_row
from pedeval.cli import main
from pedeval.metrics_core import base_metrics
from pedeval.metrics_instance import InstanceSeries, confidence_delta, hard_prediction, soft_prediction
from pedeval.metrics_instance import group_instances, instance_report
from pedeval.metrics_weighted import tte_weight_raw, weighted_report
from pedeval.predlog import EvalRow
from pedeval.report import evaluate
from pedeval.risk_grid import RiskGridConfig, class_distance, risk_weight, weight_vector
from pedeval.sampler import SamplerConfig, sample_action, sample_intention, window_starts
from pedeval.scenario import agreement_from_records, outcome_fractions
from pedeval.synth import SynthSpec, synthesize
from test_metrics_core import check_against_oracles, random_fixture


@pytest.fixture
def verdict(capsys):
    def report(number, title, checks, elapsed, limit):
        failed = [name for name, ok in checks if not ok]
        in_time = elapsed < limit
        status = "PASS" if not failed and in_time else "FAIL"
        detail = f"{elapsed:.2f}s (limit {limit:g}s)"
        if failed:
            detail += "; failed: " + ", ".join(failed)
        with capsys.disabled():
            print(f"\n[acceptance] criterion {number} {status}: {title} [{detail}]")
        assert not failed, failed
        assert in_time, f"took {elapsed:.2f}s, limit {limit}s"

    return report


def test_criterion_1_weight_formulas(verdict):
    t0 = time.perf_counter()
    ref = math.exp(-0.5 * (0.5 / 0.3) ** 2)
    vec = weight_vector()
    checks = [
        ("tte(90) == 1", tte_weight_raw(90) == 1.0),
        ("tte(45) direct", abs(tte_weight_raw(45) - ref) <= 1e-12),
        ("tte(45) ~ 0.24935", abs(tte_weight_raw(45) - 0.24935) <= 5e-6),
        ("risk regions 6/7 == 1", risk_weight(6) == 1.0 and risk_weight(7) == 1.0),
        ("risk region 1 direct", abs(risk_weight(1) - math.exp(-0.5 * (5 / 3) ** 2)) <= 1e-12),
        ("risk region 1 ~ 0.24935", abs(risk_weight(1) - 0.24935) <= 5e-6),
        ("symmetric r -> 13 - r", all(vec[r - 1] == vec[12 - r] for r in range(1, 13))),
    ]
    verdict(1, "weight formulas", checks, time.perf_counter() - t0, 1.0)


def test_criterion_2_class_distance_exhaustive(verdict):
    t0 = time.perf_counter()
    checks = []
    for n in range(2, 14):
        cfg = RiskGridConfig(n_regions=n)
        got = [class_distance(r, cfg) for r in range(1, n + 1)]
        checks.append((f"N={n} literal", got == [oracles.d_cls_literal(r, n) for r in range(1, n + 1)]))
        checks.append((f"N={n} geometric", got == [oracles.d_cls_geometric(r, n) for r in range(1, n + 1)]))
    verdict(2, "class distance casework, N in 2..13", checks, time.perf_counter() - t0, 1.0)


def test_criterion_3_metric_oracles(verdict):
    t0 = time.perf_counter()
    rng = random.Random(20240607)
    checks = []
    for k in range(1000):
        n_classes = (2, 3, 12)[k % 3]
        rows = random_fixture(rng, n_classes)
        try:
            check_against_oracles(rows, tol=1e-9)
            ok = True
        except AssertionError:
            ok = False
        checks.append((f"fixture {k} ({n_classes} classes)", ok))
    verdict(3, "metric oracle equivalence on 1000 random fixtures", checks, time.perf_counter() - t0, 30.0)


def test_criterion_4_sampling(verdict):
    t0 = time.perf_counter()
    cfg = SamplerConfig()
    intention = sample_intention(make_instance(0, 34, intention_prob=0.8, exp_start_point=0, critical_point=34))
    action = sample_action(make_instance(0, 119, crossing_label="crossing", crossing_point=120))

    def expected_count(length):
        return 0 if length < cfg.obs_len else (length - cfg.obs_len) // cfg.stride + 1

    checks = [
        ("track [0,34] starts", [s.obs_start for s in intention] == [0, 10, 20]),
        ("track [0,119] action ends", sorted(s.obs_end for s in action) == [34, 44, 54, 64, 74, 84]),
        ("count formula L=1..100", all(len(window_starts(0, n - 1, cfg)) == expected_count(n) for n in range(1, 101))),
    ]
    verdict(4, "sampling fixtures", checks, time.perf_counter() - t0, 1.0)


def test_criterion_5_instance_semantics(verdict):
    t0 = time.perf_counter()
    p1 = [0.9, 0.1, 0.9]
    conf = np.array([[1 - p, p] for p in p1])
    s = InstanceSeries("p", 1, (0, 10, 20), conf)
    mean = [sum(row[c] for row in conf) / 3 for c in range(2)]
    rows = [make_row("action", "C" if k % 2 else "NC", (0.3 + 0.04 * k, 0.7 - 0.04 * k), ped_id=f"p{k}") for k in range(9)]
    rep = instance_report(group_instances(rows))
    per_sample = base_metrics(rows)
    collapse = all(rep["soft"][k] == rep["hard"][k] == per_sample[k] for k in rep["soft"])
    checks = [
        ("argmaxes [1,0,1]", [oracles.argmax(r) for r in conf] == [1, 0, 1]),
        ("hard label 0", hard_prediction(s) == 0),
        ("soft label from mean", soft_prediction(s)[0] == oracles.argmax(mean)),
        ("conf_delta (0.8, 0.8)", confidence_delta(s, 1) == (0.8, 0.8)),
        ("n=1 collapse", collapse),
    ]
    verdict(5, "per-instance semantics", checks, time.perf_counter() - t0, 1.0)


def test_criterion_6_agreement_bookkeeping(verdict):
    t0 = time.perf_counter()
    target = {"both_correct": 0.63, "both_incorrect": 0.035, "intention_only": 0.11, "action_only": 0.226}
    # the stated fractions add up to 1.001, so no count vector reproduces all four
    total = 1000
    records = []
    for outcome, frac in target.items():
        i_ok = outcome in ("both_correct", "intention_only")
        a_ok = outcome in ("both_correct", "action_only")
        records += [(2, 1, i_ok, a_ok)] * round(frac * total)
    fr = outcome_fractions(agreement_from_records(records))
    checks = [(f"{o} == {f}", abs(fr[o] - f) <= 1e-9) for o, f in target.items()]
    checks.append(("fractions sum to 1", abs(math.fsum(fr.values()) - 1.0) <= 1e-9))
    verdict(6, "agreement bookkeeping fixture", checks, time.perf_counter() - t0, 1.0)


def test_criterion_7_degenerate_and_invariance(verdict):
    t0 = time.perf_counter()
    rng = random.Random(77)
    checks = []
    for k in range(60):
        n_classes = (2, 3, 12)[k % 3]
        rows = random_fixture(rng, n_classes)
        uniform = [EvalRow(r.sample, r.pred, 1.0) for r in rows]
        if n_classes == 2:
            ttes = [rng.randint(30, 90)] * len(rows)
            scheme_rows = [make_row("action", r.sample.label, r.pred.confidences, start=r.sample.obs_start, tte=t) for r, t in zip(rows, ttes)]
            wr = weighted_report(scheme_rows, "tte")
            checks.append((f"equal tte weights {k}", wr["weighted"] == wr["base"]))
        wr = weighted_report(rows, "uniform")
        checks.append((f"uniform weights {k}", wr["weighted"] == base_metrics(uniform)))
        lam = rng.choice([1e-3, 0.5, 3.0, 1e4])
        a = base_metrics(rows)
        b = base_metrics([EvalRow(r.sample, r.pred, r.weight * lam) for r in rows])
        same = all((a[m] is None and b[m] is None) or abs(a[m] - b[m]) <= 1e-12 for m in a)
        checks.append((f"scaling by {lam} ({k})", same))
    ds, preds = synthesize(SynthSpec(n_instances=30, predictor="oracle", seed=3))
    for task in ("intention", "action", "risk"):
        rep = evaluate(ds, preds, task)
        accs = [rep.base["Acc"], rep.soft["Acc"], rep.hard["Acc"]] + ([rep.weighted["Acc"]] if rep.weighted else [])
        checks.append((f"oracle {task} accuracies", all(v == 1.0 for v in accs)))
        checks.append((f"oracle {task} conf_delta", rep.conf_delta == {"max": 0.0, "avg": 0.0}))
    tied = [make_row("intention", "UI", (0.4, 0.4, 0.2), start=10 * k) for k in range(5)]
    checks.append(("argmax ties", [base_metrics(tied) for _ in range(3)] == [base_metrics(tied)] * 3 and base_metrics(tied)["Acc"] == 0.0))
    verdict(7, "degenerate and invariance properties", checks, time.perf_counter() - t0, 5.0)


def test_criterion_8_end_to_end_determinism(verdict, tmp_path):
    t0 = time.perf_counter()
    checks = []
    blobs = []
    for run in range(2):
        ds, preds = tmp_path / f"ds{run}.json", tmp_path / f"p{run}.jsonl"
        rc = main(["synth", "--seed", "7", "--epsilon", "0.3", "--out-dataset", str(ds), "--out-predictions", str(preds)])
        checks.append((f"synth run {run}", rc == 0))
        blobs.append((ds.read_bytes(), preds.read_bytes()))
    checks.append(("synth byte-identical", blobs[0] == blobs[1]))
    for task in ("intention", "action", "risk"):
        golden = (GOLDEN / f"{task}.json").read_bytes()
        for run, threads in enumerate(("1", "8")):
            out = tmp_path / f"{task}_{threads}.json"
            rc = main(["evaluate", str(tmp_path / f"ds{run}.json"), str(tmp_path / f"p{run}.jsonl"),
                       "--task", task, "--threads", threads, "--out", str(out)])
            checks.append((f"{task} threads={threads} matches golden", rc == 0 and out.read_bytes() == golden))
    verdict(8, "end-to-end determinism against golden reports", checks, time.perf_counter() - t0, 20.0)


# sample counts from the published split table; only these two are pinned
PIE_COUNTS = {("intention", "train"): 8213, ("action", "test"): 4458}


def test_criterion_9_real_sample_counts(verdict, capsys):
    root = os.environ.get("PEDEVAL_PIE_DIR")
    if not root:
        with capsys.disabled():
            print("\n[acceptance] criterion 9 SKIP: set PEDEVAL_PIE_DIR to converted PIE annotations")
        pytest.skip("converted PIE annotations not available")
    from pedeval.annotation import read_dataset
    from pedeval.sampler import sample_dataset

    t0 = time.perf_counter()
    checks = []
    for (task, split), expected in PIE_COUNTS.items():
        path = Path(root) / f"pie_{split}.json"
        n = len(sample_dataset(read_dataset(path), task))
        checks.append((f"{task}/{split} {n} vs {expected}", abs(n - expected) <= 0.02 * expected))
    verdict(9, "real-data sample counts within 2%", checks, time.perf_counter() - t0, float("inf"))

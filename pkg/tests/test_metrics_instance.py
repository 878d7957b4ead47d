import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_row
from pedeval.errors import InconsistentGroundTruth
from pedeval.metrics_core import accumulate, label_metrics
from pedeval.metrics_instance import (
    InstanceSeries,
    confidence_delta,
    group_instances,
    hard_prediction,
    instance_report,
    soft_prediction,
)


def series(gt, confs, ped_id="p"):
    confs = np.asarray(confs, dtype=float)
    return InstanceSeries(ped_id, gt, tuple(range(0, 10 * len(confs), 10)), confs)


def binary(gt, p1):
    return series(gt, [[1 - p, p] for p in p1])


def test_group_instances():
    rows = [
        make_row("action", "C", (0.1, 0.9), ped_id="b", start=10),
        make_row("action", "NC", (0.9, 0.1), ped_id="a", start=0),
        make_row("action", "C", (0.2, 0.8), ped_id="b", start=0),
    ]
    out = group_instances(rows)
    assert [(s.ped_id, s.n) for s in out] == [("a", 1), ("b", 2)]
    assert out[1].obs_starts == (0, 10)
    assert out[1].confidences[0].tolist() == [0.2, 0.8]


def test_inconsistent_ground_truth():
    rows = [make_row("action", "C", (0.1, 0.9)), make_row("action", "NC", (0.1, 0.9), start=10)]
    with pytest.raises(InconsistentGroundTruth):
        group_instances(rows)


def test_split_on_label_change_for_risk():
    rows = [
        make_row("risk", 3, [1 / 12] * 12, start=0),
        make_row("risk", 3, [1 / 12] * 12, start=10),
        make_row("risk", 4, [1 / 12] * 12, start=20),
    ]
    out = group_instances(rows, split_on_label_change=True)
    assert [(s.ped_id, s.n, s.gt_label) for s in out] == [("p1@0", 2, 2), ("p1@20", 1, 3)]


def test_soft_prediction():
    label, mean = soft_prediction(series(1, [[0.2, 0.8]]))
    assert label == 1 and mean.tolist() == [0.2, 0.8]
    label, mean = soft_prediction(binary(1, [0.9, 0.4, 0.8]))
    assert label == 1 and mean[1] == pytest.approx(0.7)
    assert soft_prediction(binary(1, [0.5, 0.5]))[0] == 0


def test_hard_prediction():
    assert hard_prediction(binary(1, [0.9, 0.8, 0.7])) == 1
    assert hard_prediction(binary(1, [0.9, 0.2, 0.7])) == 0
    assert hard_prediction(binary(1, [0.1, 0.2])) == 0
    three = series(2, [[0.1, 0.1, 0.8], [0.1, 0.8, 0.1]])
    assert hard_prediction(three) == 0
    assert hard_prediction(three, wrong=lambda gt, k: (gt + 2) % k) == 1


@pytest.mark.parametrize(
    "values,expected",
    [([0.9, 0.1, 0.9], (0.8, 0.8)), ([0.6, 0.7, 0.5], (0.2, 0.15)), ([0.4, 0.4, 0.4], (0.0, 0.0)), ([0.3], (0.0, 0.0))],
)
def test_confidence_delta(values, expected):
    mx, avg = confidence_delta(binary(1, values), 1)
    assert mx == pytest.approx(expected[0], abs=1e-12)
    assert avg == pytest.approx(expected[1], abs=1e-12)


def test_single_sample_collapse():
    rows = [make_row("action", "C" if k % 3 else "NC", (0.3 + 0.05 * k, 0.7 - 0.05 * k), ped_id=f"p{k}") for k in range(10)]
    rep = instance_report(group_instances(rows))
    per_sample = label_metrics(accumulate(rows))
    for key in rep["soft"]:
        assert rep["soft"][key] == rep["hard"][key] == per_sample[key]
    assert rep["conf_delta"] == {"max": 0.0, "avg": 0.0}


def test_one_flickering_instance():
    good = [binary(1 if k % 2 else 0, [0.9, 0.8] if k % 2 else [0.1, 0.2]) for k in range(9)]
    flicker = binary(1, [0.9, 0.4, 0.8])
    rep = instance_report(good + [flicker])
    assert rep["hard"]["Acc"] == pytest.approx(0.9)
    assert rep["soft"]["Acc"] == 1.0


@st.composite
def binary_series(draw):
    n = draw(st.integers(1, 8))
    p = draw(st.lists(st.floats(0, 1), min_size=n, max_size=n))
    return binary(draw(st.integers(0, 1)), p)


@settings(max_examples=200, deadline=None)
@given(binary_series())
def test_instance_properties(s):
    labels = {int(np.argmax(c)) for c in s.confidences}
    hard = hard_prediction(s)
    if len(labels) == 1:
        assert hard == labels.pop()
        if hard == s.gt_label:
            assert soft_prediction(s)[0] == s.gt_label
    mx, avg = confidence_delta(s, s.gt_label)
    assert mx >= avg >= 0
    rev = InstanceSeries(s.ped_id, s.gt_label, s.obs_starts, s.confidences[::-1].copy())
    assert soft_prediction(rev)[0] == soft_prediction(s)[0]


@settings(max_examples=50, deadline=None)
@given(st.lists(binary_series(), min_size=1, max_size=10))
def test_report_delta_order(series_list):
    rep = instance_report(series_list)
    assert rep["conf_delta"]["max"] >= rep["conf_delta"]["avg"] >= 0

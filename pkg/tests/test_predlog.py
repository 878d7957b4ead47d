import json

import pytest

from conftest import make_row
from pedeval.errors import (
    ArityMismatch,
    DuplicatePrediction,
    JoinError,
    MalformedLine,
    MissingPrediction,
    OrphanPrediction,
)
from pedeval.predlog import PredictionRecord, join, read_predictions, write_predictions


def write_lines(tmp_path, records):
    path = tmp_path / "p.jsonl"
    path.write_text("".join(json.dumps(r) + "\n" for r in records))
    return path


def rec(sid, confs=(0.2, 0.8), task="action", model="m"):
    return {"sample_id": sid, "model": model, "task": task, "confidences": list(confs)}


def test_reads_well_formed(tmp_path):
    recs = read_predictions(write_lines(tmp_path, [rec("a"), rec("b"), rec("c", (0.1, 0.2, 0.7), "intention")]))
    assert len(recs) == 3
    assert recs[2].confidences == (0.1, 0.2, 0.7)


def test_out_of_range_confidence(tmp_path):
    with pytest.raises(MalformedLine) as err:
        read_predictions(write_lines(tmp_path, [rec("a"), rec("b", (1.3, 0.0))]))
    assert err.value.lineno == 2


def test_duplicate(tmp_path):
    with pytest.raises(DuplicatePrediction):
        read_predictions(write_lines(tmp_path, [rec("a"), rec("a")]))
    # same sample, different model is fine
    assert len(read_predictions(write_lines(tmp_path, [rec("a"), rec("a", model="n")]))) == 2


def test_arity(tmp_path):
    with pytest.raises(ArityMismatch):
        read_predictions(write_lines(tmp_path, [rec("a", (0.5, 0.5, 0.0))]))
    assert len(read_predictions(write_lines(tmp_path, [rec("a", [0.1] * 6, "risk")]), n_regions=6)) == 1


def test_garbage_line(tmp_path):
    path = tmp_path / "p.jsonl"
    path.write_text(json.dumps(rec("a")) + "\n{oops\n")
    with pytest.raises(MalformedLine) as err:
        read_predictions(path)
    assert err.value.lineno == 2


def test_write_read_roundtrip(tmp_path):
    preds = [PredictionRecord("a", "m", "action", (0.25, 0.75))]
    write_predictions(preds, tmp_path / "x.jsonl")
    assert read_predictions(tmp_path / "x.jsonl") == preds


def _samples(n):
    return [make_row("action", "C", (0.1, 0.9), start=10 * k).sample for k in range(n)]


def _preds(samples):
    return [PredictionRecord(s.sample_id, "m", "action", (0.3, 0.7)) for s in samples]


def test_strict_join():
    samples = _samples(5)
    rows, cov = join(samples, _preds(samples), "strict")
    assert len(rows) == 5 and cov.missing == cov.orphan == 0
    assert [r.sample for r in rows] == samples


def test_strict_missing():
    samples = _samples(5)
    with pytest.raises(MissingPrediction) as err:
        join(samples, _preds(samples)[:4], "strict")
    assert err.value.sample_ids == [samples[4].sample_id]


def test_strict_orphan():
    samples = _samples(5)
    with pytest.raises(OrphanPrediction):
        join(samples[:4], _preds(samples), "strict")


def test_inner_join_reports_coverage():
    samples = _samples(5)
    rows, cov = join(samples, _preds(samples)[:4], "inner")
    assert len(rows) == 4
    assert cov.as_dict() == {"matched": 4, "missing": 1, "orphan": 0}


def test_join_is_order_stable():
    samples = _samples(6)
    rows, _ = join(samples, list(reversed(_preds(samples))), "strict")
    assert [r.sample.sample_id for r in rows] == [s.sample_id for s in samples]


def test_one_model_per_join():
    samples = _samples(2)
    preds = _preds(samples)
    preds[1] = PredictionRecord(preds[1].sample_id, "other", "action", (0.5, 0.5))
    with pytest.raises(JoinError):
        join(samples, preds)

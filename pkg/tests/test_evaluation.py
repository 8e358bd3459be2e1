import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tsetlin.data import LabeledDataset
from tsetlin.evaluation import (
    ConfusionCounts,
    EvalReport,
    cross_validate,
    fold_assignment,
    holdout_evaluate,
    metrics,
)
from tsetlin.pipeline import ModelConfig, fit_pipeline


class TestConfusionCounts:
    def test_from_predictions(self):
        counts = ConfusionCounts.from_predictions(
            [1, 1, 0, 0, 1, 0], [1, 0, 0, 1, 1, 0]
        )
        assert (counts.tp, counts.fn, counts.fp, counts.tn) == (2, 1, 1, 2)
        assert counts.total == 6

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            ConfusionCounts.from_predictions([1, 0], [1])


class TestMetrics:
    def test_hand_computed_oracle(self):
        # tp=3 fp=1 fn=2 tn=4: precision 3/4, recall 3/5, accuracy 7/10.
        counts = ConfusionCounts(tp=3, fp=1, tn=4, fn=2)
        m = metrics(counts)
        assert m["precision"] == pytest.approx(0.75)
        assert m["recall"] == pytest.approx(0.6)
        expected_f1 = 2 * 0.75 * 0.6 / (0.75 + 0.6)
        assert m["f1"] == pytest.approx(expected_f1)
        assert m["accuracy"] == pytest.approx(0.7)

    def test_all_negative_predictor_scores_zero_not_error(self):
        m = metrics(ConfusionCounts(tp=0, fp=0, tn=5, fn=5))
        assert m["precision"] == m["recall"] == m["f1"] == 0.0
        assert m["accuracy"] == 0.5

    def test_empty_counts_error(self):
        with pytest.raises(ValueError):
            metrics(ConfusionCounts())

    @given(
        st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.integers(0, 50)
    )
    def test_ranges_and_f1_mean_property(self, tp, fp, tn, fn):
        counts = ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)
        if counts.total == 0:
            return
        m = metrics(counts)
        for v in m.values():
            assert 0.0 <= v <= 1.0
        # F1 is the harmonic mean: never above the arithmetic mean.
        assert m["f1"] <= (m["precision"] + m["recall"]) / 2 + 1e-12


class TestEvalReport:
    def test_ci_half_width_matches_formula(self):
        values = [0.5, 0.7, 0.6, 0.8]
        report = EvalReport([{"f1": v} for v in values])
        n = len(values)
        mean = sum(values) / n
        sd = math.sqrt(sum((v - mean) ** 2 for v in values) / (n - 1))
        assert report.mean("f1") == pytest.approx(mean)
        assert report.ci_half_width("f1") == pytest.approx(1.96 * sd / math.sqrt(n))

    def test_single_fold_ci_is_zero(self):
        assert EvalReport([{"f1": 0.5}]).ci_half_width("f1") == 0.0

    def test_text_table_shape(self):
        report = EvalReport(
            [dict(precision=1.0, recall=0.5, f1=2 / 3, accuracy=0.75)] * 3
        )
        lines = report.to_text_table().splitlines()
        assert lines[0] == "folds: 3"
        assert len(lines) == 5
        for line, name in zip(lines[1:], ("precision", "recall", "f1", "accuracy")):
            assert line.startswith(name)
            assert "±" in line

    def test_json_structure(self):
        report = EvalReport([dict(precision=1.0, recall=1.0, f1=1.0, accuracy=1.0)] * 2)
        doc = json.loads(report.to_json())
        assert doc["folds"] == 2
        assert set(doc["metrics"]) == {"precision", "recall", "f1", "accuracy"}
        assert doc["metrics"]["f1"]["per_fold"] == [1.0, 1.0]


class TestFoldAssignment:
    @given(n=st.integers(4, 60), k=st.integers(2, 10), seed=st.integers(0, 100))
    def test_partition_properties(self, n, k, seed):
        if k > n:
            return
        folds = fold_assignment(n, k, np.random.default_rng(seed))
        assert len(folds) == k
        combined = np.concatenate(folds)
        assert sorted(combined.tolist()) == list(range(n))
        sizes = [len(f) for f in folds]
        assert max(sizes) - min(sizes) <= 1

    def test_validation(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            fold_assignment(10, 1, rng)
        with pytest.raises(ValueError):
            fold_assignment(3, 4, rng)


def two_bit_dataset(n=60, seed=0):
    rng = np.random.default_rng(seed)
    rows = [(int(rng.integers(2)), int(rng.integers(2))) for _ in range(n)]
    labels = [int(a or b) for a, b in rows]
    return LabeledDataset(rows, labels, ["a", "b"])


class TestCrossValidate:
    def test_deterministic_for_a_seed(self):
        ds = two_bit_dataset()
        cfg = ModelConfig(clauses=4, epochs=5)
        r1 = cross_validate(ds, cfg, 4, seed=9)
        r2 = cross_validate(ds, cfg, 4, seed=9)
        assert r1.fold_metrics == r2.fold_metrics

    def test_fold_count_with_repeats(self):
        ds = two_bit_dataset()
        cfg = ModelConfig(clauses=4, epochs=2)
        report = cross_validate(ds, cfg, 3, seed=1, repeats=2)
        assert report.n_folds == 6

    def test_learns_or_rule(self):
        ds = two_bit_dataset(n=80)
        cfg = ModelConfig(clauses=8, threshold=2, epochs=30)
        report = cross_validate(ds, cfg, 4, seed=2)
        assert report.mean("accuracy") >= 0.9

    def test_repeats_validation(self):
        with pytest.raises(ValueError):
            cross_validate(two_bit_dataset(), ModelConfig(), 2, 0, repeats=0)


def test_holdout_evaluate_matches_direct_metrics():
    ds = two_bit_dataset(n=50, seed=3)
    pipeline, _ = fit_pipeline(ds, ModelConfig(clauses=8, threshold=2, epochs=30), 4)
    result = holdout_evaluate(pipeline, ds)
    preds = pipeline.predict_rows(ds.rows)
    expected = metrics(ConfusionCounts.from_predictions(ds.labels, preds))
    assert result == expected

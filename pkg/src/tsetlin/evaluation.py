"""Confusion-matrix metrics and cross-validated reports.

Metrics are computed for the positive (outbreak) class.  Any 0/0 metric
evaluates to 0, so an all-negative predictor scores precision 0 instead
of erroring.  Cross-validation reports per-metric means with 95%
confidence half-widths using the normal approximation 1.96 * sd / sqrt(k).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .data import DataError, LabeledDataset
from .pipeline import ModelConfig, fit_pipeline

METRIC_NAMES = ("precision", "recall", "f1", "accuracy")


@dataclass
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @classmethod
    def from_predictions(cls, y_true, y_pred) -> "ConfusionCounts":
        counts = cls()
        for t, p in zip(y_true, y_pred, strict=True):
            if t == 1 and p == 1:
                counts.tp += 1
            elif t == 0 and p == 1:
                counts.fp += 1
            elif t == 0 and p == 0:
                counts.tn += 1
            else:
                counts.fn += 1
        return counts

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def metrics(counts: ConfusionCounts) -> dict[str, float]:
    if counts.total == 0:
        raise ValueError("no evaluated samples")

    def ratio(num: int, den: int) -> float:
        return num / den if den else 0.0

    precision = ratio(counts.tp, counts.tp + counts.fp)
    recall = ratio(counts.tp, counts.tp + counts.fn)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    accuracy = (counts.tp + counts.tn) / counts.total
    return {"precision": precision, "recall": recall, "f1": f1, "accuracy": accuracy}


@dataclass
class EvalReport:
    fold_metrics: list[dict[str, float]]

    @property
    def n_folds(self) -> int:
        return len(self.fold_metrics)

    def mean(self, name: str) -> float:
        return float(np.mean([m[name] for m in self.fold_metrics]))

    def ci_half_width(self, name: str) -> float:
        values = [m[name] for m in self.fold_metrics]
        if len(values) < 2:
            return 0.0
        sd = float(np.std(values, ddof=1))
        return 1.96 * sd / math.sqrt(len(values))

    def to_text_table(self) -> str:
        lines = [f"folds: {self.n_folds}"]
        for name in METRIC_NAMES:
            lines.append(
                f"{name:<9} {self.mean(name):.2f}±{self.ci_half_width(name):.2f}"
            )
        return "\n".join(lines)

    def to_json(self) -> str:
        doc = {
            "folds": self.n_folds,
            "metrics": {
                name: {
                    "mean": self.mean(name),
                    "ci95_half_width": self.ci_half_width(name),
                    "per_fold": [m[name] for m in self.fold_metrics],
                }
                for name in METRIC_NAMES
            },
        }
        return json.dumps(doc, sort_keys=True, indent=2)


def fold_assignment(
    n: int, k: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """Random near-equal partition of range(n) into k test folds."""
    if k < 2:
        raise ValueError("need at least 2 folds")
    if k > n:
        raise ValueError(f"cannot split {n} samples into {k} folds")
    order = rng.permutation(n)
    return [np.sort(part) for part in np.array_split(order, k)]


def cross_validate(
    dataset: LabeledDataset,
    config: ModelConfig,
    k: int,
    seed: int,
    repeats: int = 1,
) -> EvalReport:
    """k-fold CV with a fresh encoder and machine per fold.

    Per-fold seeds derive from the master seed, so the report is
    identical regardless of fold execution order.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    master = np.random.SeedSequence(seed)
    fold_seeds = master.spawn(repeats * k + repeats)
    fold_metrics = []
    for r in range(repeats):
        shuffle_rng = np.random.default_rng(fold_seeds[repeats * k + r])
        folds = fold_assignment(len(dataset), k, shuffle_rng)
        all_idx = np.arange(len(dataset))
        for f, test_idx in enumerate(folds):
            train_idx = np.setdiff1d(all_idx, test_idx)
            if len(train_idx) == 0:
                raise DataError("fold leaves no training data")
            train = dataset.subset(train_idx.tolist())
            test = dataset.subset(test_idx.tolist())
            fold_seed = int(
                np.random.default_rng(fold_seeds[r * k + f]).integers(2**63)
            )
            pipeline, _ = fit_pipeline(train, config, fold_seed)
            preds = pipeline.predict_rows(test.rows)
            counts = ConfusionCounts.from_predictions(test.labels, preds)
            fold_metrics.append(metrics(counts))
    return EvalReport(fold_metrics)


def holdout_evaluate(pipeline, dataset: LabeledDataset) -> dict[str, float]:
    preds = pipeline.predict_rows(dataset.rows)
    return metrics(ConfusionCounts.from_predictions(dataset.labels, preds))

"""End-to-end model fitting: binarize raw rows, train, predict.

A FittedPipeline bundles the fitted row encoder with the trained
machine so predictions can be made straight from raw feature rows, and
so the pair can be serialized as one model document.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .binarizer import RowEncoder, fit_categories, fit_thresholds
from .data import DataError, LabeledDataset
from .machine import ConfigError, TsetlinMachine


@dataclass
class ModelConfig:
    """Hyperparameters for one training run.

    ``clauses`` is the total clause budget, split evenly across the
    class banks.
    """

    clauses: int = 4
    states_per_action: int = 100
    threshold: int = 1
    s: float = 8.0
    epochs: int = 100
    negative_sampling: str = "single"
    categorical: tuple[str, ...] = ()
    max_thresholds: int | None = None

    def validate(self, n_classes: int) -> int:
        """Check ranges and return clauses per class."""
        if self.clauses < 2 or self.clauses % 2 != 0:
            raise ConfigError("clause count must be even and >= 2")
        if self.clauses % n_classes != 0:
            raise ConfigError(
                f"clause count {self.clauses} not divisible by {n_classes} classes"
            )
        per_class = self.clauses // n_classes
        if per_class < 2 or per_class % 2 != 0:
            raise ConfigError(
                f"per-class clause count {per_class} must be even and >= 2"
            )
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")
        return per_class


@dataclass
class FittedPipeline:
    encoder: RowEncoder
    machine: TsetlinMachine
    config: ModelConfig = field(default_factory=ModelConfig)

    def predict_rows(self, rows) -> np.ndarray:
        return self.machine.predict_many(self.encoder.encode_rows(rows))


def fit_encoder(dataset: LabeledDataset, config: ModelConfig) -> RowEncoder:
    """Threshold-encode numeric columns, one-hot the rest.

    Columns named in ``config.categorical``, and any column holding
    strings, are one-hot encoded from their unique values.
    """
    columns = dataset.columns()
    features = []
    for name, col in zip(dataset.feature_names, columns):
        is_cat = name in config.categorical or any(isinstance(v, str) for v in col)
        if is_cat:
            enc = fit_categories([col], [name])
        else:
            enc = fit_thresholds([col], [name], max_thresholds=config.max_thresholds)
        features.append(enc.features[0])
    return RowEncoder(features)


def fit_pipeline(
    dataset: LabeledDataset,
    config: ModelConfig,
    seed: int,
    trace: bool = False,
) -> tuple[FittedPipeline, list[np.ndarray] | None]:
    """Fit encoder and machine on the dataset; returns the pipeline and,
    when requested, per-epoch TA state snapshots."""
    if len(dataset) == 0:
        raise DataError("empty dataset")
    n_classes = max(dataset.labels) + 1
    if n_classes < 2:
        n_classes = 2  # a constant-label training set still gets two banks
    per_class = config.validate(n_classes)
    encoder = fit_encoder(dataset, config)
    machine = TsetlinMachine(
        n_bits=encoder.n_bits,
        n_classes=n_classes,
        clauses_per_class=per_class,
        states_per_action=config.states_per_action,
        threshold=config.threshold,
        s=config.s,
        seed=seed,
        negative_sampling=config.negative_sampling,
    )
    xs = encoder.encode_rows(dataset.rows)
    snapshots = machine.fit(xs, np.array(dataset.labels), config.epochs, trace=trace)
    return FittedPipeline(encoder, machine, config), snapshots

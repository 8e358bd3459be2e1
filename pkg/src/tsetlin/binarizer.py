"""Binary encoding of raw tabular features.

Continuous features are turned into threshold bits: every unique value v
observed during fitting becomes a derived binary feature "value <= v".
A raw value then encodes as a run of 0s followed by a run of 1s
(thermometer property).  Categorical features are one-hot encoded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np


class EncodingError(ValueError):
    """Raised for bad fitting data or rows that cannot be encoded."""


@dataclass(frozen=True)
class ContinuousFeature:
    """A fitted continuous feature: strictly ascending thresholds."""

    name: str
    thresholds: tuple[float, ...]

    def __post_init__(self):
        if not self.thresholds:
            raise EncodingError(f"empty feature column: {self.name!r}")
        if any(a >= b for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise EncodingError(f"thresholds for {self.name!r} not strictly ascending")

    @property
    def width(self) -> int:
        return len(self.thresholds)

    def encode(self, value: float) -> np.ndarray:
        return encode_continuous(value, self.thresholds)

    def bit_names(self) -> list[str]:
        return [f"{self.name}<={t!r}" for t in self.thresholds]


@dataclass(frozen=True)
class CategoricalFeature:
    """A fitted categorical feature: ordered category values, one bit each."""

    name: str
    categories: tuple[Any, ...]

    def __post_init__(self):
        if not self.categories:
            raise EncodingError(f"empty feature column: {self.name!r}")
        if len(set(self.categories)) != len(self.categories):
            raise EncodingError(f"duplicate categories for {self.name!r}")

    @property
    def width(self) -> int:
        return len(self.categories)

    def encode(self, value: Any) -> np.ndarray:
        if value not in self.categories:
            raise EncodingError(
                f"unseen category {value!r} for feature {self.name!r}"
            )
        return encode_categorical(value, self.categories)

    def bit_names(self) -> list[str]:
        return [f"{self.name}={c!r}" for c in self.categories]


def encode_continuous(value: float, thresholds: Sequence[float]) -> np.ndarray:
    """Encode ``value`` against ascending thresholds: bit w is 1 iff value <= v_w."""
    t = np.asarray(thresholds, dtype=float)
    return (value <= t).astype(np.uint8)


def encode_categorical(value: Any, categories: Sequence[Any]) -> np.ndarray:
    """One-hot encode ``value``; exactly one bit set at its category index."""
    bits = np.zeros(len(categories), dtype=np.uint8)
    bits[list(categories).index(value)] = 1
    return bits


class RowEncoder:
    """Encodes mixed feature rows into a fixed-width bit vector.

    Immutable after construction; safe for concurrent reads.
    """

    def __init__(self, features: Sequence[ContinuousFeature | CategoricalFeature]):
        self.features = tuple(features)

    @property
    def n_bits(self) -> int:
        return sum(f.width for f in self.features)

    @property
    def feature_names(self) -> list[str]:
        return [f.name for f in self.features]

    def encode_row(self, row: Sequence[Any]) -> np.ndarray:
        if len(row) != len(self.features):
            raise EncodingError(
                f"row has {len(row)} features, encoder expects {len(self.features)}"
            )
        parts = [f.encode(v) for f, v in zip(self.features, row)]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint8)

    def encode_rows(self, rows: Iterable[Sequence[Any]]) -> np.ndarray:
        return np.array([self.encode_row(r) for r in rows], dtype=np.uint8)

    def bit_names(self) -> list[str]:
        names: list[str] = []
        for f in self.features:
            names.extend(f.bit_names())
        return names

    def bit_origins(self) -> list[tuple[ContinuousFeature | CategoricalFeature, Any]]:
        """Per output bit: (owning feature, threshold or category value)."""
        origins = []
        for f in self.features:
            values = f.thresholds if isinstance(f, ContinuousFeature) else f.categories
            origins.extend((f, v) for v in values)
        return origins

    def to_dict(self) -> dict:
        features = []
        for f in self.features:
            if isinstance(f, ContinuousFeature):
                features.append(
                    {"name": f.name, "kind": "continuous",
                     "thresholds": list(f.thresholds)}
                )
            else:
                features.append(
                    {"name": f.name, "kind": "categorical",
                     "categories": list(f.categories)}
                )
        return {"features": features}

    @classmethod
    def from_dict(cls, doc: dict) -> "RowEncoder":
        features: list[ContinuousFeature | CategoricalFeature] = []
        for entry in doc["features"]:
            if entry["kind"] == "continuous":
                features.append(
                    ContinuousFeature(entry["name"], tuple(entry["thresholds"]))
                )
            elif entry["kind"] == "categorical":
                features.append(
                    CategoricalFeature(entry["name"], tuple(entry["categories"]))
                )
            else:
                raise EncodingError(f"unknown feature kind {entry['kind']!r}")
        return cls(features)


def fit_thresholds(
    columns: Sequence[Sequence[float]],
    feature_names: Sequence[str] | None = None,
    max_thresholds: int | None = None,
) -> RowEncoder:
    """Fit threshold features: one threshold per unique value in each column.

    ``max_thresholds`` optionally caps each feature at k evenly spaced
    quantile thresholds (off by default; the one-threshold-per-unique-value
    rule is used everywhere thresholds matter exactly).
    """
    if feature_names is None:
        feature_names = [f"f{i}" for i in range(len(columns))]
    if len(feature_names) != len(columns):
        raise EncodingError("feature_names length does not match column count")
    features = []
    for name, col in zip(feature_names, columns):
        values = np.asarray(col, dtype=float)
        if values.size == 0:
            raise EncodingError(f"empty feature column: {name!r}")
        uniq = np.unique(values)
        if max_thresholds is not None and uniq.size > max_thresholds:
            idx = np.linspace(0, uniq.size - 1, max_thresholds).round().astype(int)
            uniq = uniq[np.unique(idx)]
        features.append(ContinuousFeature(name, tuple(float(v) for v in uniq)))
    return RowEncoder(features)


def fit_categories(
    columns: Sequence[Sequence[Any]],
    feature_names: Sequence[str] | None = None,
) -> RowEncoder:
    """Fit one-hot features from the sorted unique values of each column."""
    if feature_names is None:
        feature_names = [f"f{i}" for i in range(len(columns))]
    if len(feature_names) != len(columns):
        raise EncodingError("feature_names length does not match column count")
    features = []
    for name, col in zip(feature_names, columns):
        values = list(col)
        if not values:
            raise EncodingError(f"empty feature column: {name!r}")
        features.append(CategoricalFeature(name, tuple(sorted(set(values)))))
    return RowEncoder(features)

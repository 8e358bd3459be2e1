"""Dataset ingestion and feature pipelines.

Covers three sources of model input:

* an artificial two-integer dataset where class 1 means x1 + x2 = 9,
* monthly per-region incidence series loaded from CSV, turned into lag
  features (previous month and previous-year-same-month of the target
  region, plus previous-month values of configured source regions),
* a planted-rule synthetic series where the target region's outbreak is
  driven by a neighbor's previous-month rate crossing a cutoff, used to
  exercise the full forecasting pipeline without the real data.

Outbreak labeling uses the strict rule: more than 20 monthly incidences
per 100,000 population.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

OUTBREAK_RATE = 20.0

TOTAL_REGION = "Total"

# Source regions feeding each target's forecast.  The published mapping
# lists "XII" as a target twice; the second occurrence is taken to mean
# VII (the only region otherwise missing a row).
DEFAULT_NEIGHBORS: dict[str, list[str]] = {
    "I": ["II", "III", "IVA", "XIV", "Total"],
    "II": ["I", "III", "IVA", "XIV", "Total"],
    "III": ["I", "II", "IVA", "XVI"],
    "IVA": ["III", "IVB", "V", "XVI", "Total"],
    "IVB": ["II", "IVA", "VI", "Total"],
    "V": ["IVA", "VI", "Total"],
    "VI": ["IVB", "V", "VII", "XII", "Total"],
    "VII": ["IVA", "V", "VI", "XII", "Total"],
    "VIII": ["V", "VI"],
    "IX": ["X", "XI", "XII"],
    "X": ["IX", "XI", "XII", "XIV", "XV"],
    "XI": ["IX", "X", "XII", "XV"],
    "XII": ["IX", "X", "XI", "XV", "Total"],
    "XIII": ["IX", "X", "XII", "XV", "Total"],
    "XIV": ["I", "II", "III", "IVA", "IVB", "Total"],
    "XV": ["IX", "X", "XI", "XII"],
    "XVI": ["I", "III", "IVA", "V"],
}


class DataError(ValueError):
    """Raised for malformed or inconsistent input data."""


def label_outbreak(incidence: float) -> int:
    """1 iff the monthly rate per 100,000 strictly exceeds 20."""
    if incidence < 0:
        raise DataError(f"negative incidence rate: {incidence}")
    return int(incidence > OUTBREAK_RATE)


@dataclass
class LabeledDataset:
    """Raw-valued feature rows with labels and feature names."""

    rows: list[tuple]
    labels: list[int]
    feature_names: list[str]
    periods: list[tuple[int, int]] | None = None  # (year, month) per row, if any

    def __post_init__(self):
        if len(self.rows) != len(self.labels):
            raise DataError("row/label count mismatch")
        for r in self.rows:
            if len(r) != len(self.feature_names):
                raise DataError("row arity does not match feature names")

    def __len__(self) -> int:
        return len(self.rows)

    def columns(self) -> list[list]:
        return [list(col) for col in zip(*self.rows)] if self.rows else []

    def subset(self, indices: Sequence[int]) -> "LabeledDataset":
        return LabeledDataset(
            [self.rows[i] for i in indices],
            [self.labels[i] for i in indices],
            self.feature_names,
            [self.periods[i] for i in indices] if self.periods else None,
        )


class SeriesTable:
    """Monthly incidence rates keyed by (region, year, month).

    Months must be contiguous within each region's span.  A "Total"
    pseudo-region is computed as the plain sum of regional rates per
    month unless supplied explicitly.
    """

    def __init__(self, rows: Iterable[tuple[str, int, int, float]]):
        self._rates: dict[tuple[str, int], float] = {}
        regions: list[str] = []
        for region, year, month, rate in rows:
            if not 1 <= month <= 12:
                raise DataError(f"month {month} out of range for region {region!r}")
            if rate < 0:
                raise DataError(f"negative rate for ({region}, {year}, {month})")
            key = (region, year * 12 + (month - 1))
            if key in self._rates:
                raise DataError(f"duplicate entry for ({region}, {year}, {month})")
            self._rates[key] = float(rate)
            if region not in regions:
                regions.append(region)
        if not self._rates:
            raise DataError("series table is empty")
        self.regions = regions
        self._spans: dict[str, tuple[int, int]] = {}
        for region in regions:
            ts = sorted(t for (r, t) in self._rates if r == region)
            if ts[-1] - ts[0] + 1 != len(ts):
                missing = next(t for a, t in zip(ts, range(ts[0], ts[-1] + 1)) if a != t)
                raise DataError(
                    f"missing month for region {region!r}: "
                    f"{missing // 12}-{missing % 12 + 1:02d}"
                )
            self._spans[region] = (ts[0], ts[-1])

    def span(self, region: str) -> tuple[int, int]:
        if region == TOTAL_REGION and region not in self._spans:
            starts, ends = zip(*(self._spans[r] for r in self.regions))
            return max(starts), min(ends)
        if region not in self._spans:
            raise DataError(f"unknown region {region!r}")
        return self._spans[region]

    def rate_at(self, region: str, t: int) -> float:
        """Rate at absolute month index t = year*12 + (month-1)."""
        if region == TOTAL_REGION and (region, t) not in self._rates:
            return sum(self.rate_at(r, t) for r in self.regions)
        try:
            return self._rates[(region, t)]
        except KeyError:
            raise DataError(
                f"missing month for region {region!r}: {t // 12}-{t % 12 + 1:02d}"
            ) from None

    def rate(self, region: str, year: int, month: int) -> float:
        return self.rate_at(region, year * 12 + (month - 1))


def load_series(source: io.TextIOBase | str) -> SeriesTable:
    """Load a region,year,month,rate CSV into a validated SeriesTable."""
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    header = next(reader, None)
    expected = ["region", "year", "month", "rate"]
    if header is None or [h.strip().lower() for h in header] != expected:
        raise DataError(f"expected header {','.join(expected)}, got {header}")
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise DataError(f"line {lineno}: expected 4 columns, got {len(row)}")
        region = row[0].strip()
        try:
            year, month = int(row[1]), int(row[2])
            rate = float(row[3])
        except ValueError as exc:
            raise DataError(f"line {lineno}: {exc}") from None
        rows.append((region, year, month, rate))
    return SeriesTable(rows)


def write_series(table: SeriesTable, stream: io.TextIOBase) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["region", "year", "month", "rate"])
    for region in table.regions:
        lo, hi = table.span(region)
        for t in range(lo, hi + 1):
            writer.writerow([region, t // 12, t % 12 + 1, repr(table.rate_at(region, t))])


def build_lag_features(
    table: SeriesTable,
    target: str,
    sources: Sequence[str],
) -> LabeledDataset:
    """One row per month with at least 13 months of history for the target.

    Features, in order: target previous month, target previous-year same
    month, then previous-month rate of each source region.
    """
    for region in [target, *sources]:
        if region != TOTAL_REGION and region not in table.regions:
            raise DataError(f"unknown region {region!r}")
    lo, hi = table.span(target)
    if hi - lo + 1 < 13:
        raise DataError(
            f"region {target!r} spans {hi - lo + 1} months; need at least 13"
        )
    names = [f"{target}(t-1)", f"{target}(t-12)"]
    names += [f"{src}(t-1)" for src in sources]
    rows, labels, periods = [], [], []
    for t in range(lo + 12, hi + 1):
        feats = [table.rate_at(target, t - 1), table.rate_at(target, t - 12)]
        feats += [table.rate_at(src, t - 1) for src in sources]
        rows.append(tuple(feats))
        labels.append(label_outbreak(table.rate_at(target, t)))
        periods.append((t // 12, t % 12 + 1))
    return LabeledDataset(rows, labels, names, periods)


def split_by_year(dataset: LabeledDataset, test_year: int) -> tuple[list[int], list[int]]:
    """Index split: rows before ``test_year`` train, rows in it test."""
    if dataset.periods is None:
        raise DataError("dataset has no period metadata to split on")
    train = [i for i, (y, _) in enumerate(dataset.periods) if y < test_year]
    test = [i for i, (y, _) in enumerate(dataset.periods) if y == test_year]
    return train, test


def generate_artificial(
    rng: np.random.Generator,
    count: int,
    positive_fraction: float | None = None,
) -> LabeledDataset:
    """Two integer features, 0 <= x1 <= 4 and 0 <= x2 <= 5; class 1 iff x1+x2 = 9.

    Only (4, 5) sums to 9, so uniform sampling yields ~1/30 positives.
    ``positive_fraction`` oversamples the positive cell to a chosen rate
    (the behavior study uses 1/9).
    """
    if count < 1:
        raise DataError("count must be >= 1")
    rows, labels = [], []
    for _ in range(count):
        if positive_fraction is not None and rng.random() < positive_fraction:
            x1, x2 = 4, 5
        else:
            x1, x2 = int(rng.integers(5)), int(rng.integers(6))
            if positive_fraction is not None:
                while (x1, x2) == (4, 5):
                    x1, x2 = int(rng.integers(5)), int(rng.integers(6))
        rows.append((x1, x2))
        labels.append(int(x1 + x2 == 9))
    return LabeledDataset(rows, labels, ["x1", "x2"])


def artificial_domain() -> list[tuple[int, int]]:
    """All 30 (x1, x2) cells of the artificial input space."""
    return [(a, b) for a in range(5) for b in range(6)]


def generate_planted_outbreak(
    rng: np.random.Generator,
    months: int = 96,
    cutoff: float = 20.0,
    start_year: int = 2008,
) -> tuple[SeriesTable, dict[str, list[str]]]:
    """Three-region series where region A's outbreak at month t is planted
    as "B's rate at t-1 exceeded ``cutoff``".

    Returns the series plus the matching neighbor configuration
    {A: [B, C]}.  B and C are drawn from a coarse rate grid spanning
    [0, 1.8*cutoff] with no value at the cutoff itself, so the planted
    rule is noise-free and every grid value recurs in training.  A sits
    well above or below the outbreak rate.
    """
    if months < 14:
        raise DataError("need at least 14 months for a usable planted series")
    # Target sits at 1.5*cutoff (outbreak) or 0.25*cutoff (quiet); both
    # must land on the right side of the fixed outbreak rate.
    if not 0.25 * cutoff <= OUTBREAK_RATE < 1.5 * cutoff:
        raise DataError(f"cutoff {cutoff} cannot express outbreaks at rate {OUTBREAK_RATE}")
    t0 = start_year * 12
    grid = cutoff * np.array([0.0, 0.3, 0.6, 0.9, 1.2, 1.5, 1.8])
    b_rates = grid[rng.integers(len(grid), size=months)]
    c_rates = grid[rng.integers(len(grid), size=months)]
    a_rates = np.empty(months)
    a_rates[0] = 0.25 * cutoff
    for i in range(1, months):
        a_rates[i] = 1.5 * cutoff if b_rates[i - 1] > cutoff else 0.25 * cutoff
    rows = []
    for name, rates in (("A", a_rates), ("B", b_rates), ("C", c_rates)):
        for i in range(months):
            t = t0 + i
            rows.append((name, t // 12, t % 12 + 1, float(rates[i])))
    return SeriesTable(rows), {"A": ["B", "C"]}


def load_labeled_csv(source: io.TextIOBase | str) -> LabeledDataset:
    """Load a feature CSV whose last column, named "label", holds class indexes.

    Feature cells parse as float when possible and stay strings otherwise
    (strings are treated as categorical downstream).
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    header = next(reader, None)
    if not header or header[-1].strip().lower() != "label":
        raise DataError('expected a header whose last column is "label"')
    names = [h.strip() for h in header[:-1]]
    rows: list[tuple] = []
    labels: list[int] = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise DataError(f"line {lineno}: expected {len(header)} columns")
        try:
            labels.append(int(row[-1]))
        except ValueError:
            raise DataError(f"line {lineno}: non-integer label {row[-1]!r}") from None
        rows.append(tuple(_parse_cell(c) for c in row[:-1]))
    if not rows:
        raise DataError("no data rows")
    return LabeledDataset(rows, labels, names)


def write_labeled_csv(dataset: LabeledDataset, stream: io.TextIOBase) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow([*dataset.feature_names, "label"])
    for row, label in zip(dataset.rows, dataset.labels):
        writer.writerow([*(_format_cell(v) for v in row), label])


def _parse_cell(cell: str) -> Any:
    cell = cell.strip()
    try:
        as_float = float(cell)
    except ValueError:
        return cell
    if as_float.is_integer() and "." not in cell and "e" not in cell.lower():
        return int(as_float)
    return as_float


def _format_cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)

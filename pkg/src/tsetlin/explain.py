"""Render trained clauses as human-readable propositional rules.

Threshold literals map back to interval conditions on the original
continuous feature (negating "value <= t" gives "value > t", so a
conjunction of threshold literals collapses to one interval).  One-hot
literals map to equality conditions.  Contradictory inclusions are
surfaced as UNSATISFIABLE rather than silently simplified away.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .binarizer import CategoricalFeature, ContinuousFeature, RowEncoder
from .clause import Clause, Mode


@dataclass(frozen=True)
class IntervalCondition:
    feature: str
    lower: float | None  # value must be > lower
    upper: float | None  # value must be <= upper

    def satisfied(self, value: float) -> bool:
        if self.lower is not None and not value > self.lower:
            return False
        if self.upper is not None and not value <= self.upper:
            return False
        return True

    def __str__(self) -> str:
        if self.lower is not None and self.upper is not None:
            return f"{self.lower} < {self.feature} <= {self.upper}"
        if self.upper is not None:
            return f"{self.feature} <= {self.upper}"
        return f"{self.feature} > {self.lower}"


@dataclass(frozen=True)
class EqualCondition:
    feature: str
    value: Any

    def satisfied(self, value: Any) -> bool:
        return value == self.value

    def __str__(self) -> str:
        return f"{self.feature} = {self.value}"


@dataclass(frozen=True)
class NotEqualCondition:
    feature: str
    value: Any

    def satisfied(self, value: Any) -> bool:
        return value != self.value

    def __str__(self) -> str:
        return f"{self.feature} != {self.value}"


Condition = IntervalCondition | EqualCondition | NotEqualCondition

EMPTY_RULE_TEXT = "always-true (learning) / always-false (classification)"


@dataclass(frozen=True)
class Rule:
    """A clause rendered over raw feature values."""

    conditions: tuple[Condition, ...]
    feature_names: tuple[str, ...]
    empty: bool = False
    unsatisfiable: bool = False

    @property
    def text(self) -> str:
        if self.unsatisfiable:
            return "UNSATISFIABLE"
        if self.empty:
            return EMPTY_RULE_TEXT
        return " AND ".join(str(c) for c in self.conditions)

    def satisfied(self, row: Sequence[Any] | Mapping[str, Any],
                  mode: Mode = Mode.CLASSIFY) -> bool:
        """Truth value of the rule on a raw feature row.

        Matches clause evaluation on any row the fitted encoder can
        encode; the empty rule follows the clause's mode convention.
        """
        if self.unsatisfiable:
            return False
        if self.empty:
            return mode is Mode.LEARN
        if not isinstance(row, Mapping):
            row = dict(zip(self.feature_names, row, strict=True))
        return all(c.satisfied(row[c.feature]) for c in self.conditions)


def clause_to_rule(clause: Clause, encoder: RowEncoder) -> Rule:
    if clause.n_bits != encoder.n_bits:
        raise ValueError(
            f"clause has {clause.n_bits} bits, encoder produces {encoder.n_bits}"
        )
    inc = clause.include_mask()
    names = tuple(encoder.feature_names)
    if not inc.any():
        return Rule((), names, empty=True)

    origins = encoder.bit_origins()
    # Group included literals per original feature.
    plain: dict[int, list[Any]] = {}
    negated: dict[int, list[Any]] = {}
    feature_of: list[int] = []
    seen: dict[int, Any] = {}
    for bit, (feat, value) in enumerate(origins):
        fidx = id(feat)
        if fidx not in seen:
            seen[fidx] = len(seen)
        feature_of.append(seen[fidx])
        if inc[2 * bit]:
            plain.setdefault(seen[fidx], []).append(value)
        if inc[2 * bit + 1]:
            negated.setdefault(seen[fidx], []).append(value)

    conditions: list[Condition] = []
    unsat = False
    for fidx, feat in enumerate(encoder.features):
        pos = plain.get(fidx, [])
        neg = negated.get(fidx, [])
        if not pos and not neg:
            continue
        if isinstance(feat, ContinuousFeature):
            upper = min(pos) if pos else None  # v <= t for every included bit
            lower = max(neg) if neg else None  # v > t for every negated bit
            if lower is not None and upper is not None and upper <= lower:
                unsat = True
            conditions.append(IntervalCondition(feat.name, lower, upper))
        else:
            if len(set(pos)) > 1 or any(v in neg for v in pos):
                unsat = True
            if pos:
                conditions.append(EqualCondition(feat.name, pos[0]))
                # "!= other" conditions are implied by the equality.
            else:
                conditions.extend(NotEqualCondition(feat.name, v) for v in sorted(neg))
    return Rule(tuple(conditions), names, unsatisfiable=unsat)


def machine_rules(machine, encoder: RowEncoder) -> list[dict]:
    """Rules for every clause of every class bank, in bank order."""
    out = []
    for class_idx, bank in enumerate(machine.banks):
        for i in range(bank.n_clauses):
            clause = bank.clause(i)
            rule = clause_to_rule(clause, encoder)
            out.append(
                {
                    "class": class_idx,
                    "clause": i + 1,
                    "polarity": clause.polarity,
                    "rule": rule,
                }
            )
    return out

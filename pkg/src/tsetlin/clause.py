"""Conjunctive clauses governed by teams of Tsetlin Automata.

A clause over n input bits owns 2n TA states, one per literal: slot 2k
holds the TA for x_k and slot 2k+1 the TA for its negation.  The clause
outputs 1 iff every literal whose TA currently says INCLUDE evaluates
to 1.

An empty clause (nothing included) evaluates to 1 during learning, per
the empty conjunction, but to 0 during classification so that untrained
clauses cannot corrupt voting.  This split is fixed, not configurable.
"""

from __future__ import annotations

import enum

import numpy as np


class Mode(enum.Enum):
    LEARN = "learn"
    CLASSIFY = "classify"


def literal_values(x: np.ndarray) -> np.ndarray:
    """Expand an n-bit input into 2n literal values [x_1, ~x_1, x_2, ~x_2, ...]."""
    x = np.asarray(x, dtype=np.uint8)
    out = np.empty(2 * x.size, dtype=np.uint8)
    out[0::2] = x
    out[1::2] = 1 - x
    return out


def literal_value(x: np.ndarray, literal_index: int) -> int:
    """Value of one literal: x_k for even slots, 1 - x_k for odd slots."""
    k, negated = divmod(literal_index, 2)
    v = int(x[k])
    return 1 - v if negated else v


class Clause:
    """One clause: 2n TA states plus a vote polarity of +1 or -1.

    ``states`` may be a view into a bank's state matrix; mutations are
    shared either way.
    """

    def __init__(self, states: np.ndarray, polarity: int, states_per_action: int):
        states = np.asarray(states)
        if states.ndim != 1 or states.size % 2 != 0:
            raise ValueError("clause needs a flat, even-length TA state array")
        if polarity not in (1, -1):
            raise ValueError("polarity must be +1 or -1")
        self.states = states
        self.polarity = polarity
        self.states_per_action = states_per_action

    @classmethod
    def empty(cls, n_bits: int, polarity: int, states_per_action: int) -> "Clause":
        states = np.full(2 * n_bits, states_per_action, dtype=np.int32)
        return cls(states, polarity, states_per_action)

    @property
    def n_bits(self) -> int:
        return self.states.size // 2

    def include_mask(self) -> np.ndarray:
        """Boolean mask over the 2n literals: True where the TA says INCLUDE."""
        return self.states > self.states_per_action

    def included_literals(self) -> tuple[set[int], set[int]]:
        """(plain, negated) variable index sets of the included literals."""
        inc = self.include_mask()
        plain = {k for k in range(self.n_bits) if inc[2 * k]}
        negated = {k for k in range(self.n_bits) if inc[2 * k + 1]}
        return plain, negated

    def evaluate(self, x: np.ndarray, mode: Mode) -> int:
        x = np.asarray(x, dtype=np.uint8)
        if x.size != self.n_bits:
            raise ValueError(f"input has {x.size} bits, clause expects {self.n_bits}")
        inc = self.include_mask()
        if not inc.any():
            return 1 if mode is Mode.LEARN else 0
        lits = literal_values(x)
        return int(np.all(lits[inc] == 1))

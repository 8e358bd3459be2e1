"""The Tsetlin Machine: clause banks, voting, and the feedback game.

Each class owns a bank of clauses over the same input bits.  A sample's
vote sum is the number of positive-polarity clause outputs minus the
negative ones; prediction is the argmax of per-class sums.

Training applies two kinds of feedback to a bank, chosen per clause
from its polarity and the bank's target output:

* Type I (stochastic, granularity s) pushes clauses toward capturing
  the current input, combating false negatives.
* Type II (deterministic penalty) includes a 0-valued literal into an
  offending clause, combating false positives.

Per clause, Type I feedback is gated with probability
(T - clamp(sum)) / 2T and Type II with (T + clamp(sum)) / 2T, both on a
vote-sum snapshot frozen before any clause in the bank is updated.

All state lives in integer numpy arrays; feedback is vectorized across
a whole bank.  The per-clause entry points used by tests share the same
kernels via single-row views.
"""

from __future__ import annotations

import numpy as np

from .clause import Clause, Mode, literal_values


class ConfigError(ValueError):
    """Raised for invalid machine hyperparameters."""


def clamp_sum(vote_sum: int, threshold: int) -> int:
    return max(-threshold, min(threshold, vote_sum))


def type_i_activation_prob(vote_sum: int, threshold: int) -> float:
    """Probability of giving a clause Type I feedback at this vote sum."""
    return (threshold - clamp_sum(vote_sum, threshold)) / (2.0 * threshold)


def type_ii_activation_prob(vote_sum: int, threshold: int) -> float:
    """Probability of giving a clause Type II feedback at this vote sum."""
    return (threshold + clamp_sum(vote_sum, threshold)) / (2.0 * threshold)


def _apply_type_i(
    states: np.ndarray,
    litb: np.ndarray,
    outb: np.ndarray,
    active: np.ndarray,
    s: float,
    states_per_action: int,
    rng: np.random.Generator,
) -> None:
    """Type I feedback, in place, on rows of ``states`` flagged in ``active``.

    Reward/penalty probabilities keyed on (clause output, literal value,
    include/exclude):

      out=1, lit=1: include rewarded w.p. (s-1)/s, exclude penalized w.p. (s-1)/s
      out=1, lit=0: exclude rewarded w.p. 1/s
      out=0:        include penalized w.p. 1/s, exclude rewarded w.p. 1/s

    Everything else is inaction.  One uniform draw per TA per event.
    """
    if not active.any():
        return
    n = states_per_action
    rows = active
    sub = states[rows]
    u = rng.random(sub.shape)
    inc = sub > n
    exc = ~inc
    lit = litb[None, :]
    out = outb[rows][:, None]
    low = u < 1.0 / s
    high = u < (s - 1.0) / s

    hit_lit = out & lit
    reward = (hit_lit & inc & high) | (out & ~lit & exc & low) | (~out & exc & low)
    penalty = (hit_lit & exc & high) | (~out & inc & low)

    # Reward deepens (away from the middle), penalty moves toward it.
    sub += np.where(inc, 1, -1) * (reward.astype(np.int32) - penalty.astype(np.int32))
    np.minimum(sub, 2 * n, out=sub)
    np.maximum(sub, 1, out=sub)
    states[rows] = sub


def _apply_type_ii(
    states: np.ndarray,
    litb: np.ndarray,
    outb: np.ndarray,
    active: np.ndarray,
    states_per_action: int,
) -> None:
    """Type II feedback in place: for clauses outputting 1, penalize every
    EXCLUDE action on a 0-valued literal with probability 1."""
    rows = active & outb
    if not rows.any():
        return
    sub = states[rows]
    penalty = ~litb[None, :] & ~(sub > states_per_action)
    sub += penalty
    states[rows] = sub


def type_i_feedback(
    clause: Clause, x: np.ndarray, rng: np.random.Generator, s: float
) -> None:
    litb = literal_values(x).astype(bool)
    outb = np.array([clause.evaluate(x, Mode.LEARN)], dtype=bool)
    _apply_type_i(
        clause.states.reshape(1, -1), litb, outb, np.ones(1, dtype=bool),
        s, clause.states_per_action, rng,
    )


def type_ii_feedback(clause: Clause, x: np.ndarray) -> None:
    litb = literal_values(x).astype(bool)
    outb = np.array([clause.evaluate(x, Mode.LEARN)], dtype=bool)
    _apply_type_ii(
        clause.states.reshape(1, -1), litb, outb, np.ones(1, dtype=bool),
        clause.states_per_action,
    )


class ClauseBank:
    """One class's clauses: an (m, 2n) matrix of TA states plus polarities.

    Clause index 1 (1-based) is positive, 2 negative, and so on.
    """

    def __init__(
        self,
        n_clauses: int,
        n_bits: int,
        states_per_action: int,
        init_state: int | None = None,
    ):
        if n_clauses < 2 or n_clauses % 2 != 0:
            raise ConfigError("clause count per class must be even and >= 2")
        if n_bits < 1:
            raise ConfigError("need at least one input bit")
        if init_state is None:
            init_state = states_per_action
        self.states_per_action = states_per_action
        self.states = np.full((n_clauses, 2 * n_bits), init_state, dtype=np.int32)
        self.positive = np.arange(n_clauses) % 2 == 0
        self.polarities = np.where(self.positive, 1, -1).astype(np.int32)

    @property
    def n_clauses(self) -> int:
        return self.states.shape[0]

    @property
    def n_bits(self) -> int:
        return self.states.shape[1] // 2

    def clause(self, i: int) -> Clause:
        """A live view of clause i; mutations write through to the bank."""
        return Clause(self.states[i], int(self.polarities[i]), self.states_per_action)

    def clauses(self) -> list[Clause]:
        return [self.clause(i) for i in range(self.n_clauses)]

    def evaluate_all(self, litb: np.ndarray, mode: Mode) -> np.ndarray:
        """Boolean outputs of all clauses on pre-expanded boolean literals."""
        inc = self.states > self.states_per_action
        out = np.all(litb[None, :] | ~inc, axis=1)
        if mode is Mode.CLASSIFY:
            out &= inc.any(axis=1)
        return out

    def vote_sum(self, x: np.ndarray, mode: Mode) -> int:
        x = np.asarray(x, dtype=np.uint8)
        if x.size != self.n_bits:
            raise ValueError(f"input has {x.size} bits, bank expects {self.n_bits}")
        out = self.evaluate_all(literal_values(x).astype(bool), mode)
        return int(self.polarities @ out)


class TsetlinMachine:
    """Multiclass Tsetlin Machine over pre-binarized inputs.

    Args:
        n_bits: input width n.
        n_classes: number of classes q (1 for a single-bank binary setup).
        clauses_per_class: m, even and >= 2.
        states_per_action: N per TA half.
        threshold: vote-sum target T gating feedback activation.
        s: feedback granularity, > 1.
        seed: drives sample shuffling and all stochastic feedback.
        negative_sampling: "single" trains one random non-target bank per
            sample, "all" trains every non-target bank.
    """

    def __init__(
        self,
        n_bits: int,
        n_classes: int,
        clauses_per_class: int,
        states_per_action: int = 100,
        threshold: int = 1,
        s: float = 8.0,
        seed: int = 0,
        negative_sampling: str = "single",
        init_state: int | None = None,
    ):
        if n_classes < 1:
            raise ConfigError("need at least one class")
        if states_per_action < 1:
            raise ConfigError("states per action must be >= 1")
        if threshold < 1:
            raise ConfigError("threshold must be >= 1")
        if not s > 1:
            raise ConfigError("s must be > 1")
        if negative_sampling not in ("single", "all"):
            raise ConfigError("negative_sampling must be 'single' or 'all'")
        self.n_bits = n_bits
        self.n_classes = n_classes
        self.threshold = threshold
        self.s = float(s)
        self.seed = seed
        self.negative_sampling = negative_sampling
        self.banks = [
            ClauseBank(clauses_per_class, n_bits, states_per_action, init_state)
            for _ in range(n_classes)
        ]
        self._rng = np.random.default_rng(seed)

    @property
    def clauses_per_class(self) -> int:
        return self.banks[0].n_clauses

    @property
    def states_per_action(self) -> int:
        return self.banks[0].states_per_action

    def vote_sums(self, x: np.ndarray, mode: Mode = Mode.CLASSIFY) -> list[int]:
        return [bank.vote_sum(x, mode) for bank in self.banks]

    def predict(self, x: np.ndarray) -> int:
        """Argmax class; ties break to the lowest class index."""
        return int(np.argmax(self.vote_sums(x)))

    def predict_many(self, xs: np.ndarray) -> np.ndarray:
        return np.array([self.predict(x) for x in xs], dtype=np.int64)

    def _update_bank(
        self, bank: ClauseBank, litb: np.ndarray, target_output: int,
        rng: np.random.Generator,
    ) -> None:
        outputs = bank.evaluate_all(litb, Mode.LEARN)
        snapshot = int(bank.polarities @ outputs)
        p_i = type_i_activation_prob(snapshot, self.threshold)
        p_ii = type_ii_activation_prob(snapshot, self.threshold)
        # Negative clauses vote for the other classes, so feedback types
        # swap with polarity when the target output flips.
        gets_type_i = bank.positive if target_output == 1 else ~bank.positive
        active = rng.random(bank.n_clauses) < np.where(gets_type_i, p_i, p_ii)
        _apply_type_i(
            bank.states, litb, outputs, active & gets_type_i,
            self.s, bank.states_per_action, rng,
        )
        _apply_type_ii(
            bank.states, litb, outputs, active & ~gets_type_i,
            bank.states_per_action,
        )

    def train_sample(
        self, x: np.ndarray, label: int, rng: np.random.Generator | None = None
    ) -> None:
        x = np.asarray(x, dtype=np.uint8)
        self._train_literals(literal_values(x).astype(bool), label, rng)

    def _train_literals(
        self, litb: np.ndarray, label: int, rng: np.random.Generator | None = None
    ) -> None:
        if not 0 <= label < self.n_classes:
            raise ValueError(f"label {label} out of range for {self.n_classes} classes")
        if rng is None:
            rng = self._rng
        if self.n_classes == 1:
            self._update_bank(self.banks[0], litb, int(label), rng)
            return
        self._update_bank(self.banks[label], litb, 1, rng)
        others = [j for j in range(self.n_classes) if j != label]
        if self.negative_sampling == "single" and len(others) > 1:
            others = [others[int(rng.integers(len(others)))]]
        for j in others:
            self._update_bank(self.banks[j], litb, 0, rng)

    def fit(
        self,
        xs: np.ndarray,
        ys: np.ndarray,
        epochs: int,
        trace: bool = False,
    ) -> list[np.ndarray] | None:
        """Train over shuffled epochs; optionally record TA states per epoch.

        The trace is a list (one entry per epoch) of (q, m, 2n) state
        snapshots taken after the epoch finished.
        """
        xs = np.asarray(xs, dtype=np.uint8)
        ys = np.asarray(ys, dtype=np.int64)
        if len(xs) == 0:
            raise ValueError("empty dataset")
        if len(xs) != len(ys):
            raise ValueError("feature/label length mismatch")
        if epochs < 1:
            raise ValueError("epochs must be >= 1")
        lit_rows = np.array([literal_values(x) for x in xs], dtype=np.uint8).astype(
            bool
        )
        labels = [int(y) for y in ys]
        snapshots: list[np.ndarray] = []
        for _ in range(epochs):
            order = self._rng.permutation(len(xs))
            for idx in order:
                self._train_literals(lit_rows[idx], labels[idx])
            if trace:
                snapshots.append(np.stack([b.states.copy() for b in self.banks]))
        return snapshots if trace else None

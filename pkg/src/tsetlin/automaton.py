"""Two-action Tsetlin Automaton: a bounded integer state walk.

A TA with 2N states learns one of two actions from reward/penalty
feedback.  States 1..N map to EXCLUDE, states N+1..2N to INCLUDE.
Reward moves the state deeper into its half, penalty moves it toward
the middle and eventually across the N/N+1 boundary, flipping the
action.
"""

from __future__ import annotations

import enum


class Action(enum.Enum):
    EXCLUDE = 0
    INCLUDE = 1


class TsetlinAutomaton:
    """Single two-action automaton with ``states_per_action`` = N states per side."""

    __slots__ = ("states_per_action", "state")

    def __init__(self, states_per_action: int, state: int | None = None):
        if states_per_action < 1:
            raise ValueError("states_per_action must be >= 1")
        self.states_per_action = states_per_action
        if state is None:
            # Shallowest EXCLUDE state: clauses start empty and adapt fast.
            state = states_per_action
        if not 1 <= state <= 2 * states_per_action:
            raise ValueError(f"state {state} outside [1, {2 * states_per_action}]")
        self.state = state

    def action(self) -> Action:
        if self.state <= self.states_per_action:
            return Action.EXCLUDE
        return Action.INCLUDE

    def reward(self) -> int:
        """Reinforce the current action by moving one state deeper (saturating)."""
        if self.action() is Action.EXCLUDE:
            self.state = max(1, self.state - 1)
        else:
            self.state = min(2 * self.states_per_action, self.state + 1)
        return self.state

    def penalize(self) -> int:
        """Weaken the current action by moving one state toward the middle."""
        if self.action() is Action.EXCLUDE:
            self.state += 1
        else:
            self.state -= 1
        return self.state

    def __repr__(self) -> str:
        return (
            f"TsetlinAutomaton(states_per_action={self.states_per_action}, "
            f"state={self.state})"
        )

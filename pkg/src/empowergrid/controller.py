"""Greedy empowerment-maximizing decision rule.

Each turn, every available action is scored by the sparse empowerment of
the successor state one full step ahead (action plus world update, so
falling and lava adjacency are already reflected). The action with the
highest reachable-count wins; ties break uniformly at random. Comparing
integer counts rather than nats avoids float tie artifacts; ln is
monotone, so the argmax is identical.

Reproducibility: all streams derive from (master seed, turn, role) via
``numpy.random.SeedSequence`` spawn keys. Every action under evaluation
gets its own independent stream, so evaluation order and thread count
never change results, and a dead agent still gets a full decision record
(all of its actions are no-ops).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blockworld import Action, Embodiment, WorldState, action_set, step
from .empowerment import EmpowermentEstimate, sparse_empowerment

_EVAL_DOMAIN = 0
_TIE_DOMAIN = 1
_CF_DOMAIN = 2


def evaluation_stream(master_seed: int, turn: int, action_index: int) -> np.random.Generator:
    """Independent sample stream for one (turn, action-under-evaluation)."""
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(_EVAL_DOMAIN, turn, action_index))
    )


def tie_break_stream(master_seed: int, turn: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(_TIE_DOMAIN, turn))
    )


def counterfactual_stream(master_seed: int, turn: int, embodiment: Embodiment) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(_CF_DOMAIN, turn, int(embodiment)))
    )


@dataclass(frozen=True)
class Decision:
    """One turn's choice plus the per-action estimates it was based on."""

    chosen: Action
    evaluations: list[tuple[Action, EmpowermentEstimate]]
    tie_set_size: int

    def counts(self) -> list[int]:
        return [est.reachable_count for _, est in self.evaluations]


def argmax_tie_break(counts, rng: np.random.Generator) -> tuple[int, int]:
    """Index of the max count, ties resolved uniformly; returns (index, tie size)."""
    best = max(counts)
    ties = [i for i, c in enumerate(counts) if c == best]
    if len(ties) == 1:
        return ties[0], 1
    return ties[int(rng.integers(len(ties)))], len(ties)


def choose_action(
    w: WorldState,
    e: Embodiment,
    horizon: int,
    samples: int,
    master_seed: int,
) -> Decision:
    """Evaluate every action's successor and pick the empowerment argmax."""
    actions = action_set(e)
    evaluations: list[tuple[Action, EmpowermentEstimate]] = []
    for k, a in enumerate(actions):
        successor = step(w, a, e)
        if not successor.alive:
            # all rollouts from a dead state collapse onto one location
            est = EmpowermentEstimate.from_count(1, horizon, samples)
        else:
            est = sparse_empowerment(
                successor, e, horizon, samples, evaluation_stream(master_seed, w.turn, k)
            )
        evaluations.append((a, est))
    idx, tie_size = argmax_tie_break(
        [est.reachable_count for _, est in evaluations],
        tie_break_stream(master_seed, w.turn),
    )
    return Decision(actions[idx], evaluations, tie_size)

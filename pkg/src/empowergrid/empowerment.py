"""Exact and sparse-sampled n-step empowerment over the location sensor.

In this deterministic world, empowerment of a state is the natural log of
the number of distinct agent end locations reachable by open-loop action
sequences of a given length. End states are compared by agent location
only (x, y, z); inventory, grid contents and the alive flag are not part
of the comparison. ``exact_empowerment`` enumerates the full sequence
space; ``sparse_empowerment`` estimates it from m uniformly drawn
sequences and always underestimates.

Also includes the estimator-quality machinery: a Monte-Carlo discovery
simulation over an abstract outcome distribution p(s), the analytic
model of its expected value ln(|S| - sum_s (1 - p(s))^m), and the five
benchmark distributions used by the study harness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _sim
from .blockworld import (
    ACTION_TABLES,
    Action,
    Embodiment,
    WorldState,
    action_set,
    decode_location,
)
from .info_theory import as_distribution

ENUMERATION_BUDGET = 2_000_000


class EnumerationBudgetError(RuntimeError):
    """Raised when exhaustive enumeration would exceed the sequence budget."""


@dataclass(frozen=True)
class EmpowermentEstimate:
    """Reachable end-location count and its natural log in nats.

    ``samples_m`` is the sample count for sparse estimates and ``None``
    for exhaustive enumeration.
    """

    reachable_count: int
    nats: float
    horizon_n: int
    samples_m: int | None

    @classmethod
    def from_count(cls, count: int, horizon: int, samples: int | None) -> "EmpowermentEstimate":
        if count < 1:
            raise ValueError("reachable count must be >= 1")
        return cls(count, math.log(count), horizon, samples)

    @property
    def exhaustive(self) -> bool:
        return self.samples_m is None


def _state_args(w: WorldState, e: Embodiment):
    x, y, z = w.agent_pos
    return (w.grid, x, y, z, int(w.inventory), 1 if w.alive else 0, w.turn, int(e), w.lava_period)


def _run_batch(w: WorldState, e: Embodiment, seqs: np.ndarray) -> np.ndarray:
    """End-location codes for each action-id row of ``seqs``."""
    grid, px, py, pz, inv, alive, turn, emb, period = _state_args(w, e)
    return _sim.batch_rollout_kernel(
        np.ascontiguousarray(grid), px, py, pz, inv, alive, turn, emb, period,
        np.ascontiguousarray(seqs, dtype=np.int8),
    )


def rollout(w: WorldState, seq, e: Embodiment) -> tuple[int, int, int]:
    """Final agent location after executing ``seq`` open-loop from ``w``."""
    allowed = action_set(e)
    for a in seq:
        if Action(a) not in allowed:
            raise ValueError(f"action {a!r} not available to embodiment {e!r}")
    if len(seq) == 0:
        return w.agent_pos
    ids = np.array([[int(a) for a in seq]], dtype=np.int8)
    code = int(_run_batch(w, e, ids)[0])
    return decode_location(code, w.dims)


def _all_index_sequences(n_actions: int, horizon: int) -> np.ndarray:
    """All horizon-length index tuples over ``range(n_actions)``, as rows."""
    total = n_actions**horizon
    idx = np.arange(total, dtype=np.int64)
    out = np.empty((total, horizon), dtype=np.int8)
    for j in range(horizon - 1, -1, -1):
        out[:, j] = (idx % n_actions).astype(np.int8)
        idx //= n_actions
    return out


def all_sequence_end_locations(
    w: WorldState, e: Embodiment, horizon: int, budget: int = ENUMERATION_BUDGET
) -> np.ndarray:
    """Encoded end location of every |A|^n action sequence, in sequence order.

    The row order matches counting in base |A| over the embodiment's
    action set. Raises ``EnumerationBudgetError`` above ``budget``.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    table = ACTION_TABLES[Embodiment(e)]
    total = len(table) ** horizon
    if total > budget:
        raise EnumerationBudgetError(
            f"{len(table)}^{horizon} = {total} sequences exceeds budget {budget}; "
            "use sparse_empowerment instead"
        )
    seqs = table[_all_index_sequences(len(table), horizon)]
    return _run_batch(w, e, seqs)


def exact_empowerment(
    w: WorldState, e: Embodiment, horizon: int, budget: int = ENUMERATION_BUDGET
) -> EmpowermentEstimate:
    """True empowerment ln|S*| by exhaustive enumeration of all sequences."""
    codes = all_sequence_end_locations(w, e, horizon, budget)
    count = int(np.unique(codes).size)
    return EmpowermentEstimate.from_count(count, horizon, None)


def sparse_empowerment(
    w: WorldState, e: Embodiment, horizon: int, samples: int, rng
) -> EmpowermentEstimate:
    """Sparse-sampling estimate: m i.i.d. uniform sequences, ln(distinct ends).

    ``rng`` is seed material for ``numpy.random.default_rng`` (a Generator
    passes through). All sequences are drawn in a single call, so the
    result depends only on the stream's entry state, never on evaluation
    order. Dead start states yield exactly one end location, hence 0 nats.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    gen = np.random.default_rng(rng)
    table = ACTION_TABLES[Embodiment(e)]
    seqs = table[gen.integers(0, len(table), size=(samples, horizon))]
    codes = _run_batch(w, e, seqs)
    count = int(np.unique(codes).size)
    return EmpowermentEstimate.from_count(count, horizon, samples)


def mc_discovery_estimate(p, samples: int, reps: int, rng) -> float:
    """Mean of ln(#distinct outcomes seen in ``samples`` draws from p), in nats.

    Repeats the draw-and-count process ``reps`` times and averages the
    log-counts, mirroring how the sparse estimator discovers end states
    when each random sequence lands on outcome s with probability p(s).
    """
    p = as_distribution(p)
    if samples < 1 or reps < 1:
        raise ValueError("samples and reps must be >= 1")
    gen = np.random.default_rng(rng)
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    draws = np.searchsorted(cdf, gen.random((reps, samples)), side="right")
    if p.size <= 64:
        masks = np.bitwise_or.reduce(
            np.uint64(1) << draws.astype(np.uint64), axis=1
        )
        counts = np.bitwise_count(masks)
    else:
        ordered = np.sort(draws, axis=1)
        counts = 1 + (np.diff(ordered, axis=1) != 0).sum(axis=1)
    return float(np.log(counts).mean())


def approximation_model(p, samples: int) -> float:
    """Analytic model of the sparse estimate: ln(|S| - sum_s (1 - p(s))^m).

    The exponent is the sample count m. For m = 1 this is exactly 0; for
    full-support p it tends to ln|S| as m grows.
    """
    p = as_distribution(p)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    expected = p.size - ((1.0 - p) ** samples).sum()
    return float(np.log(expected))


def estimator_study_distributions() -> list[np.ndarray]:
    """The five 10-state benchmark outcome distributions of the study.

    p1 uniform; p2 and p3 one dominant outcome with 9 equal rare ones;
    p4 dyadic with two 1/512 tails; p5 mixed 1/5, 1/10, 1/50 weights.
    All have full support on 10 states, so the target value is ln(10).
    """
    p1 = np.full(10, 1 / 10)
    p2 = np.array([91 / 100] + [1 / 100] * 9)
    p3 = np.array([991 / 1000] + [1 / 1000] * 9)
    p4 = np.array([1 / 2, 1 / 4, 1 / 8, 1 / 16, 1 / 32, 1 / 64, 1 / 128, 1 / 256, 1 / 512, 1 / 512])
    p5 = np.array([1 / 5] * 4 + [1 / 10] + [1 / 50] * 5)
    return [p1, p2, p3, p4, p5]

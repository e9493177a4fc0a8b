"""Discrete information-theoretic primitives, all in nats.

This module contains functions for computing information-theoretic
quantities on discrete probability distributions:

- entropy
- conditional entropy (from a joint distribution)
- mutual information (from a joint distribution)
- channel capacity (Blahut-Arimoto algorithm)

A distribution is a 1-D array of non-negative reals summing to one
(within 1e-9); a channel is a row-stochastic matrix whose row r is the
conditional distribution p(y | x=r). Probabilities below 1e-15 are
treated as exact zeros inside logarithms (0 log 0 = 0). A bits view is
value / ln(2); everything here stays in natural log.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SUM_TOL = 1e-9
ZERO_CUTOFF = 1e-15


def as_distribution(p) -> np.ndarray:
    """Validate and return ``p`` as a probability vector.

    Raises ValueError on negative entries or a sum off 1 by more than 1e-9.
    """
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("distribution must be a non-empty 1-D vector")
    if np.any(p < 0):
        raise ValueError("distribution has negative entries")
    s = float(p.sum())
    if abs(s - 1.0) > SUM_TOL:
        raise ValueError(f"distribution sums to {s}, not 1")
    return p


def as_channel(matrix) -> np.ndarray:
    """Validate and return ``matrix`` as a row-stochastic channel p(y|x)."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError("channel must be a non-empty 2-D matrix")
    if np.any(m < 0):
        raise ValueError("channel has negative entries")
    sums = m.sum(axis=1)
    bad = np.nonzero(np.abs(sums - 1.0) > SUM_TOL)[0]
    if bad.size:
        raise ValueError(f"channel row {bad[0]} sums to {sums[bad[0]]}, not 1")
    return m


def _plogp(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    mask = p > ZERO_CUTOFF
    out[mask] = p[mask] * np.log(p[mask])
    return out


def entropy(p) -> float:
    """Shannon entropy H(p) = -sum p ln p in nats."""
    p = as_distribution(p)
    return float(-_plogp(p).sum())


def _as_joint(joint) -> np.ndarray:
    j = np.asarray(joint, dtype=np.float64)
    if j.ndim != 2 or j.size == 0:
        raise ValueError("joint must be a non-empty 2-D matrix")
    if np.any(j < 0):
        raise ValueError("joint has negative entries")
    s = float(j.sum())
    if abs(s - 1.0) > SUM_TOL:
        raise ValueError(f"joint sums to {s}, not 1")
    return j


def conditional_entropy(joint) -> float:
    """H(X|Y) from a joint matrix p(x, y) with x on rows, y on columns."""
    j = _as_joint(joint)
    p_y = j.sum(axis=0)
    # -sum_{x,y} p(x,y) ln( p(x,y) / p(y) )
    total = 0.0
    mask = j > ZERO_CUTOFF
    xs, ys = np.nonzero(mask)
    total = float(-(j[xs, ys] * (np.log(j[xs, ys]) - np.log(p_y[ys]))).sum())
    return total


def mutual_information(joint) -> float:
    """I(X;Y) = H(X) - H(X|Y) from the joint p(x, y). Symmetric in X, Y."""
    j = _as_joint(joint)
    h_x = float(-_plogp(j.sum(axis=1)).sum())
    return h_x - conditional_entropy(j)


@dataclass(frozen=True)
class CapacityResult:
    capacity_nats: float
    achieving_input: np.ndarray
    iterations: int
    converged: bool
    bound_gap: float

    @property
    def capacity_bits(self) -> float:
        return self.capacity_nats / np.log(2.0)


def channel_capacity(channel, tol: float = 1e-9, max_iter: int = 10000) -> CapacityResult:
    """Channel capacity max_{p(x)} I(X;Y) via Blahut-Arimoto, in nats.

    Starts from the uniform input distribution and alternates the
    standard multiplicative update. Stops when the gap between the
    capacity upper bound max_x D(p(.|x) || q) and the lower bound
    I(p) = sum_x p(x) D(p(.|x) || q) drops below ``tol``, or after
    ``max_iter`` iterations (result then flagged non-converged, with the
    remaining bound gap reported). Iteration order is deterministic, so
    results are bit-reproducible.
    """
    ch = as_channel(channel)
    if tol <= 0:
        raise ValueError("tol must be positive")
    n_in = ch.shape[0]
    rows_logs = np.where(ch > ZERO_CUTOFF, np.log(np.where(ch > ZERO_CUTOFF, ch, 1.0)), 0.0)
    row_neg_ent = (ch * rows_logs).sum(axis=1)  # sum_y p(y|x) ln p(y|x)
    p = np.full(n_in, 1.0 / n_in)
    capacity = 0.0
    gap = np.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        q = p @ ch
        log_q = np.log(np.maximum(q, 1e-300))
        # D(p(.|x) || q) per input row
        d = row_neg_ent - ch @ log_q
        lower = float(p @ d)
        upper = float(d.max())
        capacity = max(lower, 0.0)
        gap = upper - lower
        if gap < tol:
            return CapacityResult(capacity, p, iterations, True, gap)
        # multiplicative update in log domain to avoid overflow
        w = np.where(p > 0, np.log(np.maximum(p, 1e-300)) + d, -np.inf)
        w -= w.max()
        p = np.exp(w)
        p /= p.sum()
    return CapacityResult(capacity, p, iterations, False, gap)


def read_channel(path) -> np.ndarray:
    """Read a channel matrix from whitespace-separated text.

    First line is ``|X| |Y|``, followed by |X| rows of |Y| reals.
    """
    with open(path, "r", encoding="utf-8") as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise ValueError("channel file must start with '|X| |Y|'")
    n_in, n_out = int(tokens[0]), int(tokens[1])
    values = tokens[2:]
    if len(values) != n_in * n_out:
        raise ValueError(
            f"channel file declares {n_in}x{n_out} entries, found {len(values)}"
        )
    m = np.array([float(v) for v in values], dtype=np.float64).reshape(n_in, n_out)
    return as_channel(m)

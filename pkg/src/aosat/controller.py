"""Adaptive operator selection: impact windows, compass reward, credit, choice.

The controller keeps, per operator, sliding windows of observed diversity and
quality deltas. Each step it aggregates the windows into one direction vector
per operator, turns those vectors into non-negative rewards by projecting onto
an angle theta in [0, pi/2] (0 rewards diversity, pi/2 rewards quality),
pushes every operator's reward into a second window whose aggregate is the
operator's credit, and finally selects the next operator by probability
matching, winner-take-all, or a UCB-style bandit rule.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SlidingWindow",
    "ControllerConfig",
    "OperatorStats",
    "Controller",
    "clamp_theta",
    "compass_reward",
    "update_utility",
    "pm_probabilities",
    "select_pm",
    "select_wta",
    "mab_scores",
    "select_mab",
]

QUALITY_ANGLE = math.pi / 2.0

AGGREGATORS = ("mean", "max")
METHODS = ("pm", "wta", "mab")


def clamp_theta(theta: float) -> float:
    return min(max(float(theta), 0.0), QUALITY_ANGLE)


class SlidingWindow:
    """Fixed-capacity FIFO of floats with mean/max aggregation.

    The mean is recomputed from the stored values: an incremental running
    sum would accumulate cancellation error and could report a slightly
    negative mean for an all-non-negative window, which downstream
    probability floors reject.
    """

    __slots__ = ("capacity", "_values")

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("window capacity must be >= 1")
        self.capacity = int(capacity)
        self._values = deque(maxlen=self.capacity)

    def push(self, value: float):
        self._values.append(float(value))

    def __len__(self) -> int:
        return len(self._values)

    @property
    def values(self):
        return tuple(self._values)

    def mean(self) -> float:
        return math.fsum(self._values) / len(self._values) if self._values else 0.0

    def max(self) -> float:
        return max(self._values) if self._values else 0.0

    def aggregate(self, how: str) -> float:
        if how == "mean":
            return self.mean()
        if how == "max":
            return self.max()
        raise ValueError(f"unknown aggregator {how!r}, expected one of {AGGREGATORS}")


@dataclass
class ControllerConfig:
    """Tuning knobs for the selection pipeline.

    `alpha` is the utility learning rate; the string "mean" selects the
    1/(t+1) schedule that makes each utility the running mean of its inputs.
    """

    twin: int = 50
    tprime_win: int = 50
    fwin: str = "mean"
    fprime_win: str = "mean"
    p_min: float = 0.05
    beta: float = 0.8
    c: float = 1.0
    alpha: float | str = "mean"
    method: str = "pm"

    def validate(self, num_operators: int | None = None):
        if self.twin < 1 or self.tprime_win < 1:
            raise ValueError("window sizes must be >= 1")
        if self.fwin not in AGGREGATORS or self.fprime_win not in AGGREGATORS:
            raise ValueError(f"aggregators must be one of {AGGREGATORS}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if not 0.0 <= self.p_min <= 1.0:
            raise ValueError("p_min must lie in [0, 1]")
        if num_operators is not None and self.p_min * num_operators > 1.0 + 1e-12:
            raise ValueError(
                f"p_min={self.p_min} infeasible for {num_operators} operators (needs p_min <= 1/n)"
            )
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must lie in [0, 1]")
        if self.alpha != "mean" and not 0.0 <= float(self.alpha) <= 1.0:
            raise ValueError('alpha must lie in [0, 1] or be "mean"')


@dataclass
class OperatorStats:
    """Per-operator bookkeeping carried by the controller."""

    diversity_window: SlidingWindow
    quality_window: SlidingWindow
    reward_window: SlidingWindow
    utility: float = 0.0
    selection_prob: float = 0.0
    n_applied: int = 0
    n_updates: int = 0


def compass_reward(opdirs, theta: float, min_shift: bool = True) -> np.ndarray:
    """Rewards from per-operator (diversity, quality) direction vectors.

    Each axis is normalized by its maximum absolute value over the operators
    (axes that are all zero are left alone), the vectors are projected onto
    (cos theta, sin theta), and the result is shifted so its minimum is zero.
    """
    dirs = np.array(opdirs, dtype=float)
    if dirs.ndim != 2 or dirs.shape[1] != 2:
        raise ValueError("opdirs must have shape (num_operators, 2)")
    if dirs.shape[0] == 0:
        return np.zeros(0)
    for axis in (0, 1):
        scale = np.abs(dirs[:, axis]).max()
        if scale > 0.0:
            dirs[:, axis] /= scale
    th = clamp_theta(theta)
    rewards = math.cos(th) * dirs[:, 0] + math.sin(th) * dirs[:, 1]
    if min_shift:
        rewards = rewards - rewards.min()
    return rewards


def update_utility(utility: float, reward: float, alpha: float) -> float:
    """One exponential-recency update of an operator utility."""
    return (1.0 - alpha) * utility + alpha * reward


def pm_probabilities(credits, p_min: float) -> np.ndarray:
    """Probability-matching distribution over operators.

    Every operator keeps at least p_min; the remaining mass is split in
    proportion to credit. All-zero credits yield the uniform distribution.
    """
    u = np.asarray(credits, dtype=float)
    n = len(u)
    if n == 0:
        raise ValueError("need at least one operator")
    if np.any(u < 0):
        raise ValueError("credits must be non-negative")
    total = u.sum()
    if total <= 0.0:
        return np.full(n, 1.0 / n)
    return p_min + (1.0 - n * p_min) * (u / total)


def _sample(probs: np.ndarray, rng) -> int:
    cum = np.cumsum(probs)
    idx = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    return min(idx, len(probs) - 1)


def select_pm(credits, p_min: float, rng) -> int:
    """Sample an operator index from the probability-matching distribution."""
    return _sample(pm_probabilities(credits, p_min), rng)


def select_wta(selection_probs, credits, beta: float, p_min: float, rng):
    """Winner-take-all update and draw.

    The highest-credit operator (lowest index on ties) has its probability
    pulled toward p_max = 1 - (n-1) p_min at rate beta, all others toward
    p_min; the updated distribution keeps its total and is then sampled.
    Returns (chosen index, updated probabilities).
    """
    probs = np.array(selection_probs, dtype=float)
    u = np.asarray(credits, dtype=float)
    n = len(probs)
    if n != len(u):
        raise ValueError("credits and probabilities differ in length")
    winner = int(np.argmax(u))
    p_max = 1.0 - (n - 1) * p_min
    updated = probs + beta * (p_min - probs)
    updated[winner] = probs[winner] + beta * (p_max - probs[winner])
    return _sample(updated, rng), updated


def mab_scores(utilities, counts, c: float) -> np.ndarray:
    """Upper-confidence scores u_i + c * sqrt(log(sum n) / n_i)."""
    u = np.asarray(utilities, dtype=float)
    n = np.asarray(counts, dtype=float)
    if np.any(n <= 0):
        raise ValueError("every operator needs at least one application")
    return u + c * np.sqrt(np.log(n.sum()) / n)


def select_mab(utilities, counts, c: float) -> int:
    """Deterministic bandit choice; unplayed operators are served first."""
    counts = np.asarray(counts)
    unplayed = np.flatnonzero(counts == 0)
    if len(unplayed):
        return int(unplayed[0])
    return int(np.argmax(mab_scores(utilities, counts, c)))


class Controller:
    """Stateful operator-selection pipeline over a fixed portfolio."""

    def __init__(self, operator_codes, config: ControllerConfig | None = None):
        self.codes = [str(c) for c in operator_codes]
        if not self.codes:
            raise ValueError("need at least one operator")
        self.config = config or ControllerConfig()
        self.config.validate(len(self.codes))
        n = len(self.codes)
        self.stats = [
            OperatorStats(
                diversity_window=SlidingWindow(self.config.twin),
                quality_window=SlidingWindow(self.config.twin),
                reward_window=SlidingWindow(self.config.tprime_win),
                selection_prob=1.0 / n,
            )
            for _ in range(n)
        ]

    @property
    def num_operators(self) -> int:
        return len(self.codes)

    def record_impact(self, op_index: int, d_diversity: float, d_quality: float):
        """Store the deltas observed for the operator just applied."""
        st = self.stats[op_index]
        st.diversity_window.push(d_diversity)
        st.quality_window.push(d_quality)
        st.n_applied += 1

    def opdirs(self) -> np.ndarray:
        """Aggregated (diversity, quality) direction per operator."""
        how = self.config.fwin
        out = np.zeros((len(self.stats), 2))
        for i, st in enumerate(self.stats):
            out[i, 0] = st.diversity_window.aggregate(how)
            out[i, 1] = st.quality_window.aggregate(how)
        return out

    def assign_credits(self) -> np.ndarray:
        how = self.config.fprime_win
        return np.array([st.reward_window.aggregate(how) for st in self.stats])

    def step(self, applied_op: int, d_diversity: float, d_quality: float,
             theta: float, rng) -> int:
        """Record one application's impact and choose the next operator."""
        self.record_impact(applied_op, d_diversity, d_quality)
        rewards = compass_reward(self.opdirs(), theta)
        for st, r in zip(self.stats, rewards):
            st.reward_window.push(r)
        credits = self.assign_credits()
        for st, credit in zip(self.stats, credits):
            alpha = self.config.alpha
            if alpha == "mean":
                alpha = 1.0 / (st.n_updates + 1)
            st.utility = update_utility(st.utility, float(credit), float(alpha))
            st.n_updates += 1
        if len(self.stats) == 1:
            return 0
        method = self.config.method
        if method == "pm":
            return select_pm(credits, self.config.p_min, rng)
        if method == "wta":
            probs = [st.selection_prob for st in self.stats]
            chosen, updated = select_wta(probs, credits, self.config.beta, self.config.p_min, rng)
            for st, p in zip(self.stats, updated):
                st.selection_prob = float(p)
            return chosen
        counts = [st.n_applied for st in self.stats]
        return select_mab([st.utility for st in self.stats], counts, self.config.c)

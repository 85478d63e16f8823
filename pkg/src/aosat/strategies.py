"""Schedules for the reward angle theta over the course of a run.

Theta lives in [0, pi/2]: 0 steers the controller toward diversity, pi/2
toward quality. Schedules are consulted once per iteration with a small
observation of the search state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SearchObservation",
    "FixedStrategy",
    "IncreaseStrategy",
    "DecreaseStrategy",
    "AlwaysMovingStrategy",
    "ReactiveMovingStrategy",
    "StrategyConfig",
    "make_strategy",
    "STRATEGY_NAMES",
]

_HALF_PI = math.pi / 2.0

STRATEGY_NAMES = ("fixed", "increase", "decrease", "alwaysmoving", "reactivemoving")


@dataclass(frozen=True)
class SearchObservation:
    """What a schedule may look at when asked for theta."""

    iteration: int
    entropy: float
    best_quality: int
    iterations_since_improvement: int


def _epoch(iteration: int, total: int, epochs: int) -> int:
    k = (iteration * epochs) // max(total, 1)
    return min(max(k, 0), epochs - 1)


class FixedStrategy:
    """Constant theta."""

    def __init__(self, theta: float):
        self.theta = min(max(float(theta), 0.0), _HALF_PI)

    def theta_at(self, obs: SearchObservation) -> float:
        return self.theta


class IncreaseStrategy:
    """Theta climbs from 0 to pi/2 over `epochs` equal stages."""

    def __init__(self, total_iterations: int, epochs: int = 10):
        if epochs < 1:
            raise ValueError("epochs must be >= 1")
        self.total = int(total_iterations)
        self.epochs = int(epochs)

    def theta_at(self, obs: SearchObservation) -> float:
        if self.epochs == 1:
            return _HALF_PI / 2.0
        k = _epoch(obs.iteration, self.total, self.epochs)
        return k * _HALF_PI / (self.epochs - 1)


class DecreaseStrategy:
    """Mirror image of the increasing schedule: pi/2 down to 0."""

    def __init__(self, total_iterations: int, epochs: int = 10):
        self._rising = IncreaseStrategy(total_iterations, epochs)

    def theta_at(self, obs: SearchObservation) -> float:
        return _HALF_PI - self._rising.theta_at(obs)


class AlwaysMovingStrategy:
    """Alternates between the two extremes: 0 on even epochs, pi/2 on odd."""

    def __init__(self, total_iterations: int, epochs: int = 10):
        if epochs < 1:
            raise ValueError("epochs must be >= 1")
        self.total = int(total_iterations)
        self.epochs = int(epochs)

    def theta_at(self, obs: SearchObservation) -> float:
        k = _epoch(obs.iteration, self.total, self.epochs)
        return 0.0 if k % 2 == 0 else _HALF_PI


class ReactiveMovingStrategy:
    """Event-driven schedule reacting to entropy loss and stagnation.

    Starts at theta 0. Switches to pi/2 while population entropy sits below
    `entropy_threshold`; switches back to 0 once the best quality has not
    improved for `stagnation_limit` consecutive iterations, which also
    rearms the stagnation trigger. When both events fire on the same
    iteration the stagnation trigger wins unless `stagnation_wins` is
    cleared. `invert` mirrors the schedule: both emitted angles and the
    starting angle swap.
    """

    def __init__(self, entropy_threshold: float = 0.9, stagnation_limit: int = 200,
                 stagnation_wins: bool = True, invert: bool = False):
        if stagnation_limit < 1:
            raise ValueError("stagnation_limit must be >= 1")
        self.entropy_threshold = float(entropy_threshold)
        self.stagnation_limit = int(stagnation_limit)
        self.stagnation_wins = bool(stagnation_wins)
        self.invert = bool(invert)
        self._theta = _HALF_PI if self.invert else 0.0
        self._counter_base = 0

    def theta_at(self, obs: SearchObservation) -> float:
        counter = obs.iterations_since_improvement
        if counter < self._counter_base:
            # The engine counter was reset by an improvement.
            self._counter_base = 0
        stagnated = counter - self._counter_base >= self.stagnation_limit
        low_entropy = obs.entropy < self.entropy_threshold
        entropy_theta = 0.0 if self.invert else _HALF_PI
        stagnation_theta = _HALF_PI if self.invert else 0.0
        if stagnated and (self.stagnation_wins or not low_entropy):
            self._theta = stagnation_theta
            self._counter_base = counter
        elif low_entropy:
            self._theta = entropy_theta
        return self._theta


@dataclass
class StrategyConfig:
    """Declarative strategy choice, turned into a schedule per run."""

    name: str = "fixed"
    theta: float = _HALF_PI
    epochs: int = 10
    entropy_threshold: float = 0.9
    stagnation_limit: int = 200
    stagnation_wins: bool = True
    invert: bool = False

    def build(self, total_iterations: int):
        return make_strategy(
            self.name,
            total_iterations,
            theta=self.theta,
            epochs=self.epochs,
            entropy_threshold=self.entropy_threshold,
            stagnation_limit=self.stagnation_limit,
            stagnation_wins=self.stagnation_wins,
            invert=self.invert,
        )


def make_strategy(name: str, total_iterations: int, *, theta: float = _HALF_PI,
                  epochs: int = 10, entropy_threshold: float = 0.9,
                  stagnation_limit: int = 200, stagnation_wins: bool = True,
                  invert: bool = False):
    """Build a fresh schedule instance by configuration name."""
    name = name.lower()
    if name == "fixed":
        return FixedStrategy(theta)
    if name == "increase":
        return IncreaseStrategy(total_iterations, epochs)
    if name == "decrease":
        return DecreaseStrategy(total_iterations, epochs)
    if name == "alwaysmoving":
        return AlwaysMovingStrategy(total_iterations, epochs)
    if name == "reactivemoving":
        return ReactiveMovingStrategy(entropy_threshold, stagnation_limit,
                                      stagnation_wins, invert)
    raise ValueError(f"unknown strategy {name!r}, expected one of {STRATEGY_NAMES}")

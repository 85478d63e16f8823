"""Steady-state evolutionary engine with pluggable operator selection.

One iteration: snapshot the population criteria, pick two parents by binary
tournaments, apply the current operator (optionally refining the child by
tabu search), insert the child over the oldest member, snapshot again, hand
the observed deltas to the operator-selection rule, and record a trace row.
A run stops at the iteration budget, or as soon as a satisfying assignment
is seen when early exit is enabled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .cnf import CnfFormula, parse_dimacs_file
from .controller import Controller, ControllerConfig
from .operators import apply as operators_apply
from .operators import decode, experiment_operator_set
from .population import Population
from .strategies import STRATEGY_NAMES, SearchObservation, StrategyConfig
from .tabu import MEMETIC_FLIP_BUDGET, tabu_improve, tabu_length_for

__all__ = [
    "QUALITY_EPS",
    "TabuConfig",
    "RunConfig",
    "RunResult",
    "Trace",
    "load_formula",
    "run_ea",
    "run_memetic",
    "run_baseline_random",
    "run_baseline_roulette",
    "load_config_file",
    "config_from_dict",
    "parse_theta",
]

QUALITY_EPS = 1e-9

SELECTION_MODES = ("controller", "random", "roulette")
TABU_MODES = ("off", "memetic")


@dataclass
class TabuConfig:
    mode: str = "off"  # "off" or "memetic"
    fraction: float = 0.1
    memetic_flip_budget: int = MEMETIC_FLIP_BUDGET


@dataclass
class RunConfig:
    """Everything one run needs; `formula` may be a path or a parsed formula."""

    formula: CnfFormula | str | Path
    operator_codes: list[str] | None = None  # None selects the 20-operator portfolio
    population_size: int = 30
    max_iterations: int = 100_000
    seed: int = 0
    selection: str = "controller"
    rates: tuple[float, ...] | None = None  # stationary roulette rates
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    strategy: StrategyConfig = field(default_factory=StrategyConfig)
    tabu: TabuConfig = field(default_factory=TabuConfig)
    early_exit: bool = True
    initial_population: str | Path | None = None


class Trace:
    """Per-iteration record columns, appended in order and emitted as CSV."""

    HEADER = "iteration,op,dq,dd,theta,entropy,mean_q,best"

    def __init__(self, operator_codes, capacity: int):
        self.operator_codes = [str(c) for c in operator_codes]
        cap = max(int(capacity), 0)
        self._iter = np.zeros(cap, dtype=np.int64)
        self._op = np.zeros(cap, dtype=np.int64)
        self._dq = np.zeros(cap, dtype=np.float64)
        self._dd = np.zeros(cap, dtype=np.float64)
        self._theta = np.zeros(cap, dtype=np.float64)
        self._entropy = np.zeros(cap, dtype=np.float64)
        self._mean_q = np.zeros(cap, dtype=np.float64)
        self._best = np.zeros(cap, dtype=np.int64)
        self._len = 0

    def append(self, iteration, op_index, dq, dd, theta, entropy, mean_q, best):
        i = self._len
        self._iter[i] = iteration
        self._op[i] = op_index
        self._dq[i] = dq
        self._dd[i] = dd
        self._theta[i] = theta
        self._entropy[i] = entropy
        self._mean_q[i] = mean_q
        self._best[i] = best
        self._len += 1

    def __len__(self) -> int:
        return self._len

    @property
    def iteration(self):
        return self._iter[: self._len]

    @property
    def op_index(self):
        return self._op[: self._len]

    @property
    def dq(self):
        return self._dq[: self._len]

    @property
    def dd(self):
        return self._dd[: self._len]

    @property
    def theta(self):
        return self._theta[: self._len]

    @property
    def entropy(self):
        return self._entropy[: self._len]

    @property
    def mean_q(self):
        return self._mean_q[: self._len]

    @property
    def best(self):
        return self._best[: self._len]

    def operator_counts(self) -> dict[str, int]:
        counts = np.bincount(self.op_index, minlength=len(self.operator_codes))
        return {code: int(c) for code, c in zip(self.operator_codes, counts)}

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.HEADER + "\n")
            for i in range(self._len):
                fh.write(
                    f"{self._iter[i]},{self.operator_codes[self._op[i]]},"
                    f"{float(self._dq[i])!r},{float(self._dd[i])!r},{float(self._theta[i])!r},"
                    f"{float(self._entropy[i])!r},{float(self._mean_q[i])!r},{self._best[i]}\n"
                )

    @classmethod
    def from_csv(cls, path) -> "Trace":
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header != cls.HEADER:
                raise ValueError(f"{path}: unexpected trace header {header!r}")
            rows = [line.strip().split(",") for line in fh if line.strip()]
        codes: list[str] = []
        index: dict[str, int] = {}
        trace = cls([], len(rows))
        for row in rows:
            if len(row) != 8:
                raise ValueError(f"{path}: malformed trace row {row!r}")
            code = row[1]
            if code not in index:
                index[code] = len(codes)
                codes.append(code)
            trace.append(int(row[0]), index[code], float(row[2]), float(row[3]),
                         float(row[4]), float(row[5]), float(row[6]), int(row[7]))
        trace.operator_codes = codes
        return trace


@dataclass
class RunResult:
    best_false_count: int
    best_iteration: int
    best_assignment: np.ndarray
    iterations_executed: int
    operator_counts: dict[str, int]
    trace: Trace
    seed: int

    @property
    def solved(self) -> bool:
        return self.best_false_count == 0


def load_formula(source) -> CnfFormula:
    if isinstance(source, CnfFormula):
        return source
    return parse_dimacs_file(source)


def _roulette_cumulative(rates, num_operators: int) -> np.ndarray:
    r = np.asarray(rates, dtype=float)
    if r.shape != (num_operators,):
        raise ValueError(f"rates must have one entry per operator ({num_operators})")
    if np.any(r < 0) or abs(r.sum() - 1.0) > 1e-6:
        raise ValueError("rates must be non-negative and sum to 1 within 1e-6")
    return np.cumsum(r)


def _run(config: RunConfig) -> RunResult:
    formula = load_formula(config.formula)
    if config.population_size < 2:
        raise ValueError("population_size must be >= 2")
    if config.selection not in SELECTION_MODES:
        raise ValueError(f"selection must be one of {SELECTION_MODES}")
    if config.tabu.mode not in TABU_MODES:
        raise ValueError(f"tabu mode must be one of {TABU_MODES}")

    codes = config.operator_codes
    if codes is None:
        codes = [s.code for s in experiment_operator_set()]
    specs = [decode(c) for c in codes]
    n_ops = len(specs)

    rng = np.random.default_rng(config.seed)
    if config.initial_population is not None:
        pop = Population.from_file(config.initial_population, formula)
        if len(pop) != config.population_size:
            raise ValueError(
                f"initial population holds {len(pop)} members, config expects {config.population_size}"
            )
    else:
        pop = Population.random(formula, config.population_size, rng)

    controller = None
    roulette_cum = None
    if config.selection == "controller":
        controller = Controller(codes, config.controller)
    elif config.selection == "roulette":
        roulette_cum = _roulette_cumulative(config.rates, n_ops)
    strategy = config.strategy.build(config.max_iterations)

    memetic = config.tabu.mode == "memetic" and config.tabu.memetic_flip_budget > 0
    tenure = tabu_length_for(formula, config.tabu.fraction)

    best_member = pop.best()
    best = best_member.false_count
    best_iteration = -1
    best_assignment = best_member.assignment.copy()
    stagnation = 0

    trace = Trace(codes, config.max_iterations)
    executed = 0

    if config.early_exit and best == 0:
        return RunResult(best, best_iteration, best_assignment, 0,
                         trace.operator_counts(), trace, config.seed)

    def next_random_op():
        return 0 if n_ops == 1 else int(rng.integers(n_ops))

    op = next_random_op()
    for t in range(config.max_iterations):
        before_q = pop.mean_quality()
        before_h = pop.entropy()
        parent_a, parent_b = pop.tournament_select_pair(rng)
        oldest = pop.members[pop.oldest_index()]
        child = operators_apply(specs[op], parent_a, parent_b,
                                formula=formula, rng=rng, oldest=oldest)
        if memetic:
            child = tabu_improve(child, formula, tenure,
                                 config.tabu.memetic_flip_budget, rng)
        pop.insert_replace_oldest(child, t)
        after_q = pop.mean_quality()
        after_h = pop.entropy()
        dq = (before_q - after_q) / max(before_q, QUALITY_EPS)
        dd = after_h - before_h

        if child.false_count < best:
            best = child.false_count
            best_iteration = t
            best_assignment = child.assignment.copy()
            stagnation = 0
        else:
            stagnation += 1

        theta = strategy.theta_at(
            SearchObservation(t, after_h, best, stagnation)
        )
        if controller is not None:
            next_op = controller.step(op, dd, dq, theta, rng)
        elif roulette_cum is not None:
            if n_ops == 1:
                next_op = 0
            else:
                next_op = min(int(np.searchsorted(roulette_cum, rng.random() * roulette_cum[-1],
                                                  side="right")), n_ops - 1)
        else:
            next_op = next_random_op()

        trace.append(t, op, dq, dd, theta, after_h, after_q, best)
        executed = t + 1
        if config.early_exit and best == 0:
            break
        op = next_op

    return RunResult(best, best_iteration, best_assignment, executed,
                     trace.operator_counts(), trace, config.seed)


def run_ea(config: RunConfig) -> RunResult:
    """Run with the configured operator-selection mode (controller by default)."""
    return _run(config)


def run_memetic(config: RunConfig) -> RunResult:
    """Run with tabu refinement of every child."""
    if config.tabu.mode != "memetic":
        config = replace(config, tabu=replace(config.tabu, mode="memetic"))
    return _run(config)


def run_baseline_random(config: RunConfig) -> RunResult:
    """Uniform random operator choice each iteration; no controller."""
    return _run(replace(config, selection="random"))


def run_baseline_roulette(config: RunConfig, rates=None) -> RunResult:
    """Stationary roulette over the operators with the given rates."""
    if rates is not None:
        config = replace(config, rates=tuple(float(r) for r in rates))
    return _run(replace(config, selection="roulette"))


# -- configuration files ------------------------------------------------------

def parse_theta(text) -> float:
    """Parse an angle that may be written in terms of pi, e.g. "pi/2"."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().lower().replace(" ", "")
    if "pi" in s:
        coef_part, _, div_part = s.partition("pi")
        coef = float(coef_part.rstrip("*")) if coef_part.rstrip("*") else 1.0
        div = float(div_part.lstrip("/")) if div_part else 1.0
        return coef * math.pi / div
    return float(s)


def _parse_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    s = str(text).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"cannot read {text!r} as a boolean")


def load_config_file(path) -> dict:
    """Read a flat key=value configuration file; '#' starts a comment."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}: line {lineno}: expected key=value, got {raw.strip()!r}")
            key, value = line.split("=", 1)
            out[key.strip().lower()] = value.strip()
    return out


def config_from_dict(options: dict, formula=None) -> RunConfig:
    """Build a RunConfig from flat string-or-value options.

    Recognized keys: population_size, max_iterations, seed, early_exit,
    operators, initial_population, selection, rates; controller keys twin,
    tprime_win, fwin, fprime_win, p_min, beta, c, alpha, method; strategy
    keys strategy, theta, epochs, entropy_threshold, stagnation_limit,
    stagnation_wins, invert; tabu keys tabu, tabu_fraction,
    memetic_flip_budget. An `instance` key names the formula file when no
    formula is passed in.
    """
    opts = {str(k).lower(): v for k, v in options.items()}

    def take(key, default=None):
        return opts.pop(key) if key in opts else default

    instance = take("instance")
    if formula is None:
        if instance is None:
            raise ValueError("no formula given and no 'instance' key present")
        formula = instance

    operators_opt = take("operators")
    if operators_opt is None or str(operators_opt) == "experiment20":
        codes = None
    elif isinstance(operators_opt, (list, tuple)):
        codes = [str(c) for c in operators_opt]
    else:
        codes = [c.strip() for c in str(operators_opt).split(",") if c.strip()]

    rates_opt = take("rates")
    if rates_opt is None:
        rates = None
    elif isinstance(rates_opt, (list, tuple)):
        rates = tuple(float(r) for r in rates_opt)
    else:
        rates = tuple(float(r) for r in str(rates_opt).split(",") if r.strip())

    alpha_opt = take("alpha", "mean")
    alpha = "mean" if str(alpha_opt).strip().lower() == "mean" else float(alpha_opt)

    controller = ControllerConfig(
        twin=int(take("twin", 50)),
        tprime_win=int(take("tprime_win", 50)),
        fwin=str(take("fwin", "mean")).lower(),
        fprime_win=str(take("fprime_win", "mean")).lower(),
        p_min=float(take("p_min", 0.05)),
        beta=float(take("beta", 0.8)),
        c=float(take("c", 1.0)),
        alpha=alpha,
        method=str(take("method", "pm")).lower(),
    )
    strategy = StrategyConfig(
        name=str(take("strategy", "fixed")).lower(),
        theta=parse_theta(take("theta", math.pi / 2)),
        epochs=int(take("epochs", 10)),
        entropy_threshold=float(take("entropy_threshold", 0.9)),
        stagnation_limit=int(take("stagnation_limit", 200)),
        stagnation_wins=_parse_bool(take("stagnation_wins", True)),
        invert=_parse_bool(take("invert", False)),
    )
    tabu = TabuConfig(
        mode=str(take("tabu", "off")).lower(),
        fraction=float(take("tabu_fraction", 0.1)),
        memetic_flip_budget=int(take("memetic_flip_budget", MEMETIC_FLIP_BUDGET)),
    )
    config = RunConfig(
        formula=formula,
        operator_codes=codes,
        population_size=int(take("population_size", 30)),
        max_iterations=int(take("max_iterations", 100_000)),
        seed=int(take("seed", 0)),
        selection=str(take("selection", "controller")).lower(),
        rates=rates,
        controller=controller,
        strategy=strategy,
        tabu=tabu,
        early_exit=_parse_bool(take("early_exit", True)),
        initial_population=take("initial_population"),
    )
    if opts:
        raise ValueError(f"unknown configuration keys: {sorted(opts)}")
    # Fail fast on values the run would otherwise only reject mid-flight.
    if strategy.name not in STRATEGY_NAMES:
        raise ValueError(
            f"unknown strategy {strategy.name!r}, expected one of {STRATEGY_NAMES}"
        )
    if config.selection not in SELECTION_MODES:
        raise ValueError(f"selection must be one of {SELECTION_MODES}")
    if tabu.mode not in TABU_MODES:
        raise ValueError(f"tabu mode must be one of {TABU_MODES}")
    if config.selection == "controller":
        controller.validate(len(codes) if codes is not None else 20)
    return config

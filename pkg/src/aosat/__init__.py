"""Adaptive operator selection for a steady-state evolutionary SAT solver.

The package splits along the natural seams of the algorithm: `cnf` holds
formulas and their evaluation, `population` the steady-state pool and its
criteria, `operators` the coded crossover family, `controller` the adaptive
selection pipeline, `strategies` the schedules for the reward angle, `tabu`
the local refinement, `engine` the run loop, `harness` batch experiments and
statistics, and `benchmarks` instance generators.
"""

from .cnf import (
    CnfFormula,
    CnfParseError,
    clause_satisfaction,
    clause_status_in_both,
    count_false_clauses,
    parse_dimacs,
    parse_dimacs_file,
    write_dimacs,
    write_dimacs_file,
)
from .population import CriterionSnapshot, Individual, Population, make_individual
from .operators import (
    EXPERIMENT_GROUPS,
    OperatorCodeError,
    OperatorSpec,
    decode,
    experiment_operator_set,
    flip_gain,
)
from .operators import apply as apply_operator
from .controller import (
    Controller,
    ControllerConfig,
    OperatorStats,
    SlidingWindow,
    compass_reward,
    mab_scores,
    pm_probabilities,
    select_mab,
    select_pm,
    select_wta,
    update_utility,
)
from .strategies import (
    AlwaysMovingStrategy,
    DecreaseStrategy,
    FixedStrategy,
    IncreaseStrategy,
    ReactiveMovingStrategy,
    SearchObservation,
    StrategyConfig,
    make_strategy,
)
from .tabu import (
    MEMETIC_FLIP_BUDGET,
    STANDALONE_FLIP_BUDGET,
    tabu_improve,
    tabu_length_for,
    tabu_standalone,
)
from .engine import (
    RunConfig,
    RunResult,
    TabuConfig,
    Trace,
    config_from_dict,
    load_config_file,
    load_formula,
    parse_theta,
    run_baseline_random,
    run_baseline_roulette,
    run_ea,
    run_memetic,
)
from .harness import (
    BatchReport,
    BatchSpec,
    CellResult,
    emit_figure_data,
    run_batch,
    wilcoxon_ranksum,
)
from .benchmarks import planted_coloring, random_ksat, stand_in_instance

__version__ = "0.1.0"

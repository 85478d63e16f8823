"""Show what tabu refinement buys: the memetic solver closes instances.

The plain adaptive run gets a 150-variable planted 3-coloring instance
down to a handful of false clauses; finishing the job is local-search
work.  In memetic mode every child is refined by a short tabu search
(recently flipped variables are frozen for a population-size-scaled
tenure, a flip budget caps the work, aspiration lets a tabu flip through
when it beats the best assignment seen).  The reward angle follows the
"reactivemoving" schedule, which flips to quality mode when population
entropy is high and back to diversity mode after long stagnation.

Tabu search also works standalone, without the evolutionary layer.

Run:  python demos/05_memetic_tabu.py
"""

import time

import numpy as np

from aosat import (
    ControllerConfig,
    RunConfig,
    StrategyConfig,
    TabuConfig,
    count_false_clauses,
    run_ea,
    run_memetic,
    stand_in_instance,
    tabu_standalone,
)

INSTANCES = ["flat50-293", "flat50-297", "flat50-298", "flat50-299",
             "flat50-3", "flat50-30"]


def config_for(formula, seed: int, memetic: bool) -> RunConfig:
    return RunConfig(
        formula=formula,
        population_size=30,
        max_iterations=20_000,
        seed=seed,
        early_exit=True,
        selection="controller",
        controller=ControllerConfig(p_min=0.01, method="pm", fwin="max"),
        strategy=StrategyConfig(name="reactivemoving"),
        tabu=TabuConfig(mode="memetic", memetic_flip_budget=100) if memetic
        else TabuConfig(mode="off"),
    )


def main() -> None:
    print("Adaptive run alone vs memetic (tabu-refined) run, one seed each:")
    print(f"  {'instance':<12} {'plain best':>10} {'memetic best':>12} "
          f"{'memetic iters':>13}")
    for name in INSTANCES:
        formula = stand_in_instance(name)
        plain = run_ea(config_for(formula, seed=0, memetic=False))
        memetic = run_memetic(config_for(formula, seed=0, memetic=True))
        print(f"  {name:<12} {plain.best_false_count:>10} "
              f"{memetic.best_false_count:>12} "
              f"{memetic.iterations_executed:>13}")
    print("Refined children start so close to local optima that the memetic")
    print("runs usually end within a few dozen iterations.")

    print("\nStandalone tabu search on flat50-3 from three random starts:")
    formula = stand_in_instance("flat50-3")
    for seed in range(3):
        rng = np.random.default_rng(seed)
        t0 = time.perf_counter()
        best = tabu_standalone(formula, rng, max_flips=20_000)
        elapsed = time.perf_counter() - t0
        check = count_false_clauses(formula, best.assignment)
        print(f"  seed {seed}: best false clauses = {best.false_count} "
              f"(recheck {check}) in {elapsed:.2f}s")


if __name__ == "__main__":
    main()

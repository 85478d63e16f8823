"""Tabu-driven local refinement of assignments.

Each step flips the variable with the most negative false-count delta among
the variables that are not tabu, breaking ties uniformly at random; a flipped
variable becomes tabu for `tabu_length` subsequent flips. A tabu variable may
still be flipped when doing so lands strictly below the best count seen
(aspiration). The best assignment encountered is returned.

The flip loop maintains the classic make/break bookkeeping: make[v] counts
false clauses containing v, break[v] counts clauses v critically satisfies.
The loop is compiled with numba when available; the same function body runs
under plain Python otherwise.
"""

from __future__ import annotations

import numpy as np

from .cnf import CnfFormula, _nontaut_true_counts
from .population import Individual, make_individual

__all__ = [
    "MEMETIC_FLIP_BUDGET",
    "STANDALONE_FLIP_BUDGET",
    "tabu_length_for",
    "tabu_improve",
    "tabu_standalone",
]

MEMETIC_FLIP_BUDGET = 100
STANDALONE_FLIP_BUDGET = 10_000_000

_SEED_CAP = 2**31 - 1


def tabu_length_for(formula: CnfFormula, fraction: float = 0.1) -> int:
    """Default tenure: the given fraction of the variable count, floored."""
    return int(formula.num_variables * fraction)


def _core(occ_off, occ_cls, occ_pos, cls_off, cls_vars,
          a, num_true, crit_sum, make, brk, tabu_until,
          false_count, best_a, best_count, tabu_len, max_flips, seed):
    """Flip loop over precomputed state; mutates a and best_a in place.

    Returns (best_count, flips_done). crit_sum[c] holds the variable-index
    sum of the true literals of clause c, so when num_true[c] == 1 it names
    the critical variable directly. A variable is tabu while the current flip
    index is below tabu_until[var]. If every variable is tabu and none
    aspires, the tabu list is ignored for that step.
    """
    np.random.seed(seed)
    n = a.shape[0]
    flips = 0
    for t in range(max_flips):
        if false_count == 0:
            break
        chosen = -1
        best_gain = 0
        ties = 0
        for ignore_tabu in range(2):
            for u in range(n):
                g = brk[u] - make[u]
                if ignore_tabu == 0:
                    ok = tabu_until[u] <= t or false_count + g < best_count
                else:
                    ok = True
                if not ok:
                    continue
                if chosen == -1 or g < best_gain:
                    chosen = u
                    best_gain = g
                    ties = 1
                elif g == best_gain:
                    ties += 1
                    if np.random.random() * ties < 1.0:
                        chosen = u
            if chosen != -1:
                break
        v = chosen
        av = a[v]
        for k in range(occ_off[v], occ_off[v + 1]):
            c = occ_cls[k]
            if (av == 1) == occ_pos[k]:
                # This literal of v goes false.
                nt = num_true[c]
                if nt == 1:
                    brk[v] -= 1
                    false_count += 1
                    for j in range(cls_off[c], cls_off[c + 1]):
                        make[cls_vars[j]] += 1
                elif nt == 2:
                    brk[crit_sum[c] - v] += 1
                num_true[c] = nt - 1
                crit_sum[c] -= v
            else:
                # This literal of v goes true.
                nt = num_true[c]
                if nt == 0:
                    false_count -= 1
                    brk[v] += 1
                    for j in range(cls_off[c], cls_off[c + 1]):
                        make[cls_vars[j]] -= 1
                elif nt == 1:
                    brk[crit_sum[c]] -= 1
                num_true[c] = nt + 1
                crit_sum[c] += v
        a[v] = 1 - av
        tabu_until[v] = t + 1 + tabu_len
        flips = t + 1
        if false_count < best_count:
            best_count = false_count
            best_a[:] = a
    return best_count, flips


try:  # pragma: no cover - exercised implicitly by every tabu test
    import numba

    _core_compiled = numba.njit(cache=True, nogil=True)(_core)
except Exception:  # pragma: no cover
    _core_compiled = _core


def _initial_state(formula: CnfFormula, assignment: np.ndarray):
    """Vectorized construction of the flip-loop state for an assignment."""
    n = formula.num_variables
    num_true = _nontaut_true_counts(formula, assignment).astype(np.int64)
    sat = (assignment[formula._flat_vars] != 0) == formula._flat_pos
    crit_sum = np.bincount(
        formula._flat_clause[sat],
        weights=formula._flat_vars[sat].astype(float),
        minlength=formula.num_nontaut,
    ).astype(np.int64)
    false_mask = num_true == 0
    false_count = int(np.count_nonzero(false_mask))
    elem_false = false_mask[formula._flat_clause]
    make = np.bincount(formula._flat_vars[elem_false], minlength=n).astype(np.int64)
    critical = num_true == 1
    brk = np.bincount(crit_sum[critical], minlength=n).astype(np.int64)
    return num_true, crit_sum, make, brk, false_count


def tabu_improve(individual: Individual, formula: CnfFormula, tabu_length: int,
                 max_flips: int, rng) -> Individual:
    """Refine one individual; returns the best individual encountered.

    With a zero flip budget (or an already satisfying input) the individual
    is returned untouched and the random stream is not consumed.
    """
    if max_flips <= 0 or individual.false_count == 0 or formula.num_variables == 0:
        return individual
    a = individual.assignment.astype(np.uint8).copy()
    num_true, crit_sum, make, brk, false_count = _initial_state(formula, a)
    if false_count != individual.false_count:
        raise ValueError("individual false_count disagrees with its assignment")
    best_a = a.copy()
    tabu_until = np.zeros(formula.num_variables, dtype=np.int64)
    seed = int(rng.integers(0, _SEED_CAP))
    best_count, _ = _core_compiled(
        formula._occ_offsets, formula._occ_clause, formula._occ_pos,
        formula._cls_offsets, formula._flat_vars,
        a, num_true, crit_sum, make, brk, tabu_until,
        false_count, best_a, individual.false_count,
        int(tabu_length), int(max_flips), seed,
    )
    return Individual(best_a, int(best_count), individual.birth_iteration)


def tabu_standalone(formula: CnfFormula, rng, tabu_length: int | None = None,
                    max_flips: int = STANDALONE_FLIP_BUDGET) -> Individual:
    """Run the refinement from a fresh uniform random assignment."""
    bits = rng.integers(0, 2, size=formula.num_variables, dtype=np.uint8)
    start = make_individual(formula, bits)
    if tabu_length is None:
        tabu_length = tabu_length_for(formula)
    return tabu_improve(start, formula, tabu_length, max_flips, rng)

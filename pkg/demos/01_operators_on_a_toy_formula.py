"""Walk through the coded crossover family on a three-variable formula.

Every crossover operator is named by a four-digit code f1 f2 f3 f4:

* f1 picks which clauses false under BOTH parents get attention
  (0 none, 1 all, 2 one at random, 3 smallest, 4 biggest, plus two
  special modes: 5 copies the better parent's bits into them, 6 flips
  the variables on which the parents agree),
* f2 is the action applied to each picked false clause (0 nothing,
  1 flip the variable whose flip helps both parents most, 2 same but
  skip clauses the draft already satisfies, 3 flip every variable,
  4 flip the variable whose literal is rarest elsewhere),
* f3/f4 do the same for clauses true under both parents, with actions
  aimed at protecting or spending that shared structure.

Codes starting with 7 are null operators: the child is simply the
population member about to be replaced, so the population is unchanged.

Run:  python demos/01_operators_on_a_toy_formula.py
"""

import numpy as np

from aosat import (
    apply_operator,
    clause_status_in_both,
    count_false_clauses,
    decode,
    flip_gain,
    make_individual,
    parse_dimacs,
)

TEXT = """\
p cnf 3 3
1 -2 -3 0
-1 2 0
-1 3 0
"""


def bits(array) -> str:
    return "".join(str(int(b)) for b in array)


def main() -> None:
    formula = parse_dimacs(TEXT)
    print("Formula (DIMACS):")
    print(TEXT)
    print(f"{formula.num_variables} variables, {formula.num_clauses} clauses")

    parent_a = make_individual(formula, np.array([1, 1, 0], dtype=np.uint8))
    parent_b = make_individual(formula, np.array([1, 0, 0], dtype=np.uint8))
    print(f"\nparent A = {bits(parent_a.assignment)}  "
          f"false clauses: {parent_a.false_count}")
    print(f"parent B = {bits(parent_b.assignment)}  "
          f"false clauses: {parent_b.false_count}")

    false_both, true_both = clause_status_in_both(
        formula, parent_a.assignment, parent_b.assignment
    )
    print(f"\nclauses false under both parents: {[int(c) for c in false_both]}")
    print(f"clauses true under both parents:  {[int(c) for c in true_both]}")

    print("\nFlip gains from parent A (negative = fewer false clauses):")
    for var in range(3):
        print(f"  flip x{var + 1}: {flip_gain(formula, parent_a.assignment, var):+d}")

    print("\nOperator 1111 = repair every shared-false clause by the single")
    print("flip that helps both parents most, and do the same on the shared-")
    print("true side. Variables untouched by either phase are copied when the")
    print("parents agree and coin-flipped when they differ:")
    seen = {}
    for seed in range(8):
        child = apply_operator(
            decode("1111"), parent_a, parent_b, formula=formula,
            rng=np.random.default_rng(seed),
        )
        seen.setdefault(bits(child.assignment), child.false_count)
    for assignment, false_count in sorted(seen.items()):
        print(f"  child {assignment}  false clauses: {false_count}")
    print("Both coin outcomes satisfy the formula: the repair flipped x1,")
    print("x3 was copied (the parents agree there), only x2 was left to luck.")

    oldest = make_individual(formula, np.array([0, 0, 1], dtype=np.uint8))
    null_child = apply_operator(
        decode("7004"), parent_a, parent_b, formula=formula,
        rng=np.random.default_rng(0), oldest=oldest,
    )
    print(f"\nNull operator 7004 ignores the parents and returns the member")
    print(f"slated for replacement: child = {bits(null_child.assignment)} "
          f"(the 'oldest' individual), population unchanged.")

    sanity = count_false_clauses(formula, np.array([0, 1, 0], dtype=np.uint8))
    print(f"\nsanity: count_false_clauses(010) = {sanity}")


if __name__ == "__main__":
    main()

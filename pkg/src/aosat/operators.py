"""Combinatorial crossover operators addressed by four-digit codes.

An operator code f1 f2 f3 f4 composes four features:

  f1 (0-6)  selection of clauses false in both parents
  f2 (0-4)  action applied to each selected false clause
  f3 (1-5)  selection of clauses true in both parents
  f4 (1-5)  action applied to each selected true clause

f1/f2 are 0-based, f3/f4 are 1-based; their "do nothing" levels are 0, 0, 1, 1
respectively. Codes whose first digit is 7 denote null operators, which return
a copy of the oldest population member and touch nothing else.

A child starts as a draft with every variable unassigned. Actions fix draft
variables; the first write to a variable wins and later writes are ignored.
Unassigned variables are completed from the parents: the common value where
they agree, a fair coin between the two values where they differ.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cnf import CnfFormula, _nontaut_true_counts
from .population import Individual

__all__ = [
    "OperatorCodeError",
    "OperatorSpec",
    "decode",
    "experiment_operator_set",
    "EXPERIMENT_GROUPS",
    "flip_gain",
    "apply",
]


class OperatorCodeError(ValueError):
    pass


@dataclass(frozen=True)
class OperatorSpec:
    code: str
    f1: int
    f2: int
    f3: int
    f4: int
    is_null: bool
    group: str | None = None


_F_RANGES = (range(0, 7), range(0, 5), range(1, 6), range(1, 6))


def decode(code: str) -> OperatorSpec:
    """Decode a four-digit operator code, validating each feature level."""
    code = str(code)
    if len(code) != 4 or not code.isdigit():
        raise OperatorCodeError(f"operator code {code!r} is not four decimal digits")
    digits = [int(ch) for ch in code]
    if digits[0] == 7:
        # Null family: trailing digits carried but not interpreted.
        return OperatorSpec(code, digits[0], digits[1], digits[2], digits[3], True)
    for value, valid, name in zip(digits, _F_RANGES, ("f1", "f2", "f3", "f4")):
        if value not in valid:
            raise OperatorCodeError(
                f"operator code {code!r}: {name}={value} outside {valid.start}..{valid.stop - 1}"
            )
    return OperatorSpec(code, digits[0], digits[1], digits[2], digits[3], False)


# The 20-operator portfolio used throughout the experiments, grouped by the
# qualitative effect of each operator on the search.
EXPERIMENT_GROUPS = {
    "exploration": ("0011", "0035", "0015", "4455", "6011"),
    "exploitation": (
        "1111", "1122", "5011", "3332", "1134",
        "0022", "2352", "4454", "1224", "0013",
    ),
    "neutral": ("2455", "4335", "1125", "5035", "1335"),
}


def experiment_operator_set() -> list[OperatorSpec]:
    """The 20 crossover operators of the standard portfolio, tagged by group."""
    specs = []
    for group, codes in EXPERIMENT_GROUPS.items():
        for code in codes:
            base = decode(code)
            specs.append(OperatorSpec(base.code, base.f1, base.f2, base.f3, base.f4, False, group))
    return specs


def _flip_gains(formula: CnfFormula, assignment: np.ndarray, variables) -> np.ndarray:
    """False-count deltas for flipping each variable, one at a time."""
    counts = _nontaut_true_counts(formula, assignment)
    off = formula._occ_offsets
    gains = np.zeros(len(variables), dtype=np.int64)
    abool = assignment != 0
    for i, v in enumerate(variables):
        lo, hi = off[v], off[v + 1]
        if lo == hi:
            continue
        rows = formula._occ_clause[lo:hi]
        lit_true = abool[v] == formula._occ_pos[lo:hi]
        breaks = np.count_nonzero(lit_true & (counts[rows] == 1))
        makes = np.count_nonzero(~lit_true & (counts[rows] == 0))
        gains[i] = breaks - makes
    return gains


def flip_gain(formula: CnfFormula, assignment, variable: int) -> int:
    """Exact change in false-clause count if `variable` (0-based) is flipped."""
    a = np.asarray(assignment, dtype=np.uint8)
    return int(_flip_gains(formula, a, [int(variable)])[0])


def _child_core(f1, f2, f3, f4, pa, pb, better_is_a,
                all_off, all_var, all_want, clause_len,
                nt_off, nt_var, nt_pos, occ_off, occ_cls, occ_pos,
                pos_occ, neg_occ, seed):
    """Sequential child construction; the whole operator in one pass.

    Compiled with numba when available; the same body runs under plain
    Python otherwise. All tie-breaking draws come from np.random seeded here,
    so one integer seed fully determines the child.

    Clause-selection levels map to: none / all / one uniform / smallest /
    biggest (by clause length), at levels 0-4 for f1 and 1-5 for f3. Ties in
    every argmin/argmax are broken uniformly at random. Actions on a clause
    false in both parents flip variables away from the shared falsifying
    value; actions on a clause true in both force literals to their
    satisfying value (or its complement for the all-false action f4=5).
    First write to a draft variable wins.
    """
    np.random.seed(seed)
    n = pa.shape[0]
    c = all_off.shape[0] - 1
    m = nt_off.shape[0] - 1

    # Per-clause satisfaction under each parent.
    sat_a = np.zeros(c, dtype=np.uint8)
    sat_b = np.zeros(c, dtype=np.uint8)
    for i in range(c):
        for j in range(all_off[i], all_off[i + 1]):
            v = all_var[j]
            w = all_want[j]
            if pa[v] == w:
                sat_a[i] = 1
            if pb[v] == w:
                sat_b[i] = 1

    fb = np.empty(c, dtype=np.int64)
    tb = np.empty(c, dtype=np.int64)
    nfb = 0
    ntb = 0
    for i in range(c):
        if sat_a[i] == 0 and sat_b[i] == 0:
            fb[nfb] = i
            nfb += 1
        elif sat_a[i] == 1 and sat_b[i] == 1:
            tb[ntb] = i
            ntb += 1

    # Flip gains (false-count delta of flipping each variable) per parent,
    # needed only by the gain-guided actions.
    gains_a = np.zeros(n, dtype=np.int64)
    gains_b = np.zeros(n, dtype=np.int64)
    if f2 == 1 or f2 == 2 or f4 == 2:
        cnt_a = np.zeros(m, dtype=np.int64)
        cnt_b = np.zeros(m, dtype=np.int64)
        for i in range(m):
            for j in range(nt_off[i], nt_off[i + 1]):
                v = nt_var[j]
                if (pa[v] != 0) == nt_pos[j]:
                    cnt_a[i] += 1
                if (pb[v] != 0) == nt_pos[j]:
                    cnt_b[i] += 1
        for v in range(n):
            ga = 0
            gb = 0
            for k in range(occ_off[v], occ_off[v + 1]):
                cc = occ_cls[k]
                if (pa[v] != 0) == occ_pos[k]:
                    if cnt_a[cc] == 1:
                        ga += 1
                elif cnt_a[cc] == 0:
                    ga -= 1
                if (pb[v] != 0) == occ_pos[k]:
                    if cnt_b[cc] == 1:
                        gb += 1
                elif cnt_b[cc] == 0:
                    gb -= 1
            gains_a[v] = ga
            gains_b[v] = gb

    draft = np.full(n, -1, dtype=np.int8)

    # False-clause phase. Levels 5 and 6 write a pattern across every clause
    # false in both parents and then expose that whole set to the f2 action;
    # levels 0-4 are pure subselection.
    sel = fb
    nsel = 0
    if f1 == 5:
        for idx in range(nfb):
            i = fb[idx]
            for j in range(all_off[i], all_off[i + 1]):
                v = all_var[j]
                if draft[v] < 0:
                    draft[v] = pa[v] if better_is_a else pb[v]
        nsel = nfb
    elif f1 == 6:
        for idx in range(nfb):
            i = fb[idx]
            for j in range(all_off[i], all_off[i + 1]):
                v = all_var[j]
                if pa[v] == pb[v] and draft[v] < 0:
                    draft[v] = 1 - pa[v]
        nsel = nfb
    elif f1 == 1:
        nsel = nfb
    elif f1 >= 2 and nfb > 0:
        if f1 == 2:
            pick = fb[np.random.randint(0, nfb)] if nfb > 1 else fb[0]
        else:
            best_len = clause_len[fb[0]]
            for idx in range(1, nfb):
                length = clause_len[fb[idx]]
                if (f1 == 3 and length < best_len) or (f1 == 4 and length > best_len):
                    best_len = length
            ties = 0
            for idx in range(nfb):
                if clause_len[fb[idx]] == best_len:
                    ties += 1
            target = np.random.randint(0, ties) if ties > 1 else 0
            pick = fb[0]
            seen = 0
            for idx in range(nfb):
                if clause_len[fb[idx]] == best_len:
                    if seen == target:
                        pick = fb[idx]
                        break
                    seen += 1
        sel = np.empty(1, dtype=np.int64)
        sel[0] = pick
        nsel = 1

    if f2 != 0:
        for s in range(nsel):
            i = sel[s]
            lo = all_off[i]
            hi = all_off[i + 1]
            if f2 == 1 or f2 == 2:
                if f2 == 2:
                    # Skip clauses the draft already satisfies.
                    true_in_draft = False
                    for j in range(lo, hi):
                        if draft[all_var[j]] == all_want[j]:
                            true_in_draft = True
                            break
                    if true_in_draft:
                        continue
                # Flip the variable of cheapest combined flip gain.
                best = gains_a[all_var[lo]] + gains_b[all_var[lo]]
                for j in range(lo + 1, hi):
                    score = gains_a[all_var[j]] + gains_b[all_var[j]]
                    if score < best:
                        best = score
                ties = 0
                for j in range(lo, hi):
                    if gains_a[all_var[j]] + gains_b[all_var[j]] == best:
                        ties += 1
                target = np.random.randint(0, ties) if ties > 1 else 0
                seen = 0
                for j in range(lo, hi):
                    if gains_a[all_var[j]] + gains_b[all_var[j]] == best:
                        if seen == target:
                            v = all_var[j]
                            if draft[v] < 0:
                                draft[v] = 1 - pa[v]
                            break
                        seen += 1
            elif f2 == 3:
                for j in range(lo, hi):
                    v = all_var[j]
                    if draft[v] < 0:
                        draft[v] = 1 - pa[v]
            elif f2 == 4:
                # Flip the literal occurring least often in the rest of the
                # formula.
                best = np.int64(0)
                for j in range(lo, hi):
                    v = all_var[j]
                    count = (pos_occ[v] if all_want[j] == 1 else neg_occ[v]) - 1
                    if j == lo or count < best:
                        best = count
                ties = 0
                for j in range(lo, hi):
                    v = all_var[j]
                    if (pos_occ[v] if all_want[j] == 1 else neg_occ[v]) - 1 == best:
                        ties += 1
                target = np.random.randint(0, ties) if ties > 1 else 0
                seen = 0
                for j in range(lo, hi):
                    v = all_var[j]
                    if (pos_occ[v] if all_want[j] == 1 else neg_occ[v]) - 1 == best:
                        if seen == target:
                            if draft[v] < 0:
                                draft[v] = 1 - pa[v]
                            break
                        seen += 1

    # True-clause phase.
    nsel = 0
    sel = tb
    if f3 == 2:
        nsel = ntb
    elif f3 >= 3 and ntb > 0:
        if f3 == 3:
            pick = tb[np.random.randint(0, ntb)] if ntb > 1 else tb[0]
        else:
            best_len = clause_len[tb[0]]
            for idx in range(1, ntb):
                length = clause_len[tb[idx]]
                if (f3 == 4 and length < best_len) or (f3 == 5 and length > best_len):
                    best_len = length
            ties = 0
            for idx in range(ntb):
                if clause_len[tb[idx]] == best_len:
                    ties += 1
            target = np.random.randint(0, ties) if ties > 1 else 0
            pick = tb[0]
            seen = 0
            for idx in range(ntb):
                if clause_len[tb[idx]] == best_len:
                    if seen == target:
                        pick = tb[idx]
                        break
                    seen += 1
        sel = np.empty(1, dtype=np.int64)
        sel[0] = pick
        nsel = 1

    if f4 != 1:
        for s in range(nsel):
            i = sel[s]
            lo = all_off[i]
            hi = all_off[i + 1]
            if f4 == 2:
                # Satisfy the literal whose adoption costs the parents least,
                # measured as the summed false-count change of forcing it in
                # each parent that does not already satisfy it.
                best = np.int64(0)
                for j in range(lo, hi):
                    v = all_var[j]
                    w = all_want[j]
                    cost = np.int64(0)
                    if pa[v] != w:
                        cost += gains_a[v]
                    if pb[v] != w:
                        cost += gains_b[v]
                    if j == lo or cost < best:
                        best = cost
                ties = 0
                for j in range(lo, hi):
                    v = all_var[j]
                    w = all_want[j]
                    cost = np.int64(0)
                    if pa[v] != w:
                        cost += gains_a[v]
                    if pb[v] != w:
                        cost += gains_b[v]
                    if cost == best:
                        ties += 1
                target = np.random.randint(0, ties) if ties > 1 else 0
                seen = 0
                for j in range(lo, hi):
                    v = all_var[j]
                    w = all_want[j]
                    cost = np.int64(0)
                    if pa[v] != w:
                        cost += gains_a[v]
                    if pb[v] != w:
                        cost += gains_b[v]
                    if cost == best:
                        if seen == target:
                            if draft[v] < 0:
                                draft[v] = w
                            break
                        seen += 1
            elif f4 == 3:
                for j in range(lo, hi):
                    v = all_var[j]
                    if draft[v] < 0:
                        draft[v] = all_want[j]
            elif f4 == 4:
                # Satisfy the literal whose negation occurs least often
                # elsewhere; occurrences inside this clause do not count.
                best = np.int64(0)
                for j in range(lo, hi):
                    v = all_var[j]
                    count = neg_occ[v] if all_want[j] == 1 else pos_occ[v]
                    for j2 in range(lo, hi):
                        if all_var[j2] == v and all_want[j2] != all_want[j]:
                            count -= 1
                    if j == lo or count < best:
                        best = count
                ties = 0
                for j in range(lo, hi):
                    v = all_var[j]
                    count = neg_occ[v] if all_want[j] == 1 else pos_occ[v]
                    for j2 in range(lo, hi):
                        if all_var[j2] == v and all_want[j2] != all_want[j]:
                            count -= 1
                    if count == best:
                        ties += 1
                target = np.random.randint(0, ties) if ties > 1 else 0
                seen = 0
                for j in range(lo, hi):
                    v = all_var[j]
                    count = neg_occ[v] if all_want[j] == 1 else pos_occ[v]
                    for j2 in range(lo, hi):
                        if all_var[j2] == v and all_want[j2] != all_want[j]:
                            count -= 1
                    if count == best:
                        if seen == target:
                            if draft[v] < 0:
                                draft[v] = all_want[j]
                            break
                        seen += 1
            elif f4 == 5:
                for j in range(lo, hi):
                    v = all_var[j]
                    if draft[v] < 0:
                        draft[v] = 1 - all_want[j]

    # Completion: fixed draft values win, parents fill agreement, a fair coin
    # settles each disagreement.
    child = np.empty(n, dtype=np.uint8)
    for v in range(n):
        if draft[v] >= 0:
            child[v] = draft[v]
        elif pa[v] == pb[v]:
            child[v] = pa[v]
        elif np.random.randint(0, 2) == 0:
            child[v] = pa[v]
        else:
            child[v] = pb[v]

    false_count = 0
    for i in range(m):
        satisfied = False
        for j in range(nt_off[i], nt_off[i + 1]):
            if (child[nt_var[j]] != 0) == nt_pos[j]:
                satisfied = True
                break
        if not satisfied:
            false_count += 1
    return child, false_count


try:  # pragma: no cover - exercised implicitly by every operator test
    import numba

    _child_core_compiled = numba.njit(cache=True, nogil=True)(_child_core)
except Exception:  # pragma: no cover
    _child_core_compiled = _child_core

_SEED_CAP = 2**31 - 1


def apply(spec: OperatorSpec, parent_a: Individual, parent_b: Individual, *,
          formula: CnfFormula, rng, oldest: Individual | None = None) -> Individual:
    """Produce a child from two parents under the given operator.

    Null operators return a copy of `oldest`. The returned individual carries
    a correct false count; its birth iteration is set at insertion time.
    """
    if spec.is_null:
        if oldest is None:
            raise ValueError("null operators need the oldest individual")
        return Individual(oldest.assignment.copy(), oldest.false_count, oldest.birth_iteration)

    seed = int(rng.integers(0, _SEED_CAP))
    child, false_count = _child_core_compiled(
        spec.f1, spec.f2, spec.f3, spec.f4,
        parent_a.assignment, parent_b.assignment,
        parent_a.false_count <= parent_b.false_count,
        formula._all_offsets, formula._all_var, formula._all_want,
        formula.clause_lengths,
        formula._cls_offsets, formula._flat_vars, formula._flat_pos,
        formula._occ_offsets, formula._occ_clause, formula._occ_pos,
        formula.pos_occurrences, formula.neg_occurrences, seed,
    )
    return Individual(child, int(false_count), 0)

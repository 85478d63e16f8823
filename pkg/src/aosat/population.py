"""Steady-state population: quality and diversity measures, selection, insertion."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .cnf import CnfFormula, count_false_clauses

__all__ = ["Individual", "CriterionSnapshot", "Population", "make_individual"]

_LN2 = float(np.log(2.0))


@dataclass
class Individual:
    """One candidate assignment with its cached false-clause count."""

    assignment: np.ndarray  # uint8, one cell per variable
    false_count: int
    birth_iteration: int = 0

    def copy(self) -> "Individual":
        return Individual(self.assignment.copy(), self.false_count, self.birth_iteration)


def make_individual(formula: CnfFormula, assignment, birth_iteration: int = 0) -> Individual:
    a = np.asarray(assignment, dtype=np.uint8)
    return Individual(a, count_false_clauses(formula, a), birth_iteration)


@dataclass(frozen=True)
class CriterionSnapshot:
    mean_quality: float
    diversity: float


class Population:
    """Fixed-size population with replace-oldest insertion.

    Per-variable one-counts and the false-count sum are maintained
    incrementally in integers, so the derived entropy and mean quality are
    exact functions of the current membership.
    """

    def __init__(self, formula: CnfFormula, members):
        self.formula = formula
        self.members = list(members)
        if not self.members:
            raise ValueError("population must not be empty")
        n = formula.num_variables
        for m in self.members:
            if m.assignment.shape != (n,):
                raise ValueError("member assignment length does not match formula")
        self._ones = np.zeros(n, dtype=np.int64)
        for m in self.members:
            self._ones += m.assignment
        self._false_sum = sum(m.false_count for m in self.members)

    @classmethod
    def random(cls, formula: CnfFormula, size: int, rng, birth_iteration: int = 0):
        """Uniform random population of `size` assignments."""
        bits = rng.integers(0, 2, size=(size, formula.num_variables), dtype=np.uint8)
        members = [make_individual(formula, bits[i], birth_iteration) for i in range(size)]
        return cls(formula, members)

    @classmethod
    def from_file(cls, path, formula: CnfFormula, birth_iteration: int = 0):
        """Load a population from a text file, one 0/1 row per member."""
        members = []
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                row = raw.strip()
                if not row:
                    continue
                if len(row) != formula.num_variables or set(row) - {"0", "1"}:
                    raise ValueError(
                        f"{path}: line {lineno} is not a row of {formula.num_variables} 0/1 characters"
                    )
                bits = np.frombuffer(row.encode("ascii"), dtype=np.uint8) - ord("0")
                members.append(make_individual(formula, bits, birth_iteration))
        if not members:
            raise ValueError(f"{path}: no assignment rows found")
        return cls(formula, members)

    def to_file(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            for m in self.members:
                fh.write("".join("1" if b else "0" for b in m.assignment) + "\n")

    def __len__(self) -> int:
        return len(self.members)

    def entropy(self) -> float:
        """Normalized mean per-variable Shannon entropy, in [0, 1]."""
        n = self.formula.num_variables
        if n == 0:
            return 0.0
        p = self._ones / len(self.members)
        h = -(xlogy(p, p) + xlogy(1.0 - p, 1.0 - p)) / _LN2
        return float(np.mean(h))

    def mean_quality(self) -> float:
        """Mean false-clause count over members (lower is better)."""
        return self._false_sum / len(self.members)

    def snapshot(self) -> CriterionSnapshot:
        return CriterionSnapshot(self.mean_quality(), self.entropy())

    def best(self) -> Individual:
        return min(self.members, key=lambda m: m.false_count)

    def oldest_index(self) -> int:
        """Index of the member with minimum birth iteration, first on ties."""
        best_idx = 0
        for i, m in enumerate(self.members):
            if m.birth_iteration < self.members[best_idx].birth_iteration:
                best_idx = i
        return best_idx

    def tournament_select_pair(self, rng):
        """Two parents from two independent binary tournaments.

        Each tournament draws two members uniformly with replacement and keeps
        the one with the lower false count, preferring the first drawn on ties.
        The same member may win both tournaments.
        """
        if len(self.members) < 2:
            raise ValueError("tournament selection needs a population of at least 2")
        idx = rng.integers(0, len(self.members), size=4)
        first = self._tournament(idx[0], idx[1])
        second = self._tournament(idx[2], idx[3])
        return first, second

    def _tournament(self, i, j) -> Individual:
        a, b = self.members[i], self.members[j]
        return a if a.false_count <= b.false_count else b

    def insert_replace_oldest(self, child: Individual, current_iteration: int) -> Individual:
        """Replace the oldest member with `child`; returns the removed member."""
        idx = self.oldest_index()
        removed = self.members[idx]
        child.birth_iteration = current_iteration
        self.members[idx] = child
        self._ones += child.assignment.astype(np.int64) - removed.assignment.astype(np.int64)
        self._false_sum += child.false_count - removed.false_count
        return removed

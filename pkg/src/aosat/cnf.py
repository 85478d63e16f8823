"""CNF formulas in DIMACS form, plus the array machinery used to evaluate them.

Literals follow the DIMACS convention throughout the public surface: a literal
is a signed integer whose absolute value is the 1-based variable index and
whose sign marks negation. Assignments are numpy uint8 vectors indexed by
0-based variable, value 1 meaning true.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "CnfParseError",
    "CnfFormula",
    "parse_dimacs",
    "parse_dimacs_file",
    "write_dimacs",
    "write_dimacs_file",
    "count_false_clauses",
    "clause_satisfaction",
    "clause_status_in_both",
]


class CnfParseError(ValueError):
    """Raised for malformed DIMACS input; messages name the offending line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CnfFormula:
    """A CNF formula with evaluation arrays precomputed at construction.

    Clauses are tuples of signed DIMACS literals. Duplicate literals inside a
    clause are collapsed (first occurrence kept); clauses containing a literal
    and its negation are tautological and are kept, evaluating to true under
    every assignment.
    """

    def __init__(self, num_variables: int, clauses):
        if num_variables < 0:
            raise ValueError("num_variables must be >= 0")
        self.num_variables = int(num_variables)
        cleaned = []
        for clause in clauses:
            seen = []
            for lit in clause:
                lit = int(lit)
                if lit == 0:
                    raise ValueError("literal 0 is not allowed inside a clause")
                if abs(lit) > self.num_variables:
                    raise ValueError(
                        f"literal {lit} out of range for {self.num_variables} variables"
                    )
                if lit not in seen:
                    seen.append(lit)
            if not seen:
                raise ValueError("empty clause")
            cleaned.append(tuple(seen))
        self.clauses = cleaned
        self._build_arrays()

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def _build_arrays(self):
        n = self.num_variables
        lengths = np.array([len(c) for c in self.clauses], dtype=np.int64)
        self.clause_lengths = lengths

        # Signed occurrence counts over all clauses, tautologies included.
        pos = np.zeros(n, dtype=np.int64)
        neg = np.zeros(n, dtype=np.int64)
        for clause in self.clauses:
            for lit in clause:
                if lit > 0:
                    pos[lit - 1] += 1
                else:
                    neg[-lit - 1] += 1
        self.pos_occurrences = pos
        self.neg_occurrences = neg

        # Padded literal matrix over all clauses, for per-clause satisfaction.
        width = int(lengths.max()) if len(self.clauses) else 1
        c = len(self.clauses)
        self._pad_vars = np.zeros((c, width), dtype=np.int64)
        self._pad_pos = np.zeros((c, width), dtype=bool)
        self._pad_mask = np.zeros((c, width), dtype=bool)
        for i, clause in enumerate(self.clauses):
            for j, lit in enumerate(clause):
                self._pad_vars[i, j] = abs(lit) - 1
                self._pad_pos[i, j] = lit > 0
                self._pad_mask[i, j] = True

        # Flat CSR layout over all clauses, in clause order, for code that
        # walks clauses literal by literal. `want` is the assignment value
        # that satisfies the literal.
        all_off = [0]
        all_var, all_want = [], []
        for clause in self.clauses:
            for lit in clause:
                all_var.append(abs(lit) - 1)
                all_want.append(1 if lit > 0 else 0)
            all_off.append(len(all_var))
        self._all_offsets = np.array(all_off, dtype=np.int64)
        self._all_var = np.array(all_var, dtype=np.int64)
        self._all_want = np.array(all_want, dtype=np.uint8)

        # Flat CSR layout over non-tautological clauses only. Tautologies are
        # true under every assignment, so excluding them keeps false-clause
        # counting and make/break flip bookkeeping exact.
        taut = np.zeros(c, dtype=bool)
        for i, clause in enumerate(self.clauses):
            lits = set(clause)
            taut[i] = any(-lit in lits for lit in clause)
        keep = [i for i in range(c) if not taut[i]]
        self.num_nontaut = len(keep)

        flat_vars, flat_pos, flat_clause = [], [], []
        offsets = [0]
        for row, i in enumerate(keep):
            for lit in self.clauses[i]:
                flat_vars.append(abs(lit) - 1)
                flat_pos.append(lit > 0)
                flat_clause.append(row)
            offsets.append(len(flat_vars))
        self._flat_vars = np.array(flat_vars, dtype=np.int64)
        self._flat_pos = np.array(flat_pos, dtype=bool)
        self._flat_clause = np.array(flat_clause, dtype=np.int64)
        self._cls_offsets = np.array(offsets, dtype=np.int64)

        # CSR from variable to its occurrences in non-tautological clauses.
        order = np.argsort(self._flat_vars, kind="stable")
        self._occ_clause = self._flat_clause[order]
        self._occ_pos = self._flat_pos[order]
        counts = np.bincount(self._flat_vars, minlength=n)
        self._occ_offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=self._occ_offsets[1:])

    def occurrence_count(self, lit: int) -> int:
        """Number of clauses containing the signed literal `lit`."""
        if lit > 0:
            return int(self.pos_occurrences[lit - 1])
        return int(self.neg_occurrences[-lit - 1])

    def __repr__(self):
        return f"CnfFormula(num_variables={self.num_variables}, num_clauses={self.num_clauses})"


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF text into a CnfFormula.

    Comment lines start with 'c'; clauses are zero-terminated and may span
    lines. A line consisting of a single '%' ends the clause section (some
    benchmark archives append '%' and a stray '0' after the last clause).
    """
    num_vars = None
    declared = None
    clauses = []
    current = []
    header_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line == "%":
            break
        if line.startswith("p"):
            if num_vars is not None:
                raise CnfParseError(lineno, "duplicate problem header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfParseError(lineno, f"malformed header {line!r}, expected 'p cnf <vars> <clauses>'")
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise CnfParseError(lineno, f"non-integer counts in header {line!r}") from None
            if num_vars < 0 or declared < 0:
                raise CnfParseError(lineno, "negative counts in header")
            header_line = lineno
            continue
        if num_vars is None:
            raise CnfParseError(lineno, "clause data before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise CnfParseError(lineno, f"unexpected token {tok!r}") from None
            if lit == 0:
                if not current:
                    raise CnfParseError(lineno, "empty clause")
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > num_vars:
                    raise CnfParseError(
                        lineno, f"literal {lit} out of range, header declares {num_vars} variables"
                    )
                current.append(lit)
    if num_vars is None:
        raise CnfParseError(1, "missing 'p cnf' header")
    if current:
        raise CnfParseError(lineno, "unterminated clause at end of input")
    if len(clauses) != declared:
        raise CnfParseError(
            header_line, f"header declares {declared} clauses but {len(clauses)} were read"
        )
    return CnfFormula(num_vars, clauses)


def parse_dimacs_file(path) -> CnfFormula:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_dimacs(fh.read())


def write_dimacs(formula: CnfFormula, comments=()) -> str:
    """Render a formula back to DIMACS text."""
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {formula.num_variables} {formula.num_clauses}")
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def write_dimacs_file(formula: CnfFormula, path, comments=()):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_dimacs(formula, comments))


def _as_assignment(formula: CnfFormula, assignment) -> np.ndarray:
    a = np.asarray(assignment, dtype=np.uint8)
    if a.shape != (formula.num_variables,):
        raise ValueError(
            f"assignment has shape {a.shape}, expected ({formula.num_variables},)"
        )
    return a


def _nontaut_true_counts(formula: CnfFormula, assignment: np.ndarray) -> np.ndarray:
    """Per-clause count of satisfied literals, over non-tautological clauses."""
    sat = (assignment[formula._flat_vars] != 0) == formula._flat_pos
    return np.bincount(formula._flat_clause[sat], minlength=formula.num_nontaut)


def count_false_clauses(formula: CnfFormula, assignment) -> int:
    """Number of clauses the assignment leaves unsatisfied."""
    a = _as_assignment(formula, assignment)
    if formula.num_nontaut == 0:
        return 0
    counts = _nontaut_true_counts(formula, a)
    return int(np.count_nonzero(counts == 0))


def clause_satisfaction(formula: CnfFormula, assignment) -> np.ndarray:
    """Boolean satisfaction vector over all clauses, in clause order."""
    a = _as_assignment(formula, assignment)
    if formula.num_clauses == 0:
        return np.zeros(0, dtype=bool)
    sat = ((a[formula._pad_vars] != 0) == formula._pad_pos) & formula._pad_mask
    return sat.any(axis=1)


def clause_status_in_both(formula: CnfFormula, assignment_a, assignment_b):
    """Indices of clauses false in both assignments and true in both.

    Returns (false_in_both, true_in_both) as ascending index arrays.
    """
    sat_a = clause_satisfaction(formula, assignment_a)
    sat_b = clause_satisfaction(formula, assignment_b)
    false_both = np.flatnonzero(~sat_a & ~sat_b)
    true_both = np.flatnonzero(sat_a & sat_b)
    return false_both, true_both

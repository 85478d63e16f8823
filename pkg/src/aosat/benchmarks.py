"""Generators for benchmark-shaped SAT instances.

The experiment literature runs on externally distributed DIMACS files (SATLIB
uniform k-SAT and flat graph-coloring sets, SAT-competition structured
instances). Those archives are not bundled here; this module generates
instances with matching dimensions and clause structure so the test suite and
the demos are self-contained. Planted instances are satisfiable by
construction.
"""

from __future__ import annotations

import numpy as np

from .cnf import CnfFormula

__all__ = [
    "random_ksat",
    "planted_coloring",
    "stand_in_instance",
]


def _rng_of(seed_or_rng):
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def random_ksat(num_variables: int, num_clauses: int, k: int = 3, seed=0) -> CnfFormula:
    """Uniform random k-SAT: each clause draws k distinct variables and signs."""
    if k > num_variables:
        raise ValueError("k cannot exceed the number of variables")
    rng = _rng_of(seed)
    clauses = []
    for _ in range(num_clauses):
        variables = rng.choice(num_variables, size=k, replace=False) + 1
        signs = rng.integers(0, 2, size=k)
        clauses.append(tuple(int(v) if s else -int(v) for v, s in zip(variables, signs)))
    return CnfFormula(num_variables, clauses)


def planted_coloring(vertices: int = 50, edges: int = 115, colors: int = 3,
                     seed=0) -> CnfFormula:
    """Graph k-coloring CNF over a random graph that is colorable by design.

    Vertices are partitioned into `colors` near-equal classes and edges are
    placed only between classes, so the partition itself is a valid coloring.
    Edge placement makes the instance hard rather than merely satisfiable:
    first every vertex is wired to roughly two neighbors in each other class
    (locally pinning its color), then the remaining edges go to the
    cross-class pairs of lowest current degree, flattening the degree
    distribution so no vertex is easy. Uniformly sampled edges instead leave
    slack that search exploits, producing much easier instances.

    The encoding uses one variable per (vertex, color): per vertex one
    at-least-one-color clause and pairwise at-most-one clauses, plus one
    conflict clause per edge and color. The default dimensions give 150
    variables and 545 clauses.
    """
    rng = _rng_of(seed)
    color_of = np.array([v % colors for v in range(vertices)])
    color_of = rng.permutation(color_of)
    classes = [np.flatnonzero(color_of == c) for c in range(colors)]
    max_edges = sum(
        len(classes[i]) * len(classes[j])
        for i in range(colors)
        for j in range(i + 1, colors)
    )
    if edges > max_edges:
        raise ValueError(f"cannot place {edges} cross-class edges, only {max_edges} available")

    chosen: set[tuple[int, int]] = set()

    def add(u: int, v: int):
        chosen.add((min(u, v), max(u, v)))

    # Rigidity rounds: per class pair, each left-class vertex picks one
    # right-class neighbor per round, with the right side rotated so its
    # degrees stay balanced too.
    for ci in range(colors):
        for cj in range(ci + 1, colors):
            left, right = classes[ci], classes[cj]
            for round_index in range(2):
                for k, xi in enumerate(rng.permutation(len(left))):
                    if len(chosen) >= edges:
                        break
                    add(int(left[xi]), int(right[(k + 7 * round_index) % len(right)]))

    # Top up to the requested count with the flattest available pairs.
    degree = np.zeros(vertices, dtype=np.int64)
    for u, v in chosen:
        degree[u] += 1
        degree[v] += 1
    cross = [
        (u, v)
        for u in range(vertices)
        for v in range(u + 1, vertices)
        if color_of[u] != color_of[v] and (u, v) not in chosen
    ]
    while len(chosen) < edges:
        lowest = None
        pool = []
        for u, v in cross:
            if (u, v) in chosen:
                continue
            load = degree[u] + degree[v]
            if lowest is None or load < lowest:
                lowest = load
                pool = [(u, v)]
            elif load == lowest:
                pool.append((u, v))
        u, v = pool[rng.integers(len(pool))]
        add(u, v)
        degree[u] += 1
        degree[v] += 1

    def var(vertex: int, color: int) -> int:
        return vertex * colors + color + 1

    clauses = []
    for v in range(vertices):
        clauses.append(tuple(var(v, c) for c in range(colors)))
        for c1 in range(colors):
            for c2 in range(c1 + 1, colors):
                clauses.append((-var(v, c1), -var(v, c2)))
    for u, v in sorted(chosen):
        for c in range(colors):
            clauses.append((-var(u, c), -var(v, c)))
    return CnfFormula(vertices * colors, clauses)


def stand_in_instance(name: str) -> CnfFormula:
    """Deterministic stand-in for a named benchmark instance.

    Names of the form "flat50-<id>" map to planted 3-coloring instances of
    the same dimensions (150 variables, 545 clauses), seeded by the id so
    each name is a distinct, reproducible instance.
    """
    tag = name.strip().lower()
    if tag.startswith("flat50-"):
        suffix = tag.split("-", 1)[1]
        if not suffix.isdigit():
            raise ValueError(f"cannot derive a seed from instance name {name!r}")
        return planted_coloring(vertices=50, edges=115, colors=3, seed=int(suffix))
    raise ValueError(f"no stand-in recipe for instance name {name!r}")

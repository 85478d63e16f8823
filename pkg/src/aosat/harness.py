"""Batch experiments, rank-sum statistics, and figure-data extraction.

A batch crosses instances with named configurations and repeats each cell
over `runs` seeds (base_seed + run index). Within one run index every
configuration sees the same seed, hence the same initial population, which
keeps configurations comparable run by run. Reports carry the per-run best
false counts, summary statistics, and pairwise rank-sum p-values.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import combinations
from math import comb, sqrt
from pathlib import Path

import numpy as np
from scipy.stats import norm, rankdata

from .engine import RunConfig, Trace, config_from_dict, run_ea
from .cnf import parse_dimacs_file

__all__ = [
    "BatchSpec",
    "CellResult",
    "BatchReport",
    "run_batch",
    "wilcoxon_ranksum",
    "emit_figure_data",
    "FIGURE_KINDS",
]

EXACT_LIMIT = 20  # combined sample size up to which the exact test is used


# -- rank-sum test -------------------------------------------------------------

def _exact_ranksum_p(ranks: np.ndarray, n1: int) -> float:
    """Two-sided exact p for the rank-sum of the first sample.

    Works on midranks doubled to integers; counts size-n1 subsets of the
    pooled ranks whose sum deviates from the mean at least as much as the
    observed one, via a subset-sum dynamic program. Ties need no special
    casing because the enumeration runs over the tied midranks themselves.
    """
    scaled = np.rint(2.0 * ranks).astype(np.int64)
    total = int(scaled.sum())
    n = len(scaled)
    observed = int(scaled[:n1].sum())
    center2 = n1 * (n + 1)  # twice the null mean of the rank sum
    target = abs(observed - center2)

    counts = np.zeros((n1 + 1, total + 1), dtype=np.int64)
    counts[0, 0] = 1
    for x in scaled:
        upper = min(n1, n)
        for k in range(upper, 0, -1):
            counts[k, x:] += counts[k - 1, : total + 1 - x]
    sums = np.arange(total + 1)
    tail = counts[n1, np.abs(sums - center2) >= target].sum()
    return float(tail / comb(n, n1))


def _normal_ranksum_p(ranks: np.ndarray, n1: int) -> float:
    """Two-sided normal approximation with tie correction and continuity."""
    n = len(ranks)
    n2 = n - n1
    w = ranks[:n1].sum()
    mean = n1 * (n + 1) / 2.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    tie_term = float(((tie_counts**3 - tie_counts).sum()) / (n * (n - 1)))
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    if var <= 0.0:
        return 1.0
    z = max(abs(w - mean) - 0.5, 0.0) / sqrt(var)
    return min(1.0, 2.0 * float(norm.sf(z)))


def wilcoxon_ranksum(sample_a, sample_b, method: str = "auto") -> float:
    """Two-sided rank-sum p-value for two independent samples.

    method "auto" enumerates exactly when the combined size is at most 20
    and falls back to the tie-corrected normal approximation above that;
    "exact" and "normal" force the respective path.
    """
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    ranks = rankdata(np.concatenate([a, b]))
    if method == "auto":
        method = "exact" if len(ranks) <= EXACT_LIMIT else "normal"
    if method == "exact":
        return _exact_ranksum_p(ranks, len(a))
    if method == "normal":
        return _normal_ranksum_p(ranks, len(a))
    raise ValueError(f"unknown method {method!r}, expected auto, exact, or normal")


# -- batch running -------------------------------------------------------------

@dataclass
class BatchSpec:
    """A grid of instances x named configurations, repeated over seeds."""

    instances: list[str]
    configs: dict[str, dict]
    runs: int = 30
    base_seed: int = 0
    output_dir: str | Path = "batch_out"
    save_traces: bool = True
    workers: int = 1

    @classmethod
    def from_json(cls, path) -> "BatchSpec":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        known = {"instances", "configs", "runs", "base_seed", "output_dir",
                 "save_traces", "workers"}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"{path}: unknown batch keys {sorted(unknown)}")
        if "instances" not in raw or "configs" not in raw:
            raise ValueError(f"{path}: batch spec needs 'instances' and 'configs'")
        configs = {}
        base = Path(path).parent
        for name, value in raw["configs"].items():
            if isinstance(value, str):
                from .engine import load_config_file

                configs[name] = load_config_file(base / value)
            else:
                configs[name] = dict(value)
        out_dir = Path(raw.get("output_dir", "batch_out"))
        if not out_dir.is_absolute():
            out_dir = base / out_dir
        return cls(
            instances=[str(base / p) if not Path(p).is_absolute() else p
                       for p in raw["instances"]],
            configs=configs,
            runs=int(raw.get("runs", 30)),
            base_seed=int(raw.get("base_seed", 0)),
            output_dir=out_dir,
            save_traces=bool(raw.get("save_traces", True)),
            workers=int(raw.get("workers", 1)),
        )


@dataclass
class CellResult:
    """Outcome of all runs of one (instance, configuration) cell."""

    instance: str
    config: str
    bests: list[int] = field(default_factory=list)
    seeds: list[int] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    @property
    def min(self) -> int | None:
        return min(self.bests) if self.bests else None

    @property
    def std(self) -> float | None:
        if not self.bests:
            return None
        if len(self.bests) == 1:
            return 0.0
        return float(np.std(self.bests, ddof=1))

    @property
    def mean(self) -> float | None:
        return float(np.mean(self.bests)) if self.bests else None

    @property
    def median(self) -> float | None:
        return float(np.median(self.bests)) if self.bests else None


@dataclass
class BatchReport:
    cells: dict[tuple[str, str], CellResult]
    pvalues: dict[tuple[str, str, str], float]

    def cell(self, instance: str, config: str) -> CellResult:
        return self.cells[(instance, config)]

    def summary_rows(self):
        rows = []
        for (instance, config), cell in sorted(self.cells.items()):
            rows.append({
                "instance": instance,
                "config": config,
                "runs": len(cell.bests),
                "errors": len(cell.errors),
                "min": cell.min,
                "median": cell.median,
                "mean": cell.mean,
                "std": cell.std,
            })
        return rows

    def write_summary_csv(self, path):
        rows = self.summary_rows()
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("instance,config,runs,errors,min,median,mean,std\n")
            for r in rows:
                fh.write(
                    f"{r['instance']},{r['config']},{r['runs']},{r['errors']},"
                    f"{r['min']},{r['median']},{r['mean']!r},{r['std']!r}\n"
                )

    def to_json_dict(self) -> dict:
        return {
            "cells": [
                {
                    "instance": cell.instance,
                    "config": cell.config,
                    "seeds": cell.seeds,
                    "bests": cell.bests,
                    "errors": cell.errors,
                    "min": cell.min,
                    "median": cell.median,
                    "mean": cell.mean,
                    "std": cell.std,
                }
                for cell in self.cells.values()
            ],
            "pvalues": [
                {"instance": i, "config_a": a, "config_b": b, "p": p}
                for (i, a, b), p in self.pvalues.items()
            ],
        }

    def write_json(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def from_json(cls, path) -> "BatchReport":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        cells = {}
        for entry in raw.get("cells", []):
            cell = CellResult(entry["instance"], entry["config"],
                              list(entry["bests"]), list(entry["seeds"]),
                              list(entry["errors"]))
            cells[(cell.instance, cell.config)] = cell
        pvalues = {
            (e["instance"], e["config_a"], e["config_b"]): e["p"]
            for e in raw.get("pvalues", [])
        }
        return cls(cells, pvalues)


def _instance_label(path_or_formula) -> str:
    if isinstance(path_or_formula, (str, Path)):
        return Path(path_or_formula).stem
    return repr(path_or_formula)


def _one_run(instance_path, config_options, seed, trace_path):
    """Worker for one run; returns the best false count found."""
    formula = parse_dimacs_file(instance_path)
    config = config_from_dict(dict(config_options), formula=formula)
    config = replace(config, seed=int(seed))
    result = run_ea(config)
    if trace_path is not None:
        result.trace.to_csv(trace_path)
    return result.best_false_count


def run_batch(spec: BatchSpec) -> BatchReport:
    """Execute the full grid, write outputs, and return the report.

    Per-run failures are recorded in the owning cell and the batch carries
    on. Outputs under spec.output_dir: one bests CSV per cell, optional
    per-run trace CSVs, summary.csv, and report.json.
    """
    out = Path(spec.output_dir)
    (out / "bests").mkdir(parents=True, exist_ok=True)
    if spec.save_traces:
        (out / "traces").mkdir(parents=True, exist_ok=True)

    jobs = []
    for instance in spec.instances:
        label = _instance_label(instance)
        for config_name, options in spec.configs.items():
            for r in range(spec.runs):
                seed = spec.base_seed + r
                trace_path = (
                    str(out / "traces" / f"{label}__{config_name}__run{r}.csv")
                    if spec.save_traces else None
                )
                jobs.append((instance, label, config_name, options, r, seed, trace_path))

    cells: dict[tuple[str, str], CellResult] = {}
    for instance in spec.instances:
        label = _instance_label(instance)
        for config_name in spec.configs:
            cells[(label, config_name)] = CellResult(label, config_name)

    def record(job, outcome, error=None):
        _, label, config_name, _, r, seed, _ = job
        cell = cells[(label, config_name)]
        if error is not None:
            cell.errors.append(f"run {r} (seed {seed}): {error}")
        else:
            cell.bests.append(int(outcome))
            cell.seeds.append(seed)

    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            futures = [
                pool.submit(_one_run, job[0], job[3], job[5], job[6]) for job in jobs
            ]
            for job, future in zip(jobs, futures):
                try:
                    record(job, future.result())
                except Exception as exc:  # noqa: BLE001 - cell-level reporting
                    record(job, None, error=str(exc))
    else:
        for job in jobs:
            try:
                record(job, _one_run(job[0], job[3], job[5], job[6]))
            except Exception as exc:  # noqa: BLE001
                record(job, None, error=str(exc))

    for (label, config_name), cell in cells.items():
        with open(out / "bests" / f"{label}__{config_name}.csv", "w",
                  encoding="utf-8", newline="\n") as fh:
            fh.write("run,seed,best\n")
            for i, (seed, best) in enumerate(zip(cell.seeds, cell.bests)):
                fh.write(f"{i},{seed},{best}\n")

    pvalues = {}
    labels = [_instance_label(i) for i in spec.instances]
    for label in labels:
        for name_a, name_b in combinations(spec.configs, 2):
            bests_a = cells[(label, name_a)].bests
            bests_b = cells[(label, name_b)].bests
            if bests_a and bests_b:
                pvalues[(label, name_a, name_b)] = wilcoxon_ranksum(bests_a, bests_b)

    report = BatchReport(cells, pvalues)
    report.write_summary_csv(out / "summary.csv")
    report.write_json(out / "report.json")
    return report


# -- figure data ---------------------------------------------------------------

FIGURE_KINDS = ("op_frequency", "entropy", "theta", "fitness")


def emit_figure_data(trace, kind: str, out_path=None) -> str:
    """Extract plot-ready whitespace-separated columns from a trace.

    Kinds: op_frequency (code, count), entropy and theta (iteration, value),
    fitness (iteration, mean quality, best). `trace` may be a Trace or a
    path to a trace CSV. Returns the text; writes it to out_path when given.
    """
    if not isinstance(trace, Trace):
        trace = Trace.from_csv(trace)
    lines = []
    if kind == "op_frequency":
        lines.append("# op count")
        for code, count in trace.operator_counts().items():
            lines.append(f"{code} {count}")
    elif kind == "entropy":
        lines.append("# iteration entropy")
        for i, h in zip(trace.iteration, trace.entropy):
            lines.append(f"{i} {float(h)!r}")
    elif kind == "theta":
        lines.append("# iteration theta")
        for i, th in zip(trace.iteration, trace.theta):
            lines.append(f"{i} {float(th)!r}")
    elif kind == "fitness":
        lines.append("# iteration mean_q best")
        for i, q, b in zip(trace.iteration, trace.mean_q, trace.best):
            lines.append(f"{i} {float(q)!r} {b}")
    else:
        raise ValueError(f"unknown figure kind {kind!r}, expected one of {FIGURE_KINDS}")
    text = "\n".join(lines) + "\n"
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text

"""Command-line entry points, exercised through main(argv)."""

import json

import pytest

from aosat.benchmarks import planted_coloring
from aosat.cli import EXIT_EXHAUSTED, EXIT_SOLVED, EXIT_USAGE, main
from aosat.cnf import parse_dimacs, write_dimacs


@pytest.fixture()
def easy_instance(tmp_path):
    path = tmp_path / "easy.cnf"
    path.write_text(write_dimacs(planted_coloring(vertices=9, edges=12, seed=1)))
    return path


@pytest.fixture()
def hard_instance(tmp_path):
    # Contradictory units: never satisfiable, so solve always exhausts.
    path = tmp_path / "unsat.cnf"
    path.write_text("p cnf 2 3\n1 0\n-1 0\n2 0\n")
    return path


class TestSolve:
    def test_solves_and_prints_assignment(self, easy_instance, capsys, tmp_path):
        trace = tmp_path / "trace.csv"
        code = main(["solve", str(easy_instance), "--seed", "3",
                     "--max-iterations", "3000", "--trace", str(trace)])
        out = capsys.readouterr().out
        assert code == EXIT_SOLVED
        assert "satisfying assignment found" in out
        assert trace.is_file()
        v_lines = [l for l in out.splitlines() if l.startswith("v ")]
        assert len(v_lines) == 1
        bits = v_lines[0][2:]
        assert set(bits) <= {"0", "1"}
        formula = parse_dimacs(easy_instance.read_text())
        assert len(bits) == formula.num_variables

    def test_reported_assignment_satisfies_instance(self, easy_instance, capsys):
        import numpy as np

        from aosat.cnf import count_false_clauses

        main(["solve", str(easy_instance), "--seed", "5", "--max-iterations", "3000"])
        out = capsys.readouterr().out
        bits = next(l[2:] for l in out.splitlines() if l.startswith("v "))
        formula = parse_dimacs(easy_instance.read_text())
        assignment = np.array([int(c) for c in bits], dtype=np.uint8)
        assert count_false_clauses(formula, assignment) == 0

    def test_quiet_suppresses_assignment(self, easy_instance, capsys):
        code = main(["solve", str(easy_instance), "--seed", "3",
                     "--max-iterations", "3000", "--quiet"])
        out = capsys.readouterr().out
        assert code == EXIT_SOLVED
        assert not [l for l in out.splitlines() if l.startswith("v ")]

    def test_exhaustion_exit_code(self, hard_instance, capsys):
        code = main(["solve", str(hard_instance), "--max-iterations", "50"])
        out = capsys.readouterr().out
        assert code == EXIT_EXHAUSTED
        assert "budget exhausted" in out

    def test_missing_file_is_usage_error(self, tmp_path, capsys):
        code = main(["solve", str(tmp_path / "nope.cnf")])
        assert code == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_malformed_instance_is_usage_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.cnf"
        bad.write_text("p cnf 1 1\n5 0\n")
        code = main(["solve", str(bad)])
        assert code == EXIT_USAGE
        assert "line 2" in capsys.readouterr().err

    def test_config_file_drives_run(self, easy_instance, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("max_iterations = 40\nseed = 8\nearly_exit = false\n"
                       "population_size = 6\np_min = 0.01\n")
        code = main(["solve", str(easy_instance), "--config", str(cfg)])
        out = capsys.readouterr().out
        assert code in (EXIT_SOLVED, EXIT_EXHAUSTED)
        assert "iterations=40" in out or "satisfying" in out

    def test_bad_config_value_is_usage_error(self, easy_instance, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("strategy = vibes\n")
        code = main(["solve", str(easy_instance), "--config", str(cfg)])
        assert code == EXIT_USAGE

    def test_seed_determinism_of_output(self, easy_instance, capsys):
        main(["solve", str(easy_instance), "--seed", "11", "--quiet"])
        first = capsys.readouterr().out
        main(["solve", str(easy_instance), "--seed", "11", "--quiet"])
        second = capsys.readouterr().out
        assert first == second


class TestBatchAndStats:
    @pytest.fixture()
    def finished_batch(self, tmp_path, easy_instance):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({
            "instances": [str(easy_instance)],
            "configs": {
                "managed": {"max_iterations": 150, "population_size": 6,
                            "p_min": 0.01, "tabu": "memetic",
                            "memetic_flip_budget": 20},
                "random": {"max_iterations": 150, "population_size": 6,
                           "selection": "random"},
            },
            "runs": 3,
            "base_seed": 40,
            "output_dir": "res",
            "save_traces": True,
        }))
        return spec, tmp_path / "res"

    def test_batch_prints_summary_and_pvalue(self, finished_batch, capsys):
        spec, out_dir = finished_batch
        code = main(["batch", str(spec)])
        out = capsys.readouterr().out
        assert code == 0
        assert "managed" in out and "random" in out
        assert "vs" in out and "p=" in out
        assert (out_dir / "report.json").is_file()
        assert (out_dir / "summary.csv").is_file()

    def test_stats_compares_cells(self, finished_batch, capsys):
        spec, out_dir = finished_batch
        main(["batch", str(spec)])
        capsys.readouterr()
        report = str(out_dir / "report.json")
        code = main(["stats", report, report,
                     "--config-a", "managed", "--config-b", "random"])
        out = capsys.readouterr().out
        assert code == 0
        assert "rank-sum p=" in out

    def test_stats_ambiguous_selection_fails(self, finished_batch, capsys):
        spec, out_dir = finished_batch
        main(["batch", str(spec)])
        capsys.readouterr()
        report = str(out_dir / "report.json")
        code = main(["stats", report, report])
        assert code == EXIT_USAGE
        assert "exactly one" in capsys.readouterr().err

    def test_bad_spec_is_usage_error(self, tmp_path, capsys):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"instances": []}))
        assert main(["batch", str(spec)]) == EXIT_USAGE


class TestFigdata:
    def test_stdout_and_file_output(self, easy_instance, tmp_path, capsys):
        trace = tmp_path / "t.csv"
        main(["solve", str(easy_instance), "--seed", "3", "--max-iterations", "300",
              "--trace", str(trace), "--quiet"])
        capsys.readouterr()
        code = main(["figdata", str(trace), "--kind", "entropy"])
        out = capsys.readouterr().out
        assert code == 0
        assert out.startswith("# iteration entropy")

        target = tmp_path / "fig.txt"
        code = main(["figdata", str(trace), "--kind", "op_frequency",
                     "--out", str(target)])
        assert code == 0
        assert target.is_file()

    def test_missing_trace_is_usage_error(self, tmp_path, capsys):
        code = main(["figdata", str(tmp_path / "none.csv"), "--kind", "theta"])
        assert code == EXIT_USAGE


class TestParser:
    def test_subcommand_required(self, capsys):
        with pytest.raises(SystemExit):
            main([])

    def test_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit):
            main(["conquer"])

#!/usr/bin/env python3
"""
End-to-end tests of the flatlab command line: output, exit codes and run logs.
"""

import glob
import json
import os

import pytest

import analyze_logs
import flattenings
from app import main
from config import EXIT_CONSISTENCY, EXIT_OK, EXIT_USAGE, SEED_ENV_VAR
from conftest import write_text


@pytest.fixture
def monomial_file(tmp_path):
    return write_text(tmp_path, "F.txt", "# the monomial x0*x1*x2\nx0*x1*x2\n")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCat:

    def test_rank_of_the_monomial(self, capsys, monomial_file):
        code, out, _ = run(capsys, "cat", monomial_file, "--n", "2", "--d", "3", "--a", "1")
        assert code == EXIT_OK
        assert out == "shape 3x6\nrank 3\n"

    def test_shape_is_inferred(self, capsys, monomial_file):
        code, out, _ = run(capsys, "cat", monomial_file, "--a", "2")
        assert code == EXIT_OK
        assert out == "shape 6x3\nrank 3\n"

    @pytest.mark.parametrize("a", ["0", "3"])
    def test_a_out_of_range(self, capsys, monomial_file, a):
        code, out, err = run(capsys, "cat", monomial_file, "--a", a)
        assert code == EXIT_USAGE
        assert out == ""
        assert "❌ Error:" in err

    def test_missing_a(self, capsys, monomial_file):
        code, _, _ = run(capsys, "cat", monomial_file)
        assert code == EXIT_USAGE

    def test_verbose_prints_small_matrices(self, capsys, monomial_file):
        code, out, err = run(capsys, "cat", monomial_file, "--a", "1", "--verbose")
        assert code == EXIT_OK
        assert out.startswith("shape 3x6\n")
        assert "x1*x2" in out and out.endswith("rank 3\n")
        assert "Loaded form" in err

    def test_small_characteristic_warns(self, capsys, monomial_file):
        code, out, err = run(capsys, "cat", monomial_file, "--a", "1", "--mod", "2")
        assert code == EXIT_OK
        assert out.endswith("rank 3\n")
        assert "⚠️ Warning: p = 2 <= d = 3" in err

    def test_large_characteristic_is_quiet(self, capsys, monomial_file):
        code, _, err = run(capsys, "cat", monomial_file, "--a", "1", "--mod", "101")
        assert code == EXIT_OK
        assert "Warning" not in err

    def test_unreadable_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "cat", str(tmp_path / "missing.txt"), "--a", "1")
        assert code == EXIT_USAGE
        assert "cannot read" in err

    def test_parse_error(self, capsys, tmp_path):
        path = write_text(tmp_path, "bad.txt", "x0^2 + x1\n")
        code, _, _ = run(capsys, "cat", path, "--a", "1")
        assert code == EXIT_USAGE


class TestBound:

    def test_table_for_a_listed_spec(self, capsys, monomial_file):
        code, out, _ = run(capsys, "bound", monomial_file, "--grid", "list", "--specs", "cat:1")
        assert code == EXIT_OK
        assert out == "spec   shape  rank  e  bound\ncat:1  3x6    3     1  3\nbest bound 3\n"

    def test_default_grid_for_the_monomial(self, capsys, monomial_file):
        code, out, _ = run(capsys, "bound", monomial_file)
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0].split() == ["spec", "shape", "rank", "e", "bound"]
        assert [line.split()[0] for line in lines[1:-1]] == \
            ["cat:1", "cat:2", "koszul:1:0", "koszul:1:1", "koszul:2:0", "koszul:2:1"]
        assert lines[-1] == "best bound 4"

    def test_power_has_bound_one(self, capsys, tmp_path):
        path = write_text(tmp_path, "cube.txt", "x0^3\n")
        code, out, _ = run(capsys, "bound", path, "--n", "1")
        assert code == EXIT_OK
        rows = out.splitlines()[1:-1]
        assert rows and all(row.split()[-1] == "1" for row in rows)
        assert out.endswith("best bound 1\n")

    def test_tangent_form(self, capsys, tmp_path):
        path = write_text(tmp_path, "tangent.txt", "x0*x1^4\n")
        code, out, _ = run(capsys, "bound", path)
        assert code == EXIT_OK
        assert out.endswith("best bound 2\n")

    def test_json_certificate_is_deterministic(self, capsys, monomial_file, tmp_path):
        first, second = str(tmp_path / "a.json"), str(tmp_path / "b.json")
        code_a, out_a, _ = run(capsys, "bound", monomial_file, "--json", first)
        code_b, out_b, _ = run(capsys, "bound", monomial_file, "--json", second, "--jobs", "3")
        assert code_a == code_b == EXIT_OK
        assert out_a == out_b
        with open(first, 'rb') as f_a, open(second, 'rb') as f_b:
            assert f_a.read() == f_b.read()
        with open(first, 'r', encoding='utf-8') as f:
            data = json.load(f)
        assert data["best_bound"] == 4
        assert data["pairing"] == "differential"

    def test_modular_flag(self, capsys, monomial_file):
        _, plain, _ = run(capsys, "bound", monomial_file)
        code, modular, _ = run(capsys, "bound", monomial_file, "--modular")
        assert code == EXIT_OK
        assert modular == plain

    def test_specs_need_list_grid(self, capsys, monomial_file):
        code, _, _ = run(capsys, "bound", monomial_file, "--specs", "cat:1")
        assert code == EXIT_USAGE
        code, _, _ = run(capsys, "bound", monomial_file, "--grid", "list")
        assert code == EXIT_USAGE
        code, _, _ = run(capsys, "bound", monomial_file, "--grid", "list", "--specs", "cat:7")
        assert code == EXIT_USAGE

    def test_single_variable_form_asks_for_n(self, capsys, tmp_path):
        path = write_text(tmp_path, "cube.txt", "x0^3\n")
        code, out, err = run(capsys, "bound", path)
        assert code == EXIT_USAGE
        assert out == ""
        assert "--n" in err

    def test_saved_certificate_is_rechecked(self, capsys, monomial_file, tmp_path):
        certificate = str(tmp_path / "cert.json")
        code, _, _ = run(capsys, "bound", monomial_file, "--json", certificate)
        assert code == EXIT_OK
        code, out, _ = run(capsys, "check", monomial_file, certificate)
        assert code == EXIT_OK
        assert out == "valid best bound 4\n"

        other = write_text(tmp_path, "G.txt", "x0*x1*x2 + x0^3\n")
        code, out, _ = run(capsys, "check", other, certificate)
        assert code == EXIT_OK
        assert out == "invalid\n"

    def test_malformed_certificate(self, capsys, monomial_file, tmp_path):
        path = write_text(tmp_path, "cert.json", "{\"n\": 2}\n")
        code, out, err = run(capsys, "check", monomial_file, path)
        assert code == EXIT_USAGE
        assert out == ""
        assert "not a certificate" in err

    def test_broken_divisor_is_a_consistency_failure(self, capsys, monomial_file, monkeypatch):
        flattenings.check_divisor.cache_clear()
        monkeypatch.setattr(flattenings, "point_rank", lambda *args, **kwargs: 99)
        try:
            code, out, err = run(capsys, "bound", monomial_file)
        finally:
            flattenings.check_divisor.cache_clear()
        assert code == EXIT_CONSISTENCY
        assert "expected e=" in err


class TestApolarityCommands:

    def test_tangent_form_is_in_the_span_of_the_fat_point(self, capsys, tmp_path):
        form = write_text(tmp_path, "F.txt", "x0^2*x1\n")
        ideal = write_text(tmp_path, "I.txt", "y1^2\n")
        code, out, _ = run(capsys, "inspan", form, ideal)
        assert code == EXIT_OK
        assert out == "true\n"

    def test_generic_form_is_not_in_the_span_of_a_point(self, capsys, tmp_path):
        form = write_text(tmp_path, "F.txt", "x0^3 + 2*x1^3 + x0*x1^2\n")
        ideal = write_text(tmp_path, "I.txt", "y1 - y0\n")
        code, out, _ = run(capsys, "inspan", form, ideal)
        assert code == EXIT_OK
        assert out == "false\n"

    def test_zero_form(self, capsys, tmp_path):
        form = write_text(tmp_path, "F.txt", "x0 - x0\n")
        ideal = write_text(tmp_path, "I.txt", "y0\n")
        code, _, err = run(capsys, "inspan", form, ideal)
        assert code == EXIT_USAGE
        assert "zero polynomial" in err

    def test_length_of_a_point(self, capsys, tmp_path):
        ideal = write_text(tmp_path, "I.txt", "y1 - 2*y0\ny2 - 3*y0\n")
        code, out, _ = run(capsys, "length", ideal)
        assert code == EXIT_OK
        assert out == "length 1\n"

    def test_length_of_a_fat_point(self, capsys, tmp_path):
        ideal = write_text(tmp_path, "I.txt", "y1^2\ny1*y2\ny2^2\n")
        code, out, _ = run(capsys, "length", ideal)
        assert code == EXIT_OK
        assert out == "length 3\n"

    def test_line_is_unstable(self, capsys, tmp_path):
        ideal = write_text(tmp_path, "I.txt", "y0\n")
        code, out, err = run(capsys, "length", ideal, "--n", "2", "--tmax", "5")
        assert code == EXIT_USAGE
        assert out == "unstable\n"
        assert "did not stabilize" in err

    def test_ideal_parse_error_names_the_line(self, capsys, tmp_path):
        ideal = write_text(tmp_path, "I.txt", "y0\ny0 + y1^2\n")
        code, _, err = run(capsys, "length", ideal)
        assert code == EXIT_USAGE
        assert "I.txt:2:" in err


class TestDecompositionCommands:

    @pytest.fixture
    def binary_form(self, tmp_path):
        return write_text(tmp_path, "F.txt", "x0*x1\n")

    def test_verify_ok(self, capsys, tmp_path, binary_form):
        decomposition = write_text(tmp_path, "D.txt", "# (x0+x1)^2/4 - (x0-x1)^2/4\n1/4 ; 1,1\n-1/4 ; 1,-1\n")
        code, out, _ = run(capsys, "verify", binary_form, decomposition)
        assert code == EXIT_OK
        assert out == "ok r=2\n"

    def test_verify_fail(self, capsys, tmp_path, binary_form):
        decomposition = write_text(tmp_path, "D.txt", "1/4 ; 1,1\n1/4 ; 1,-1\n")
        code, out, _ = run(capsys, "verify", binary_form, decomposition)
        assert code == EXIT_OK
        assert out == "fail r=2\n"

    def test_verify_empty_file(self, capsys, tmp_path, binary_form):
        decomposition = write_text(tmp_path, "D.txt", "# nothing here\n")
        code, out, _ = run(capsys, "verify", binary_form, decomposition)
        assert code == EXIT_USAGE
        assert out == ""

    def test_verify_malformed_line(self, capsys, tmp_path, binary_form):
        decomposition = write_text(tmp_path, "D.txt", "1/4 ; 1,1\n1/4 1,-1\n")
        code, _, err = run(capsys, "verify", binary_form, decomposition)
        assert code == EXIT_USAGE
        assert "D.txt:2:" in err

    @pytest.mark.parametrize("n,d,r,expected", [
        ("6", "27", "14", "InsufficientFlattenings"),
        ("4", "279", "140", "InsufficientFlattenings"),
        ("6", "26", "14", "NoClaim"),
    ])
    def test_gap(self, capsys, n, d, r, expected):
        code, out, _ = run(capsys, "gap", "--n", n, "--d", d, "--r", r)
        assert code == EXIT_OK
        assert out == expected + "\n"


class TestRandomAndSeeds:

    def test_random_form_is_reproducible(self, capsys):
        _, first, _ = run(capsys, "random", "--n", "2", "--d", "3", "--seed", "5")
        _, second, _ = run(capsys, "random", "--n", "2", "--d", "3", "--seed", "5")
        _, other, _ = run(capsys, "random", "--n", "2", "--d", "3", "--seed", "6")
        assert first == second != other

    def test_seed_from_environment(self, capsys, monkeypatch):
        _, flag, _ = run(capsys, "random", "--n", "1", "--d", "4", "--seed", "77")
        monkeypatch.setenv(SEED_ENV_VAR, "77")
        _, env, _ = run(capsys, "random", "--n", "1", "--d", "4")
        assert flag == env

    def test_bad_seed_in_environment(self, capsys, monkeypatch):
        monkeypatch.setenv(SEED_ENV_VAR, "seven")
        code, _, err = run(capsys, "random", "--n", "1", "--d", "2")
        assert code == EXIT_USAGE
        assert SEED_ENV_VAR in err

    def test_unknown_command(self, capsys):
        code, _, _ = run(capsys, "decompose")
        assert code == EXIT_USAGE

    def test_version(self, capsys):
        code, out, _ = run(capsys, "--version")
        assert code == EXIT_OK
        assert "FlatLab" in out


class TestRunLogs:

    def test_log_files_and_summary(self, capsys, monomial_file, tmp_path):
        log_dir = str(tmp_path / "logs")
        code, _, _ = run(capsys, "bound", monomial_file, "--log-dir", log_dir)
        assert code == EXIT_OK

        run_dir = os.path.join(log_dir, "bound")
        assert len(glob.glob(os.path.join(run_dir, "run_info_*.json"))) == 1
        assert len(glob.glob(os.path.join(run_dir, "computations_*.jsonl"))) == 1
        assert len(glob.glob(os.path.join(run_dir, "tech_log_*.jsonl"))) == 1

        summary = analyze_logs.summarize_run(run_dir)
        assert summary["run_info"]["command"] == "bound"
        assert summary["run_info"]["exit_code"] == EXIT_OK
        assert [entry["spec"] for entry in summary["certificate_entries"]] == \
            ["cat:1", "cat:2", "koszul:1:0", "koszul:1:1", "koszul:2:0", "koszul:2:1"]
        assert summary["computation_types"]["CERTIFICATE"] == 1
        assert summary["errors"] == []

    def test_errors_and_warnings_are_logged(self, capsys, monomial_file, tmp_path):
        log_dir = str(tmp_path / "logs")
        run(capsys, "cat", monomial_file, "--a", "1", "--mod", "3", "--log-dir", log_dir)
        code, _, _ = run(capsys, "gap", "--n", "6", "--d", "27", "--r", "0", "--log-dir", log_dir)
        assert code == EXIT_USAGE

        cat_summary = analyze_logs.summarize_run(os.path.join(log_dir, "cat"))
        assert cat_summary["run_info"]["warning_count"] == 1
        assert len(cat_summary["warnings"]) == 1

        gap_summary = analyze_logs.summarize_run(os.path.join(log_dir, "gap"))
        assert gap_summary["run_info"]["exit_code"] == EXIT_USAGE
        assert gap_summary["errors"][0]["type"] == "InvalidParameterError"

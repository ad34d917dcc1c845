from __future__ import annotations

import json
import os

import pytest

from airymoments.errors import InconsistencyError
from airymoments.cli import main, parse_k_range
from airymoments import cli


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_k_range():
    assert parse_k_range("5") == (5,)
    assert parse_k_range("3..6") == (3, 4, 5, 6)
    assert parse_k_range("2..9", parity="odd") == (3, 5, 7, 9)
    assert parse_k_range("2..9", parity="even") == (2, 4, 6, 8)


def test_dims_text(capsys):
    code, out, _ = run_cli(capsys, "dims", "--k", "5")
    assert code == 0
    assert out == "k  all  mid\n5  3    3\n"


def test_dims_json_single_k_is_bare_object(capsys):
    code, out, _ = run_cli(capsys, "dims", "--k", "5", "--format", "json")
    assert code == 0
    assert out == '{"all":3,"mid":3}\n'


def test_dims_json_range_is_a_list(capsys):
    code, out, _ = run_cli(
        capsys, "dims", "--k", "2..8", "--parity", "even",
        "--format", "json",
    )
    assert code == 0
    assert json.loads(out) == [
        {"k": 2, "all": 0, "mid": 0},
        {"k": 4, "all": 1, "mid": 0},
        {"k": 6, "all": 2, "mid": 2},
        {"k": 8, "all": 3, "mid": 2},
    ]


def test_dims_higher_order(capsys):
    code, out, _ = run_cli(
        capsys, "dims", "--k", "3", "--n", "3", "--format", "json"
    )
    assert code == 0
    assert json.loads(out) == {"all": 2, "mid": 1}


def test_hodge_text_table(capsys):
    code, out, _ = run_cli(capsys, "hodge", "--k", "5")
    assert code == 0
    assert out.splitlines() == [
        "k  p     q     h",
        "5  7/3   11/3  1",
        "5  3     3     1",
        "5  11/3  7/3   1",
    ]


def test_hodge_csv(capsys):
    code, out, _ = run_cli(capsys, "hodge", "--k", "4", "--format", "csv")
    assert code == 0
    assert out == "k,p,q,h\r\n4,3,3,1\r\n" or out == "k,p,q,h\n4,3,3,1\n"


def test_hodge_latex(capsys):
    code, out, _ = run_cli(capsys, "hodge", "--k", "4", "--format", "latex")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "\\begin{tabular}{llll}"
    assert lines[1] == "k & p & q & h \\\\"
    assert lines[-1] == "\\end{tabular}"
    assert "4 & 3 & 3 & 1 \\\\" in lines


def test_basis_json(capsys):
    code, out, _ = run_cli(
        capsys, "basis", "--k", "3", "--space", "gm", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["space"] == "gm"
    assert payload["classes"][0] == {"u0": ["0", "0", "1"]}
    assert len(payload["classes"]) == 6
    assert payload["g_levels"] is None


def test_basis_levels_on_the_affine_line(capsys):
    code, out, _ = run_cli(
        capsys, "basis", "--k", "3", "--space", "a1", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["g_levels"] == ["7/3", "5/3"]


def test_gamma_json(capsys):
    code, out, _ = run_cli(
        capsys, "gamma", "--k", "8", "--series-terms", "4",
        "--format", "json",
    )
    assert code == 0
    assert json.loads(out) == {
        "k": 8,
        "offset": "2",
        "values": ["1", "5/8", "615/256", "55375/2048"],
    }


def test_decomp_json(capsys):
    code, out, _ = run_cli(
        capsys, "decomp", "--k", "3", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["regular_rank"] == 0
    assert [e["coefficients"] for e in payload["exponents"]] == [
        ["-2"], ["-2/3"], ["2/3"], ["2"]
    ]


def test_verify_reports_per_k(capsys):
    code, out, _ = run_cli(capsys, "verify", "--k", "2..6")
    assert code == 0
    assert out.splitlines() == [
        "k=2: 4 checks passed",
        "k=3: 4 checks passed",
        "k=4: 5 checks passed",
        "k=5: 4 checks passed",
        "k=6: 5 checks passed",
        "all passed",
    ]


def test_determinism(capsys):
    first = run_cli(capsys, "tilde", "--k", "8", "--format", "json")
    second = run_cli(capsys, "tilde", "--k", "8", "--format", "json")
    assert first == second


def test_cache_round_trip(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
    code, cold, _ = run_cli(
        capsys, "hodge", "--k", "6", "--format", "json"
    )
    assert code == 0
    cached = os.listdir(tmp_path)
    assert cached == [f"hodge_n2_k6_v{cli.__version__}.json"]
    code, warm, _ = run_cli(
        capsys, "hodge", "--k", "6", "--format", "json"
    )
    assert code == 0
    assert warm == cold


def test_cache_serves_stored_bytes(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
    path = tmp_path / f"dims_n2_k5_v{cli.__version__}.json"
    path.write_text('{"sentinel":true}\n')
    code, out, _ = run_cli(capsys, "dims", "--k", "5", "--format", "json")
    assert code == 0
    assert out == '{"sentinel":true}\n'


def test_text_output_is_never_cached(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
    code, _, _ = run_cli(capsys, "hodge", "--k", "6")
    assert code == 0
    assert os.listdir(tmp_path) == []


def test_usage_errors(capsys):
    assert run_cli(capsys, "dims", "--k", "x")[0] == 64
    assert run_cli(capsys, "dims")[0] == 64
    assert run_cli(capsys, "transmogrify", "--k", "3")[0] == 64
    assert run_cli(capsys, "dims", "--k", "9..3")[0] == 64


def test_domain_errors_exit_one(capsys):
    code, _, err = run_cli(capsys, "hodge", "--k", "1")
    assert code == 1
    assert "error" in err
    assert run_cli(capsys, "tilde", "--k", "2")[0] == 1
    assert run_cli(capsys, "gamma", "--k", "5")[0] == 1


def test_verify_failure_exits_two(capsys, monkeypatch):
    from airymoments.hodge import CheckResult, VerifyReport

    def rigged(k_range):
        return VerifyReport(results=(
            CheckResult(
                k=2, check="table-mass", passed=False,
                expected="1", got="2",
            ),
        ))

    monkeypatch.setattr(cli, "verify", rigged)
    code, out, _ = run_cli(capsys, "verify", "--k", "2")
    assert code == 2
    assert "table-mass" in out


def test_internal_inconsistency_exits_three(capsys, monkeypatch):
    def rigged(k):
        raise InconsistencyError("rigged")

    monkeypatch.setattr(cli, "hodge_numbers", rigged)
    code, _, err = run_cli(capsys, "hodge", "--k", "4")
    assert code == 3
    assert "inconsistency" in err

"""End-to-end command line behavior, including exit codes."""

import json
import os
import subprocess
import sys

import pytest

from grouptest import parse_policy


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    env.pop("GT_MODE", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "grouptest", *args],
        capture_output=True,
        text=True,
        env=env,
        timeout=300,
    )


def test_table1_prints_twelve_rows():
    result = run_cli("table1")
    assert result.returncode == 0
    lines = result.stdout.strip().splitlines()
    assert len(lines) == 13
    assert lines[0].split() == ["q_order", "gpta", "fixed_order"]
    assert "3.8449" in lines[2] and "3.8454" in lines[2]
    assert lines[1].split()[-2:] == ["3.8576", "3.8576"]


def test_eval_gpta_text_output():
    result = run_cli("eval", "gpta", "--q", "0.68,0.62,0.65,0.62")
    assert result.returncode == 0
    assert "engine gpta" in result.stdout
    assert "cost 3.8449" in result.stdout


def test_eval_exact_full_precision_is_rational():
    result = run_cli(
        "eval", "gpta", "--q", "0.68,0.65,0.62,0.62", "--mode", "exact", "--full-precision"
    )
    assert result.returncode == 0
    assert "cost 602743/156250" in result.stdout


def test_gt_mode_environment_variable():
    result = run_cli(
        "eval", "gpta", "--q", "0.68,0.65,0.62,0.62", "--full-precision",
        env_extra={"GT_MODE": "exact"},
    )
    assert "cost 602743/156250" in result.stdout
    bad = run_cli("eval", "gpta", "--q", "0.5", env_extra={"GT_MODE": "sometimes"})
    assert bad.returncode == 2


def test_eval_oracle_json():
    result = run_cli("eval", "oracle", "--q", "0.62,0.62,0.65,0.68", "--format", "json")
    payload = json.loads(result.stdout)
    assert set(payload) == {"cost", "root_moves", "policy", "n", "mode"}
    assert payload["root_moves"] == 4
    parse_policy(payload["policy"])


def test_eval_dorfman_json():
    result = run_cli("eval", "dorfman", "--q", "0.9,0.95,0.9,0.92", "--format", "json")
    payload = json.loads(result.stdout)
    assert set(payload) == {"partition", "group_costs", "cost", "q_sorted"}


def test_eval_policy_round_trips():
    result = run_cli("eval", "dp", "--q", "0.68,0.62,0.65,0.62", "--policy")
    line = next(l for l in result.stdout.splitlines() if l.startswith("policy "))
    parse_policy(line[len("policy "):])


def test_eval_from_file(tmp_path):
    path = tmp_path / "pop.txt"
    path.write_text("# benchmark multiset\n0.68\n0.65\n0.62,0.62\n")
    by_q = run_cli("eval", "gpta", "--file", str(path))
    assert "cost 3.8576" in by_q.stdout
    by_p = run_cli("eval", "gpta", "--file", str(path), "--kind", "p")
    assert by_p.returncode == 0
    assert by_p.stdout != by_q.stdout


def test_eval_input_validation_exit_codes():
    assert run_cli("eval", "gpta", "--q", "1.2").returncode == 2
    assert run_cli("eval", "gpta").returncode == 2
    assert run_cli("eval", "gpta", "--q", "0.5", "--p", "0.5").returncode == 2
    assert run_cli("eval", "gpta", "--file", "/nonexistent/pop.txt").returncode == 2
    assert run_cli("eval", "bogus", "--q", "0.5").returncode == 2


def test_eval_size_limit_exit_code():
    qs = ",".join(["0.7"] * 13)
    result = run_cli("eval", "oracle", "--q", qs)
    assert result.returncode == 3
    assert "error" in result.stderr


def test_verify_clean_campaign_exits_zero(tmp_path):
    result = run_cli(
        "verify", "1", "--n", "2..6", "--trials", "3", "--out", str(tmp_path / "r")
    )
    assert result.returncode == 0
    assert "counterexamples 0" in result.stdout
    assert (tmp_path / "r/report.json").exists()
    assert (tmp_path / "r/report.csv").exists()


def test_verify_counterexamples_exit_one(tmp_path):
    result = run_cli(
        "verify", "1", "--n", "4", "--trials", "4", "--range", "0.05,0.1",
        "--out", str(tmp_path / "r"),
    )
    assert result.returncode == 1
    assert (tmp_path / "r/counterexamples").is_dir()


def test_verify_bad_arguments_exit_two():
    assert run_cli("verify", "3").returncode == 2
    assert run_cli("verify", "1", "--n", "5..2").returncode == 2
    assert run_cli("verify", "1", "--n", "abc").returncode == 2
    assert run_cli("verify", "1", "--range", "0.5").returncode == 2
    assert run_cli("verify", "2", "--n", "2..9").returncode == 2


def test_verify_report_bytes_identical_across_threads(tmp_path):
    run_cli("verify", "1", "--n", "2..8", "--trials", "4", "--threads", "1",
            "--out", str(tmp_path / "a"))
    run_cli("verify", "1", "--n", "2..8", "--trials", "4", "--threads", "3",
            "--out", str(tmp_path / "b"))
    for name in ("report.json", "report.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_help_exits_zero():
    assert run_cli("--help").returncode == 0
    assert run_cli("eval", "--help").returncode == 0

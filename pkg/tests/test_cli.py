import json
import subprocess
import sys

import pytest

from soliton_lab.cli import run_cli


def test_solve_stdout_csv(capsys):
    code = run_cli(["solve", "--n", "2", "--alpha", "1", "--tmax", "30", "--tol", "1e-8"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t,r,dr,ddr"
    assert len(lines) > 500
    assert [float(v) for v in lines[1].split(",")] == [0.0, 0.0, 0.0, 0.5]


def test_solve_json_format(capsys):
    code = run_cli(["solve", "--n", "3", "--alpha", "2", "--tmax", "25", "--format", "json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["params"] == {"n": 3, "alpha": 2.0}
    assert doc["profile"]["t"][0] == 0.0


def test_solve_out_file(tmp_path, capsys):
    target = tmp_path / "profile.csv"
    code = run_cli(["solve", "--n", "2", "--alpha", "1", "--tmax", "25", "--out", str(target)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert target.read_text().startswith("t,r,dr,ddr\n")


def test_missing_flag_is_usage_error(capsys):
    code = run_cli(["solve", "--n", "2"])
    assert code == 2
    assert "usage" in capsys.readouterr().err


def test_no_subcommand_is_usage_error(capsys):
    assert run_cli([]) == 2


def test_help_exits_zero(capsys):
    assert run_cli(["--help"]) == 0
    assert "solve" in capsys.readouterr().out


def test_invalid_alpha_reported(capsys):
    code = run_cli(["solve", "--n", "2", "--alpha", "-1"])
    assert code == 2
    assert capsys.readouterr().err.startswith("error:")


def test_invalid_tol_reported(capsys):
    code = run_cli(["solve", "--n", "2", "--alpha", "1", "--tol", "1e-20"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_verify_green_cell(capsys):
    code = run_cli(
        ["verify", "--n", "2", "--alpha", "1", "--tmax", "120", "--format", "json"]
    )
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert all(check["pass"] for check in doc["checks"])
    names = {check["name"] for check in doc["checks"]}
    assert {"bounds", "phase-monotone", "pde-residual", "growth"} <= names
    assert doc["fit"]["fitted_C1"] == pytest.approx(-0.65231650, abs=1e-3)


def test_verify_honest_failure_exit_code(capsys):
    # (6, 3) at the default radius genuinely misses the growth gate; the
    # command must say so in the exit code rather than smooth it over
    code = run_cli(["verify", "--n", "6", "--alpha", "3"])
    out = capsys.readouterr().out
    assert code == 1
    growth_rows = [
        line for line in out.splitlines() if line.startswith("growth,")
    ]
    assert len(growth_rows) == 1
    assert growth_rows[0].split(",")[1] == "false"


def test_asymptotics_subcommand(capsys):
    code = run_cli(
        ["asymptotics", "--n", "2", "--alpha", "2", "--tmax", "60", "--format", "json"]
    )
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["checks"] == []
    assert doc["fit"]["fitted_leading"] == pytest.approx(2.0 / 3.0, rel=2e-3)


def test_scan_gradient_subcommand(capsys):
    code = run_cli(["scan-gradient", "--n", "2", "--alpha", "2", "--tmax", "16"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "center_offset,radius,M,grad_norm,ratio"
    assert lines[-1].startswith("sup_ratio,")
    assert len(lines) == 14


def test_table_thread_count_invariant(tmp_path, monkeypatch):
    serial = tmp_path / "serial.csv"
    threaded = tmp_path / "threaded.csv"
    monkeypatch.delenv("SOLITON_LAB_THREADS", raising=False)
    assert run_cli(["table", "--tmax", "25", "--tol", "1e-8", "--out", str(serial)]) == 0
    monkeypatch.setenv("SOLITON_LAB_THREADS", "2")
    assert run_cli(["table", "--tmax", "25", "--tol", "1e-8", "--out", str(threaded)]) == 0
    a = serial.read_text()
    assert a == threaded.read_text()
    lines = a.splitlines()
    assert len(lines) == 21
    assert lines[0].startswith("n,alpha,")


def test_table_bad_thread_env(monkeypatch, capsys):
    monkeypatch.setenv("SOLITON_LAB_THREADS", "many")
    code = run_cli(["table", "--tmax", "25"])
    assert code == 2
    assert "SOLITON_LAB_THREADS" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    target = tmp_path / "out.csv"
    proc = subprocess.run(
        [
            sys.executable, "-m", "soliton_lab",
            "solve", "--n", "2", "--alpha", "1", "--tmax", "25", "--out", str(target),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert target.exists()


def test_module_entry_point_usage_error():
    proc = subprocess.run(
        [sys.executable, "-m", "soliton_lab"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert "usage" in proc.stderr

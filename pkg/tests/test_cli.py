import csv
import io
import json

import numpy as np
import pytest
from click.testing import CliRunner

from geodiscord.cli import cli
from geodiscord.reports import ReportFile


@pytest.fixture
def runner():
    return CliRunner()


def _report(result):
    assert result.exit_code == 0, result.stderr
    report = ReportFile.model_validate_json(result.stdout)
    # re-serializing the parsed report reproduces the output
    assert report.model_dump_json(indent=2) == result.stdout.rstrip("\n")
    return report


def test_decompose_bell(runner):
    report = _report(runner.invoke(cli, ["decompose", "--family", "bell", "--json"]))
    assert report.command == "decompose"
    assert np.abs(np.array(report.bloch.T) - np.diag([1, -1, 1])).max() < 1e-14
    assert np.abs(report.bloch.x).max() < 1e-15


def test_decompose_file(runner, states_dir):
    path = str(states_dir / "maximally_mixed_2x2.json")
    report = _report(runner.invoke(cli, ["decompose", "--file", path, "--json"]))
    assert np.abs(report.bloch.T).max() < 1e-15
    assert report.state_source == f"file:{path}"
    result = runner.invoke(cli, ["decompose", "--file", path])
    assert result.exit_code == 0
    assert "purity: 0.25" in result.stdout


def test_malformed_file_exit_2(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 2, "re": np.eye(4).tolist(), "im": np.zeros((4, 4)).tolist()}))
    result = runner.invoke(cli, ["decompose", "--file", str(path)])
    assert result.exit_code == 2
    assert "'m' is a required property" in result.stderr


def test_invalid_state_exit_1(runner, tmp_path):
    path = tmp_path / "trace.json"
    path.write_text(json.dumps({"m": 2, "n": 2, "re": np.eye(4).tolist(), "im": np.zeros((4, 4)).tolist()}))
    result = runner.invoke(cli, ["bounds", "--file", str(path)])
    assert result.exit_code == 1
    assert "NotUnitTrace" in result.stderr
    result = runner.invoke(cli, ["bounds", "--family", "werner", "--z", "2.0"])
    assert result.exit_code == 1


def test_usage_errors_exit_2(runner, states_dir):
    path = str(states_dir / "bell_phi_plus.json")
    assert runner.invoke(cli, ["bounds", "--file", path, "--family", "bell"]).exit_code == 2
    assert runner.invoke(cli, ["bounds"]).exit_code == 2
    assert runner.invoke(cli, ["bounds", "--family", "werner"]).exit_code == 2
    assert runner.invoke(cli, ["bounds", "--family", "bell", "--seed", "-1"]).exit_code == 2
    assert runner.invoke(cli, ["oracle", "--family", "bell", "--restarts", "0"]).exit_code == 2


def test_bounds_isotropic(runner):
    report = _report(runner.invoke(cli, ["bounds", "--family", "isotropic", "--m", "3", "--z", "1.0", "--json"]))
    assert abs(report.bounds.gd_lower - 2 / 3) < 1e-10
    assert abs(report.bounds.min_upper - 2 / 3) < 1e-10


def test_bounds_werner_mixed_point(runner):
    report = _report(runner.invoke(cli, ["bounds", "--family", "werner", "--m", "2", "--z", "0.5", "--json"]))
    assert report.bounds.gd_lower < 1e-15
    assert report.bounds.saturated


def test_bounds_random_with_oracle(runner, tmp_path):
    from geodiscord.states import random_state
    from geodiscord.storage import StateStorage
    path = str(tmp_path / "rand2x3.json")
    StateStorage().save_state(random_state(2, 3, 6, seed=11), path)
    report = _report(runner.invoke(cli, ["bounds", "--file", path, "--oracle", "--seed", "11", "--json"]))
    assert report.seed == 11
    assert -1e-9 <= report.gap.gd_gap <= 1e-4
    assert report.bounds.candidate.valid


def test_output_is_deterministic(runner):
    args = ["bounds", "--family", "random", "--m", "3", "--n", "2", "--oracle", "--restarts", "4",
            "--iterations", "50", "--seed", "42", "--json"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    third = runner.invoke(cli, args[:-2] + ["43", "--json"])
    assert third.stdout != first.stdout


def test_measurement_command(runner):
    report = _report(runner.invoke(cli, ["measurement", "--family", "bell", "--json"]))
    assert report.measurement.valid
    assert abs(report.measurement.value - 0.5) < 1e-12
    result = runner.invoke(cli, ["measurement", "--family", "random", "--m", "3", "--n", "3", "--seed", "5"])
    assert result.exit_code == 0
    assert "operator 3:" in result.stdout


def test_oracle_command(runner):
    report = _report(runner.invoke(cli, ["oracle", "--family", "bell", "--restarts", "4", "--iterations", "50",
                                         "--json"]))
    assert abs(report.gap.oracle_gd - 0.5) < 1e-9
    assert abs(report.oracle_min.best_value - 0.5) < 1e-9
    assert len(report.oracle_gd.per_restart_values) == 4


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_werner(runner):
    result = runner.invoke(cli, ["sweep", "--family", "werner", "--m", "3", "--grid", "-1:1:21"])
    assert result.exit_code == 0
    assert result.stdout.splitlines()[0] == "param,gd_lower,min_upper,closed_form,oracle_gd,deficit"
    rows = _rows(result.stdout)
    assert len(rows) == 21
    for row in rows:
        assert abs(float(row["closed_form"]) - float(row["gd_lower"])) < 1e-10
        assert row["oracle_gd"] == "" and row["deficit"] == ""


def test_sweep_counterexample(runner, tmp_path):
    path = tmp_path / "sweeps" / "counterexample.csv"
    result = runner.invoke(cli, ["sweep", "--family", "counterexample", "--N", "4", "--grid", "0:1:101",
                                 "--output", str(path)])
    assert result.exit_code == 0
    rows = _rows(path.read_text())
    assert len(rows) == 101
    violated = [float(r["param"]) for r in rows if float(r["deficit"]) < -1e-9]
    expected = [p for p in np.linspace(0, 1, 101) if 0.4 + 1e-12 < p < 0.6 - 1e-12]
    assert np.allclose(violated, expected)


def test_sweep_errors(runner, tmp_path):
    assert runner.invoke(cli, ["sweep", "--family", "werner", "--grid", "0:1:0"]).exit_code == 2
    assert runner.invoke(cli, ["sweep", "--family", "werner", "--grid", "0:1"]).exit_code == 2
    blocker = tmp_path / "file.txt"
    blocker.write_text("x")
    result = runner.invoke(cli, ["sweep", "--family", "werner", "--grid", "0:1:3", "--output",
                                 str(blocker / "out.csv")])
    assert result.exit_code == 2


def test_sweep_json(runner):
    report = _report(runner.invoke(cli, ["sweep", "--family", "isotropic", "--m", "2", "--grid", "0:1:5", "--json"]))
    assert len(report.sweep) == 5
    assert abs(report.sweep[-1].gd_lower - 0.5) < 1e-10


def test_monogamy_w(runner):
    report = _report(runner.invoke(cli, ["monogamy", "--family", "gw", "--coeffs", "0.577,0.577,0.577", "--json"]))
    assert abs(report.monogamy.deficit - 1 / 9) < 1e-10
    assert report.monogamy.satisfied
    assert abs(report.normalization_factor - 1 / np.sqrt(3 * 0.577**2)) < 1e-12


def test_monogamy_counterexample(runner):
    report = _report(runner.invoke(cli, ["monogamy", "--family", "counterexample", "--p", "0.5", "--N", "4",
                                         "--json"]))
    assert abs(report.monogamy.deficit + 0.125) < 1e-12
    assert not report.monogamy.satisfied


def test_monogamy_gghz(runner):
    report = _report(runner.invoke(cli, ["monogamy", "--family", "gghz", "--coeffs", "0.6,0.8", "--N", "5",
                                         "--json"]))
    assert report.monogamy.lhs_sum < 1e-12
    assert abs(report.monogamy.cut_discord - 2 * 0.36 * 0.64) < 1e-12
    assert report.monogamy.satisfied


def test_monogamy_file_and_errors(runner, states_dir):
    report = _report(runner.invoke(cli, ["monogamy", "--file", str(states_dir / "w3.json"), "--json"]))
    assert abs(report.monogamy.deficit - 1 / 9) < 1e-10
    assert report.normalization_factor is None
    result = runner.invoke(cli, ["monogamy", "--family", "gw", "--coeffs", "1,1,1", "--no-renormalize"])
    assert result.exit_code == 1
    assert runner.invoke(cli, ["monogamy", "--family", "gw", "--coeffs", "a,b"]).exit_code == 2
    assert runner.invoke(cli, ["monogamy"]).exit_code == 2


def test_monogamy_complex_gghz(runner):
    report = _report(runner.invoke(cli, ["monogamy", "--family", "gghz", "--coeffs", "0.6,0.48+0.64j", "--N", "4",
                                         "--json"]))
    assert report.monogamy.lhs_sum < 1e-12
    assert abs(report.monogamy.cut_discord - 2 * 0.36 * 0.64) < 1e-12
    assert runner.invoke(cli, ["monogamy", "--family", "gw", "--coeffs", "0.6,0.8j,0"]).exit_code == 1


def test_square_family_rejects_other_n(runner):
    result = runner.invoke(cli, ["bounds", "--family", "bell", "--n", "3"])
    assert result.exit_code == 2
    assert "--n 3" in result.stderr
    assert runner.invoke(cli, ["bounds", "--family", "werner", "--z", "0.5", "--m", "3", "--n", "2"]).exit_code == 2
    assert runner.invoke(cli, ["bounds", "--family", "bell", "--m", "3", "--n", "3", "--quiet"]).exit_code == 0


def test_report_written_to_output(runner, tmp_path):
    path = tmp_path / "report.json"
    result = runner.invoke(cli, ["bounds", "--family", "bell", "--output", str(path)])
    assert result.exit_code == 0
    assert "gd_lower: " in result.stdout
    report = ReportFile.model_validate_json(path.read_text())
    assert abs(report.bounds.gd_lower - 0.5) < 1e-12

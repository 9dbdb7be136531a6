"""Tests for the command-line front end."""

from __future__ import annotations

import json

from click.testing import CliRunner
import pytest

from qecgate.core.errors import InvariantViolation, SingularSystem
from qecgate.experiment import advantage
from qecgate.ui.cli import main


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def test_codewords(runner: CliRunner) -> None:
    result = runner.invoke(main, ["codewords"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["zero_L"].startswith("+|00000⟩")
    assert "−|10111⟩" in data["zero_L"]
    assert data["checks"]["amplitudes"] is True
    assert data["checks"]["overlap"] == 0


def test_syndrome_table(runner: CliRunner) -> None:
    result = runner.invoke(main, ["syndrome-table"])
    assert result.exit_code == 0
    rows = json.loads(result.stdout)["table"]
    assert len(rows) == 16
    assert rows[0]["syndrome"] == "0000" and rows[0]["correction"] == "I"
    assert len({row["syndrome"] for row in rows}) == 16


def test_run_json(runner: CliRunner) -> None:
    result = runner.invoke(main, ["run", "--gate", "not", "--error", "BS4"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["fidelity"] == pytest.approx(1.0, abs=1e-9)
    assert data["syndrome"] is not None


def test_run_is_byte_identical(runner: CliRunner) -> None:
    args = ["run", "--gate", "had", "--error", "S3", "--dephasing-p", "0.05", "--seed", "1"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == 0
    assert first.stdout == second.stdout


@pytest.mark.parametrize("flag", ["--emulate-paper-identity-omission", "--assume-identity-response"])
def test_run_csv_and_identity_omission(runner: CliRunner, flag: str) -> None:
    result = runner.invoke(main, ["run", "--gate", "id", "--error", "E", flag, "--format", "csv"])
    assert result.exit_code == 0
    assert result.stdout.splitlines() == ["gate,error,fidelity", "id,E,1.000000000000"]


@pytest.mark.parametrize(
    "args",
    [
        ["run", "--gate", "cnot", "--error", "E"],
        ["run", "--gate", "id", "--error", "B6"],
        ["run", "--gate", "id", "--error", "E", "--dephasing-p", "1.5"],
        ["run", "--gate", "id", "--error", "E", "--dephasing-p", "0.1", "--t2", "100"],
    ],
)
def test_usage_errors(runner: CliRunner, args: list[str]) -> None:
    assert runner.invoke(main, args).exit_code == 2


def test_internal_failure_exits_one(runner: CliRunner, monkeypatch) -> None:
    def boom(*_args, **_kwargs):
        raise InvariantViolation("broken")

    monkeypatch.setattr("qecgate.ui.cli.run_experiment", boom)
    result = runner.invoke(main, ["run", "--gate", "id", "--error", "E"])
    assert result.exit_code == 1
    assert "InvariantViolation" in result.output


def test_sweep_csv(runner: CliRunner) -> None:
    result = runner.invoke(main, ["sweep", "--format", "csv"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert len(lines) == 49
    assert all(line.endswith("1.000000000000") for line in lines[1:])


def test_sweep_with_t2(runner: CliRunner) -> None:
    result = runner.invoke(main, ["sweep", "--t2", "100", "--duration", "45"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert len(data["experiments"]) == 48
    assert all(avg["mean"] < 1 for avg in data["averages"])


def test_baseline(runner: CliRunner) -> None:
    result = runner.invoke(main, ["baseline"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert [g["mean"] for g in data["gates"]] == [0.8125, 0.8125, 0.8125]


def test_advantage(runner: CliRunner) -> None:
    result = runner.invoke(main, ["advantage"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert [g["margin"] for g in data["gates"]] == pytest.approx([0.1875] * 3)


def test_noise_file(runner: CliRunner, tmp_path) -> None:
    path = tmp_path / "noise.json"
    path.write_text(json.dumps({"after_decode": {"1": {"kind": "depolarizing", "p": 0.1}}}))
    result = runner.invoke(main, ["run", "--gate", "had", "--error", "E", "--noise", str(path)])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["noise"] == {"after_decode": {"1": {"kind": "depolarizing", "p": 0.1}}}
    assert data["fidelity"] < 1


def test_bad_noise_file(runner: CliRunner, tmp_path) -> None:
    path = tmp_path / "noise.json"
    path.write_text(json.dumps({"after_decode": {"9": {"kind": "dephasing", "p": 0.1}}}))
    result = runner.invoke(main, ["run", "--gate", "had", "--error", "E", "--noise", str(path)])
    assert result.exit_code == 2


def test_run_reports_identity_omission(runner: CliRunner) -> None:
    args = ["run", "--gate", "had", "--error", "B2", "--emulate-paper-identity-omission"]
    result = runner.invoke(main, args)
    assert result.exit_code == 0
    assert json.loads(result.stdout)["tomography"]["identity_measured"] is False


def test_failure_inside_experiment_exits_one(runner: CliRunner, monkeypatch) -> None:
    def singular(*_args, **_kwargs):
        raise SingularSystem("response matrix is singular")

    monkeypatch.setattr("qecgate.experiment.chi_from_responses", singular)
    result = runner.invoke(main, ["run", "--gate", "had", "--error", "B2"])
    assert result.exit_code == 1
    assert "SingularSystem" in result.output
    assert not isinstance(result.exception, (KeyError, TypeError))


def test_sweep_identity_omission(runner: CliRunner) -> None:
    result = runner.invoke(main, ["sweep", "--emulate-paper-identity-omission"])
    assert result.exit_code == 0
    experiments = json.loads(result.stdout)["experiments"]
    assert len(experiments) == 48
    assert all(e["tomography"]["identity_measured"] is False for e in experiments)
    assert all(e["fidelity"] == pytest.approx(1.0, abs=1e-9) for e in experiments)


def test_advantage_identity_omission(runner: CliRunner, monkeypatch) -> None:
    seen = []

    def recording(noise, *, config, context):
        seen.append(config.include_identity)
        return advantage(noise, config=config, context=context)

    monkeypatch.setattr("qecgate.ui.cli.advantage", recording)
    result = runner.invoke(main, ["advantage", "--emulate-paper-identity-omission"])
    assert result.exit_code == 0
    assert seen == [False]
    assert [g["margin"] for g in json.loads(result.stdout)["gates"]] == pytest.approx([0.1875] * 3)

"""Command-line front end.

Reports go to stdout as JSON (or CSV for fidelity tables); logs go to
stderr. Exit codes: 0 success, 1 internal invariant failure, 2 usage error.
"""

from __future__ import annotations

from dataclasses import replace
import json
import logging
from pathlib import Path
from typing import Any, Callable

import click
import numpy as np

from qecgate.code.circuits import LogicalGate, codewords, signed_kets
from qecgate.code.qecerrors import LABELS
from qecgate.core.errors import QECError
from qecgate.core.instrumentation import configure
from qecgate.experiment import ExperimentConfig, advantage, baseline, fidelity_csv, run_experiment, sweep
from qecgate.noise import NoiseSchedule
from qecgate.runtime.bootstrap import Runtime, bootstrap


def _emit(payload: Any) -> None:
    click.echo(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))


def _runtime(ctx: click.Context) -> Runtime:
    obj = ctx.ensure_object(dict)
    if "runtime" not in obj:
        try:
            obj["runtime"] = bootstrap(obj.get("config_path"))
        except (RuntimeError, ValueError) as exc:
            raise click.ClickException(str(exc)) from exc
    return obj["runtime"]


def _guarded(fn: Callable[[], Any]) -> Any:
    try:
        return fn()
    except QECError as exc:
        raise click.ClickException(f"{exc.__class__.__name__}: {exc}") from exc


def _parse_t2(value: str | None) -> list[float] | None:
    if value is None:
        return None
    try:
        return [float(part) for part in value.split(",") if part.strip()]
    except ValueError as exc:
        raise click.BadParameter(f"expected comma-separated milliseconds, got {value!r}") from exc


def _noise(
    runtime: Runtime,
    noise_path: Path | None,
    dephasing_p: float | None,
    t2: str | None,
    duration: float | None,
) -> NoiseSchedule:
    sources = [noise_path is not None, dephasing_p is not None, t2 is not None]
    if sum(sources) > 1:
        raise click.UsageError("use only one of --noise, --dephasing-p and --t2")
    if noise_path is not None:
        try:
            return NoiseSchedule.from_file(noise_path)
        except (ValueError, RuntimeError) as exc:
            raise click.BadParameter(str(exc), param_hint="--noise") from exc
    if dephasing_p is not None:
        return NoiseSchedule.uniform("dephasing", dephasing_p)
    t2_values = _parse_t2(t2)
    if t2_values is not None or duration is not None:
        total = runtime.config.total_duration_ms if duration is None else duration
        try:
            return NoiseSchedule.from_t2(t2_values or runtime.config.t2_ms, total)
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--t2") from exc
    return NoiseSchedule()


def noise_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    fn = click.option("--duration", type=float, default=None, help="Total duration in ms for T2* noise.")(fn)
    fn = click.option("--t2", default=None, help="T2* in ms, one value or five comma-separated.")(fn)
    fn = click.option(
        "--dephasing-p",
        type=click.FloatRange(0.0, 1.0),
        default=None,
        help="Uniform dephasing probability on every qubit at every stage.",
    )(fn)
    fn = click.option(
        "--noise",
        "noise_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        default=None,
        help="Noise schedule JSON/YAML file.",
    )(fn)
    return fn


def format_option(fn: Callable[..., Any]) -> Callable[..., Any]:
    return click.option(
        "--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True
    )(fn)


def identity_option(fn: Callable[..., Any]) -> Callable[..., Any]:
    return click.option(
        "--emulate-paper-identity-omission",
        "--assume-identity-response",
        "identity_omission",
        is_flag=True,
        help="Assume the identity response instead of computing it.",
    )(fn)


def _config(runtime: Runtime, identity_omission: bool) -> ExperimentConfig:
    if identity_omission:
        return replace(runtime.config, include_identity=False)
    return runtime.config


@click.group()
@click.option("-v", "--verbose", count=True, help="Increase log verbosity (stderr).")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="Experiment configuration JSON/YAML file.",
)
@click.pass_context
def main(ctx: click.Context, verbose: int, config_path: Path | None) -> None:
    """Five-qubit code logical gate simulator."""
    ctx.ensure_object(dict)["config_path"] = config_path
    if verbose:
        configure(logging.DEBUG if verbose > 1 else logging.INFO)


@main.command("codewords")
def cmd_codewords() -> None:
    """Print both codewords as signed ket lists and check them."""
    pair = codewords()

    def render(kets: list[tuple[str, int]]) -> str:
        return " ".join(f"{'+' if sign > 0 else '−'}|{bits}⟩" for bits, sign in kets)

    amplitudes_ok = all(
        np.allclose(np.abs(state.amps[np.abs(state.amps) > 1e-12]), 1 / np.sqrt(8), atol=1e-12)
        and len(signed_kets(state)) == 8
        for state in (pair.zero_L, pair.one_L)
    )
    _emit({
        "zero_L": render(signed_kets(pair.zero_L)),
        "one_L": render(signed_kets(pair.one_L)),
        "checks": {
            "amplitudes": bool(amplitudes_ok),
            "norm_zero_L": round(float(np.linalg.norm(pair.zero_L.amps)), 12),
            "norm_one_L": round(float(np.linalg.norm(pair.one_L.amps)), 12),
            "overlap": round(abs(pair.zero_L.inner(pair.one_L)), 12),
        },
    })


@main.command("syndrome-table")
@click.pass_context
def cmd_syndrome_table(ctx: click.Context) -> None:
    """Emit the derived syndrome -> correction table."""
    runtime = _guarded(lambda: _runtime(ctx))
    _emit({"table": runtime.context.table.to_json()})


@main.command("run")
@click.option("--gate", type=click.Choice([g.value for g in LogicalGate]), required=True)
@click.option("--error", "error_label", type=click.Choice(list(LABELS)), required=True)
@identity_option
@click.option("--seed", type=int, default=None, help="Recorded only; pipelines are deterministic.")
@noise_options
@format_option
@click.pass_context
def cmd_run(
    ctx: click.Context,
    gate: str,
    error_label: str,
    identity_omission: bool,
    seed: int | None,
    noise_path: Path | None,
    dephasing_p: float | None,
    t2: str | None,
    duration: float | None,
    fmt: str,
) -> None:
    """Tomograph one (gate, error) pipeline."""
    runtime = _guarded(lambda: _runtime(ctx))
    noise = _noise(runtime, noise_path, dephasing_p, t2, duration)
    config = _config(runtime, identity_omission)
    report = _guarded(lambda: run_experiment(
        gate, error_label, noise, config=config, context=runtime.context, seed=seed
    ))
    if fmt == "csv":
        click.echo(fidelity_csv([(report.gate, report.error, report.fidelity)]), nl=False)
        return
    _emit(report.to_json())


@main.command("sweep")
@click.option("--seed", type=int, default=None, help="Recorded only; pipelines are deterministic.")
@identity_option
@noise_options
@format_option
@click.pass_context
def cmd_sweep(
    ctx: click.Context,
    seed: int | None,
    identity_omission: bool,
    noise_path: Path | None,
    dephasing_p: float | None,
    t2: str | None,
    duration: float | None,
    fmt: str,
) -> None:
    """Run all 3 gates x 16 error conditions."""
    runtime = _guarded(lambda: _runtime(ctx))
    noise = _noise(runtime, noise_path, dephasing_p, t2, duration)
    result = _guarded(lambda: sweep(
        noise, config=_config(runtime, identity_omission), context=runtime.context, seed=seed
    ))
    if fmt == "csv":
        click.echo(result.to_csv(), nl=False)
        return
    _emit(result.to_json())


@main.command("baseline")
@format_option
def cmd_baseline(fmt: str) -> None:
    """Fidelities without error correction (expected mean 13/16)."""
    result = _guarded(baseline)
    if fmt == "csv":
        click.echo(result.to_csv(), nl=False)
        return
    _emit(result.to_json())


@main.command("advantage")
@identity_option
@noise_options
@format_option
@click.pass_context
def cmd_advantage(
    ctx: click.Context,
    identity_omission: bool,
    noise_path: Path | None,
    dephasing_p: float | None,
    t2: str | None,
    duration: float | None,
    fmt: str,
) -> None:
    """Sweep averages minus the uncorrected 13/16 reference."""
    runtime = _guarded(lambda: _runtime(ctx))
    noise = _noise(runtime, noise_path, dephasing_p, t2, duration)
    result = _guarded(lambda: advantage(
        noise, config=_config(runtime, identity_omission), context=runtime.context
    ))
    if fmt == "csv":
        click.echo(result.to_csv(), nl=False)
        return
    _emit(result.to_json())


if __name__ == "__main__":  # pragma: no cover
    main()

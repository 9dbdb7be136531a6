"""Runtime bootstrap: preflight checks, configuration and code context."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from qecgate import preflight
from qecgate.code.recovery import CodeContext, default_context
from qecgate.core.instrumentation import TagLogger
from qecgate.experiment import ExperimentConfig


@dataclass(frozen=True, slots=True)
class Runtime:
    config: ExperimentConfig
    context: CodeContext


def bootstrap(config_path: str | Path | None = None) -> Runtime:
    """Validate the environment, load configuration and build the code context."""
    logger = TagLogger("bootstrap")
    preflight.check()
    config = (
        ExperimentConfig.from_file(config_path)
        if config_path is not None
        else ExperimentConfig.from_settings()
    )
    logger.info("initialising code context")
    return Runtime(config, default_context())


__all__ = ["Runtime", "bootstrap"]

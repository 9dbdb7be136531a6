"""Environment sanity checks run before any experiment."""

from __future__ import annotations

import logging
import os


def check() -> None:
    """Raise ``RuntimeError`` if the ``QECGATE_*`` environment is unusable.

    Rules:
    - QECGATE_ATOL, when set, must be a number with 0 < atol <= 1e-6.
    - QECGATE_WORKERS, when set, must be an integer in 1..64.
    - QECGATE_LOG_LEVEL, when set, must name a standard logging level.
    """
    raw_atol = os.getenv("QECGATE_ATOL")
    if raw_atol is not None:
        try:
            atol = float(raw_atol)
        except ValueError as exc:
            raise RuntimeError(f"[preflight] invalid QECGATE_ATOL: {exc}") from exc
        if not 0 < atol <= 1e-6:
            raise RuntimeError(f"[preflight] unreasonable tolerance {atol}")

    raw_workers = os.getenv("QECGATE_WORKERS")
    if raw_workers is not None:
        try:
            workers = int(raw_workers)
        except ValueError as exc:
            raise RuntimeError(f"[preflight] invalid QECGATE_WORKERS: {exc}") from exc
        if not 1 <= workers <= 64:
            raise RuntimeError(f"[preflight] unreasonable worker count {workers}")

    level = os.getenv("QECGATE_LOG_LEVEL")
    if level is not None and not isinstance(logging.getLevelName(level.upper()), int):
        raise RuntimeError(f"[preflight] unknown log level {level!r}")

"""Tag-based tracking and logging utilities.

:class:`TagLogger` wraps a namespaced standard logger and counts tagged
events. Simulator components use it to report stage progress and failures
without ever writing to stdout, which is reserved for report payloads.

Instrumentation failures are swallowed: a logging problem must never change
a numerical result.
"""

from __future__ import annotations

from collections import defaultdict
import logging
import os
import sys
from threading import Lock
from typing import Any, Dict

from qecgate.runtime.settings import section

_ROOT = "qecgate"
HANDLER_NAME = "qecgate.stderr"


def default_level() -> int:
    """Resolve the log level from ``QECGATE_LOG_LEVEL`` or ``settings.toml``."""
    name = os.getenv("QECGATE_LOG_LEVEL") or str(section("logging").get("level", "WARNING"))
    level = logging.getLevelName(name.upper())
    return level if isinstance(level, int) else logging.WARNING


def configure(level: int | None = None) -> None:
    """Set the level of the package root logger, installing a stderr handler once."""
    root = logging.getLogger(_ROOT)
    if not any(h.get_name() == HANDLER_NAME for h in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.set_name(HANDLER_NAME)
        handler.setFormatter(logging.Formatter("%(asctime)s [%(levelname)s] %(name)s %(message)s"))
        root.addHandler(handler)
        root.propagate = False
    root.setLevel(default_level() if level is None else level)


class TagLogger:
    """Logger supporting tag-style tracking.

    Parameters
    ----------
    component:
        Name of the component using this logger; the underlying logger is
        ``qecgate.<component>``.
    """

    def __init__(self, component: str) -> None:
        self.component = component
        configure_once()
        self.logger = logging.getLogger(f"{_ROOT}.{component}")
        self._metrics: Dict[str, int] = defaultdict(int)
        self._lock = Lock()

    def track(self, tag: str) -> None:
        """Record one occurrence of *tag*."""
        try:
            with self._lock:
                self._metrics[tag] += 1
        except Exception:
            self.logger.exception("Failed to track tag %s", tag)

    def get_metrics(self) -> Dict[str, int]:
        """Return a snapshot of the tag counters."""
        with self._lock:
            return dict(self._metrics)

    def log(self, level: int, event: str, tag: str | None = None, **fields: Any) -> None:
        """Log *event* at *level* with ``key=value`` fields, counting *tag* if given."""
        try:
            message = event
            if fields:
                extras = " ".join(f"{k}={v}" for k, v in fields.items())
                message = f"{message} {extras}"
            if tag:
                message = f"[{tag}] {message}"
                self.track(tag)
            self.logger.log(level, message)
        except Exception:
            self.logger.exception("Logging failure")

    def debug(self, event: str, tag: str | None = None, **fields: Any) -> None:
        self.log(logging.DEBUG, event, tag, **fields)

    def info(self, event: str, tag: str | None = None, **fields: Any) -> None:
        self.log(logging.INFO, event, tag, **fields)

    def warning(self, event: str, tag: str | None = None, **fields: Any) -> None:
        self.log(logging.WARNING, event, tag, **fields)

    def error(self, event: str, tag: str | None = None, **fields: Any) -> None:
        self.log(logging.ERROR, event, tag, **fields)


_configured = False
_configure_lock = Lock()


def configure_once() -> None:
    global _configured
    with _configure_lock:
        if not _configured:
            configure()
            _configured = True


__all__ = ["HANDLER_NAME", "TagLogger", "configure", "default_level"]

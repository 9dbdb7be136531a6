"""In-process metrics for experiment runs.

Values are kept per category and optional tag set, and echoed to the
``qecgate.metrics`` logger at DEBUG level. Categories:

* ``fidelity``    - process fidelity of one experiment
* ``efficiency``  - wall time in seconds
* ``reliability`` - 1 for a completed experiment, 0 for a failed one
"""

from __future__ import annotations

from collections import defaultdict
import logging
import threading
from typing import Any, Dict


class MetricsCollector:
    """Collects and aggregates metrics with optional tags."""

    _VALID_CATEGORIES = {"fidelity", "efficiency", "reliability"}

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._values: Dict[str, list[float]] = defaultdict(list)
        self._logger = logging.getLogger("qecgate.metrics")

    def record(self, category: str, value: float, tags: Dict[str, Any] | None = None) -> None:
        """Record ``value`` under ``category``; unknown categories raise ``ValueError``."""
        if category not in self._VALID_CATEGORIES:
            raise ValueError(f"invalid metric category: {category}")
        key = self._tag_key(category, tags)
        with self._lock:
            self._values[key].append(float(value))
        self._logger.debug("metric %s=%s tags=%s", category, value, tags or {})

    def snapshot(self) -> Dict[str, float]:
        """Mean value per recorded key."""
        with self._lock:
            return {k: sum(v) / len(v) for k, v in self._values.items() if v}

    def count(self, category: str, tags: Dict[str, Any] | None = None) -> int:
        with self._lock:
            return len(self._values.get(self._tag_key(category, tags), []))

    def reset(self) -> None:
        with self._lock:
            self._values.clear()

    @staticmethod
    def _tag_key(category: str, tags: Dict[str, Any] | None) -> str:
        if not tags:
            return category
        tag_str = ",".join(f"{k}={v}" for k, v in sorted(tags.items()))
        return f"{category}|{tag_str}"


# Global collector shared by the experiment runner.
metrics = MetricsCollector()

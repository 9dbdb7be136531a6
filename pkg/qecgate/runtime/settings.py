"""Access to the packaged ``settings.toml`` defaults."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
import tomllib
from typing import Any, Dict


@lru_cache(maxsize=1)
def load_settings() -> Dict[str, Any]:
    """Return the parsed packaged settings.

    The file ships with the package, so a missing or malformed file is a
    packaging defect and is allowed to raise.
    """
    text = resources.files("qecgate.runtime").joinpath("settings.toml").read_text()
    return tomllib.loads(text)


def section(name: str) -> Dict[str, Any]:
    """Return a copy of one settings table, empty when absent."""
    return dict(load_settings().get(name, {}))


__all__ = ["load_settings", "section"]

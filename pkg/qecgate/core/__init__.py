"""Numerical core, logging and the exception hierarchy."""

from .errors import QECError
from .instrumentation import TagLogger

__all__ = ["QECError", "TagLogger"]

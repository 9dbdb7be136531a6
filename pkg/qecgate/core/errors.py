"""Exception hierarchy for the simulator.

All simulator failures derive from :class:`QECError` so that front ends can
separate internal invariant failures from usage errors.
"""

from __future__ import annotations


class QECError(RuntimeError):
    """Base error type. The originating exception, if any, is kept as ``__cause__``."""

    def __init__(self, message: str, *, cause: Exception | None = None) -> None:
        super().__init__(message)
        if cause is not None:
            self.__cause__ = cause


class DimensionMismatch(QECError, ValueError):
    """Operand shapes are incompatible."""


class InvariantViolation(QECError):
    """A value failed one of its construction invariants."""


class EncoderBuildError(QECError):
    """The encoder images are not orthonormal."""


class NonProductDecoding(QECError):
    """Decoding did not leave a register state times a syndrome basis state."""


class SyndromeCollision(QECError):
    """Two error conditions decode to the same syndrome."""


class SingularSystem(QECError):
    """The tomography transfer matrix could not be inverted."""


class ZeroMatrix(QECError, ValueError):
    """A process fidelity was requested for a zero chi matrix."""


__all__ = [
    "QECError",
    "DimensionMismatch",
    "InvariantViolation",
    "EncoderBuildError",
    "NonProductDecoding",
    "SyndromeCollision",
    "SingularSystem",
    "ZeroMatrix",
]

"""The sixteen single-qubit error conditions.

A condition is either ``E`` (no error) or a bit flip ``Bk``, phase flip
``Sk`` or combined flip ``BSk`` on qubit ``k``. Errors are realised as the
phase-free Paulis X, Z and Y; the physical pi rotations differ from these
only by a global phase.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import re

from qecgate.core.qcore import I2, N_QUBITS, X, Y, Z, Array, UnitaryOperator, embed


class ErrorKind(str, Enum):
    E = "E"
    B = "B"
    S = "S"
    BS = "BS"


_PAULI_LABEL = {ErrorKind.E: "I", ErrorKind.B: "X", ErrorKind.S: "Z", ErrorKind.BS: "Y"}
_PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}
_LABEL_RE = re.compile(rf"(BS|B|S)([1-{N_QUBITS}])")


@dataclass(frozen=True, slots=True)
class ErrorCondition:
    """One error condition; ``qubit`` is ``None`` exactly for ``E``."""

    kind: ErrorKind
    qubit: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ErrorKind(self.kind))
        if self.kind is ErrorKind.E:
            if self.qubit is not None:
                raise ValueError("condition E takes no qubit")
        elif self.qubit is None or not 1 <= self.qubit <= N_QUBITS:
            raise ValueError(f"{self.kind.value} needs a qubit in 1..{N_QUBITS}, got {self.qubit}")

    @classmethod
    def parse(cls, label: str) -> "ErrorCondition":
        """Parse a canonical label such as ``"E"``, ``"B1"`` or ``"BS4"``."""
        text = label.strip().upper()
        if text == "E":
            return cls(ErrorKind.E)
        match = _LABEL_RE.fullmatch(text)
        if match:
            return cls(ErrorKind(match.group(1)), int(match.group(2)))
        raise ValueError(f"unknown error condition {label!r}")

    @property
    def label(self) -> str:
        if self.kind is ErrorKind.E:
            return "E"
        return f"{self.kind.value}{self.qubit}"

    @property
    def pauli_label(self) -> str:
        return _PAULI_LABEL[self.kind]

    @property
    def pauli(self) -> Array:
        return _PAULI[self.pauli_label]

    def __str__(self) -> str:
        return self.label


NO_ERROR = ErrorCondition(ErrorKind.E)


def all_conditions() -> tuple[ErrorCondition, ...]:
    """Canonical order: E, B1..B5, S1..S5, BS1..BS5."""
    conditions = [NO_ERROR]
    for kind in (ErrorKind.B, ErrorKind.S, ErrorKind.BS):
        conditions.extend(ErrorCondition(kind, q) for q in range(1, N_QUBITS + 1))
    return tuple(conditions)


LABELS: tuple[str, ...] = tuple(c.label for c in all_conditions())


def error_unitary(c: ErrorCondition) -> UnitaryOperator:
    """E -> identity; Bk, Sk, BSk -> X, Z, Y on qubit k."""
    if c.qubit is None:
        return UnitaryOperator.identity()
    return embed(c.pauli, c.qubit)


def register_action(c: ErrorCondition) -> Array:
    """Action of ``c`` on an unencoded qubit 1; errors elsewhere leave it alone."""
    return c.pauli if c.qubit == 1 else I2


__all__ = [
    "ErrorKind",
    "ErrorCondition",
    "NO_ERROR",
    "LABELS",
    "all_conditions",
    "error_unitary",
    "register_action",
]

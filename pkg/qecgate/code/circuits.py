"""Codewords, encoder/decoder and the encoded logical gates.

The encoder is built column by column from the codewords and the error
structure instead of from a gate netlist::

    U_en (P_a|x> (x) |s_a>) = E_a |x_L>

for every error condition ``a`` and ``x`` in {0, 1}. The :class:`EncoderFrame`
fixes the syndrome ``s_a`` and the register Pauli ``P_a`` each condition
decodes to. Whatever the frame, ``U_en(|x> (x) |0000>) = |x_L>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np

from qecgate.core.errors import EncoderBuildError, InvariantViolation
from qecgate.core.instrumentation import TagLogger
from qecgate.core.qcore import (
    DIM,
    PAULIS,
    Array,
    StateVector,
    UnitaryOperator,
    max_abs,
    ry,
    tensor_all,
)

from .qecerrors import ErrorCondition, all_conditions, error_unitary

_logger = TagLogger("circuits")

ZERO_L_KETS: tuple[tuple[str, int], ...] = (
    ("00000", 1), ("10111", -1), ("01011", -1), ("11100", 1),
    ("10010", 1), ("00101", 1), ("11001", 1), ("01110", 1),
)
ONE_L_KETS: tuple[tuple[str, int], ...] = (
    ("11111", 1), ("01000", -1), ("10100", 1), ("00011", -1),
    ("01101", 1), ("11010", 1), ("00110", -1), ("10001", -1),
)

SYNDROME_BITS = 4
ORTHONORMALITY_ATOL = 1e-9


def _codeword(kets: tuple[tuple[str, int], ...]) -> StateVector:
    amps = np.zeros(DIM, dtype=np.complex128)
    for label, sign in kets:
        amps[int(label, 2)] = sign / np.sqrt(8)
    return StateVector(amps)


def signed_kets(state: StateVector, atol: float = 1e-12) -> list[tuple[str, int]]:
    """List the nonzero ``±1/sqrt(8)`` terms of a codeword as (bits, sign)."""
    terms = []
    for index, amp in enumerate(state.amps):
        if abs(amp) > atol:
            terms.append((format(index, f"0{state.n_qubits}b"), 1 if amp.real > 0 else -1))
    return terms


@dataclass(frozen=True, slots=True)
class CodewordPair:
    zero_L: StateVector
    one_L: StateVector

    def __post_init__(self) -> None:
        overlap = self.zero_L.inner(self.one_L)
        if abs(overlap) > 1e-12:
            raise InvariantViolation(f"codewords are not orthogonal (overlap {overlap!r})")

    def matrix(self) -> Array:
        """32x2 isometry whose columns are ``|0_L>`` and ``|1_L>``."""
        return np.column_stack([self.zero_L.amps, self.one_L.amps])

    def projector(self) -> Array:
        v = self.matrix()
        return v @ v.conj().T

    def logical_block(self, op: Array) -> Array:
        """2x2 matrix of ``op`` in the ordered basis (|0_L>, |1_L>)."""
        v = self.matrix()
        return v.conj().T @ op @ v

    def encode(self, alpha: complex, beta: complex) -> StateVector:
        return StateVector(alpha * self.zero_L.amps + beta * self.one_L.amps)


def codewords() -> CodewordPair:
    return CodewordPair(_codeword(ZERO_L_KETS), _codeword(ONE_L_KETS))


# ---------------------------------------------------------------------------
# Encoder frame and encoder
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class FrameEntry:
    condition: ErrorCondition
    syndrome: str
    pauli: str


@dataclass(frozen=True, slots=True)
class EncoderFrame:
    """Syndrome and register Pauli assigned to each of the 16 conditions."""

    entries: tuple[FrameEntry, ...]

    def __post_init__(self) -> None:
        conditions = {e.condition for e in self.entries}
        if conditions != set(all_conditions()) or len(self.entries) != len(conditions):
            raise InvariantViolation("frame must list each of the 16 conditions exactly once")
        syndromes = [e.syndrome for e in self.entries]
        for s in syndromes:
            if len(s) != SYNDROME_BITS or set(s) - {"0", "1"}:
                raise InvariantViolation(f"invalid syndrome label {s!r}")
        if len(set(syndromes)) != len(syndromes):
            raise InvariantViolation("frame syndromes are not pairwise distinct")
        for e in self.entries:
            if e.pauli not in PAULIS:
                raise InvariantViolation(f"invalid register Pauli {e.pauli!r}")
            if e.condition.qubit is None and (e.syndrome != "0000" or e.pauli != "I"):
                raise InvariantViolation("condition E must map to syndrome 0000 with Pauli I")

    @classmethod
    def default(cls) -> "EncoderFrame":
        """Canonical enumeration; register errors on qubit 1 survive decoding."""
        entries = []
        for index, condition in enumerate(all_conditions()):
            pauli = condition.pauli_label if condition.qubit == 1 else "I"
            entries.append(FrameEntry(condition, format(index, f"0{SYNDROME_BITS}b"), pauli))
        return cls(tuple(entries))

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, tuple[str, str]]) -> "EncoderFrame":
        """Build from ``{label: (syndrome, pauli)}``."""
        return cls(tuple(
            FrameEntry(ErrorCondition.parse(label), syndrome, pauli)
            for label, (syndrome, pauli) in mapping.items()
        ))

    def entry(self, condition: ErrorCondition) -> FrameEntry:
        for e in self.entries:
            if e.condition == condition:
                return e
        raise KeyError(condition.label)


def _syndrome_ket(bits: str) -> Array:
    ket = np.zeros((2**SYNDROME_BITS, 1), dtype=np.complex128)
    ket[int(bits, 2), 0] = 1.0
    return ket


def build_encoder(
    frame: EncoderFrame | None = None, pair: CodewordPair | None = None
) -> UnitaryOperator:
    """Assemble ``U_en`` column-wise; fails if the 32 images are not orthonormal."""
    frame = frame or EncoderFrame.default()
    pair = pair or codewords()
    v = pair.matrix()
    images = []
    u = np.zeros((DIM, DIM), dtype=np.complex128)
    for e in frame.entries:
        image = error_unitary(e.condition).mat @ v
        domain = np.kron(PAULIS[e.pauli], _syndrome_ket(e.syndrome))
        u += image @ domain.conj().T
        images.append(image)
    stacked = np.hstack(images)
    deviation = max_abs(stacked.conj().T @ stacked - np.eye(DIM))
    if deviation > ORTHONORMALITY_ATOL:
        _logger.error("encoder_images_not_orthonormal", tag="encoder", deviation=deviation)
        raise EncoderBuildError(
            f"error images of the codewords are not orthonormal (max deviation {deviation:.3e})"
        )
    _logger.debug("encoder_built", tag="encoder", deviation=deviation)
    return UnitaryOperator(u)


def build_decoder(enc: UnitaryOperator) -> UnitaryOperator:
    return enc.dagger()


# ---------------------------------------------------------------------------
# Logical gates
# ---------------------------------------------------------------------------


def logical_identity() -> UnitaryOperator:
    return UnitaryOperator.identity()


def transversal_ry_pi() -> UnitaryOperator:
    """``Ry(pi)^(x)5`` with ``Ry(pi) = exp(-i pi Y / 2)``; logical block ``-iY``."""
    return UnitaryOperator(tensor_all([ry(np.pi)] * 5))


def logical_not() -> UnitaryOperator:
    """Transversal NOT rephased by ``i`` so that its logical block is Pauli Y.

    This equals ``Y^(x)5`` and gives ``<1_L|N_L|0_L> = i``, ``<0_L|N_L|1_L> = -i``.
    """
    return UnitaryOperator(1j * transversal_ry_pi().mat)


HADAMARD: Array = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)


def logical_hadamard(pair: CodewordPair | None = None) -> UnitaryOperator:
    """Hadamard on span{|0_L>, |1_L>} and identity on the 30-dim complement."""
    pair = pair or codewords()
    v = pair.matrix()
    complement = np.eye(DIM, dtype=np.complex128) - v @ v.conj().T
    return UnitaryOperator(v @ HADAMARD @ v.conj().T + complement)


class LogicalGate(str, Enum):
    ID = "id"
    NOT = "not"
    HAD = "had"

    @classmethod
    def parse(cls, text: str) -> "LogicalGate":
        aliases = {"i": cls.ID, "e": cls.ID, "n": cls.NOT, "h": cls.HAD}
        key = text.strip().lower()
        if key in aliases:
            return aliases[key]
        return cls(key)

    def unitary(self, pair: CodewordPair | None = None) -> UnitaryOperator:
        if self is LogicalGate.NOT:
            return logical_not()
        if self is LogicalGate.HAD:
            return logical_hadamard(pair)
        return logical_identity()

    def ideal(self) -> Array:
        """Single-qubit action of the gate on the logical qubit."""
        return {LogicalGate.ID: PAULIS["I"], LogicalGate.NOT: PAULIS["Y"], LogicalGate.HAD: HADAMARD}[self]


__all__ = [
    "ZERO_L_KETS",
    "ONE_L_KETS",
    "HADAMARD",
    "CodewordPair",
    "EncoderFrame",
    "FrameEntry",
    "LogicalGate",
    "codewords",
    "signed_kets",
    "build_encoder",
    "build_decoder",
    "logical_identity",
    "logical_not",
    "logical_hadamard",
    "transversal_ry_pi",
]

"""Syndrome table derivation, coherent correction and the full pipeline.

The correction table is derived by brute force from whatever encoder is
configured: every condition is injected on encoded probe states, decoded,
and the register action identified as a Pauli. The correction step is then
the block-diagonal unitary ``sum_s C_s (x) |s><s|`` with ``C_s`` on qubit 1
controlled by the syndrome register (qubits 2-5).

Pipeline order: encode, logical gate, error(s), decode, correct, each
followed by the scheduled noise for that stage, then the reduced state of
qubit 1 is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterable, Sequence

import numpy as np

from qecgate.core.errors import InvariantViolation, NonProductDecoding, SyndromeCollision
from qecgate.core.instrumentation import TagLogger
from qecgate.core.qcore import (
    DIM,
    PAULIS,
    Array,
    DensityOperator,
    StateVector,
    UnitaryOperator,
    apply_channel,
    apply_unitary,
    as_array,
    partial_trace,
    tensor,
)
from qecgate.noise import NoiseSchedule, Stage

from .circuits import (
    SYNDROME_BITS,
    CodewordPair,
    EncoderFrame,
    LogicalGate,
    build_decoder,
    build_encoder,
    codewords,
)
from .qecerrors import NO_ERROR, ErrorCondition, all_conditions, error_unitary

_logger = TagLogger("recovery")

DERIVATION_ATOL = 1e-9
N_SYNDROMES = 2**SYNDROME_BITS

_SQRT_HALF = 1 / np.sqrt(2)
PROBE_STATES: tuple[Array, ...] = (
    np.array([1, 0], dtype=np.complex128),
    np.array([0, 1], dtype=np.complex128),
    np.array([_SQRT_HALF, _SQRT_HALF], dtype=np.complex128),
    np.array([_SQRT_HALF, 1j * _SQRT_HALF], dtype=np.complex128),
)


def _ancilla_ket() -> Array:
    ket = np.zeros(N_SYNDROMES, dtype=np.complex128)
    ket[0] = 1.0
    return ket


ANCILLA_PROJECTOR: Array = np.outer(_ancilla_ket(), _ancilla_ket())


@dataclass(frozen=True, slots=True)
class SyndromeEntry:
    syndrome: str
    condition: ErrorCondition
    correction: str
    phase: complex = 1.0 + 0j

    def to_json(self) -> Dict[str, Any]:
        return {
            "syndrome": self.syndrome,
            "condition": self.condition.label,
            "correction": self.correction,
            "phase": [round(self.phase.real, 12) + 0.0, round(self.phase.imag, 12) + 0.0],
        }


@dataclass(frozen=True, slots=True)
class SyndromeTable:
    """Syndrome -> (correction Pauli, originating condition)."""

    entries: tuple[SyndromeEntry, ...]

    def __post_init__(self) -> None:
        syndromes = [e.syndrome for e in self.entries]
        if len(set(syndromes)) != len(syndromes):
            raise SyndromeCollision("syndrome table has repeated syndromes")
        if len(syndromes) != N_SYNDROMES:
            raise InvariantViolation(f"syndrome table needs {N_SYNDROMES} entries, got {len(syndromes)}")
        trivial = self.lookup("0" * SYNDROME_BITS)
        if trivial.correction != "I" or trivial.condition != NO_ERROR:
            raise InvariantViolation("syndrome 0000 must map to correction I and condition E")

    def lookup(self, syndrome: str) -> SyndromeEntry:
        for e in self.entries:
            if e.syndrome == syndrome:
                return e
        raise KeyError(syndrome)

    def for_condition(self, condition: ErrorCondition) -> SyndromeEntry:
        for e in self.entries:
            if e.condition == condition:
                return e
        raise KeyError(condition.label)

    def correction_unitary(self) -> UnitaryOperator:
        c = np.zeros((DIM, DIM), dtype=np.complex128)
        for e in self.entries:
            proj = np.zeros((N_SYNDROMES, N_SYNDROMES), dtype=np.complex128)
            index = int(e.syndrome, 2)
            proj[index, index] = 1.0
            c += np.kron(PAULIS[e.correction], proj)
        return UnitaryOperator(c)

    def to_json(self) -> list[Dict[str, Any]]:
        return [e.to_json() for e in self.entries]


def _identify_pauli(m: Array, atol: float) -> tuple[str, complex] | None:
    """Return (label, phase) with ``m = phase * P``, or ``None``."""
    for label, p in PAULIS.items():
        coeff = complex(np.trace(p.conj().T @ m) / 2)
        if abs(abs(coeff) - 1) <= atol and np.max(np.abs(m - coeff * p)) <= atol:
            return label, coeff
    return None


def derive_syndrome_table(
    enc: UnitaryOperator, dec: UnitaryOperator | None = None, atol: float = DERIVATION_ATOL
) -> SyndromeTable:
    """Brute-force the syndrome and register Pauli of every condition."""
    dec = dec or build_decoder(enc)
    ancilla = _ancilla_ket()
    seen: Dict[int, ErrorCondition] = {}
    entries = []
    for condition in all_conditions():
        channel = dec.mat @ error_unitary(condition).mat @ enc.mat
        syndrome: int | None = None
        register = []
        for psi in PROBE_STATES:
            block = (channel @ np.kron(psi, ancilla)).reshape(2, N_SYNDROMES)
            weights = np.linalg.norm(block, axis=0)
            s = int(np.argmax(weights))
            leaked = float(np.sum(weights**2) - weights[s] ** 2)
            if abs(weights[s] - 1) > atol or leaked > atol:
                raise NonProductDecoding(
                    f"{condition.label}: decoded state is not a register state times a syndrome"
                )
            if syndrome is not None and s != syndrome:
                raise NonProductDecoding(f"{condition.label}: syndrome depends on the input state")
            syndrome = s
            register.append(block[:, s])
        assert syndrome is not None
        found = _identify_pauli(np.column_stack(register[:2]), atol)
        if found is None:
            raise NonProductDecoding(f"{condition.label}: register action is not a Pauli")
        label, phase = found
        for psi, out in zip(PROBE_STATES[2:], register[2:]):
            if np.max(np.abs(out - phase * PAULIS[label] @ psi)) > atol:
                raise NonProductDecoding(f"{condition.label}: global phase depends on the input state")
        if syndrome in seen:
            raise SyndromeCollision(
                f"{condition.label} and {seen[syndrome].label} share syndrome "
                f"{format(syndrome, f'0{SYNDROME_BITS}b')}"
            )
        seen[syndrome] = condition
        # Paulis are self-adjoint, so the correction carries the same label.
        entries.append(SyndromeEntry(format(syndrome, f"0{SYNDROME_BITS}b"), condition, label, phase))
    _logger.debug("syndrome_table_derived", tag="syndromes", entries=len(entries))
    return SyndromeTable(tuple(entries))


def apply_correction(state: StateVector | DensityOperator, table: SyndromeTable) -> Any:
    return apply_unitary(table.correction_unitary(), state)


# ---------------------------------------------------------------------------
# Code context and pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class CodeContext:
    """Everything derived once from an encoder frame."""

    frame: EncoderFrame
    pair: CodewordPair
    encoder: UnitaryOperator
    decoder: UnitaryOperator
    table: SyndromeTable
    correction: UnitaryOperator

    @classmethod
    def build(cls, frame: EncoderFrame | None = None) -> "CodeContext":
        frame = frame or EncoderFrame.default()
        pair = codewords()
        enc = build_encoder(frame, pair)
        dec = build_decoder(enc)
        table = derive_syndrome_table(enc, dec)
        _logger.info("code_context_built", tag="context")
        return cls(frame, pair, enc, dec, table, table.correction_unitary())


@lru_cache(maxsize=1)
def default_context() -> CodeContext:
    return CodeContext.build()


ErrorSpec = ErrorCondition | str | Sequence[ErrorCondition | str]


def _as_errors(error: ErrorSpec) -> tuple[ErrorCondition, ...]:
    if isinstance(error, (ErrorCondition, str)):
        error = [error]
    return tuple(e if isinstance(e, ErrorCondition) else ErrorCondition.parse(e) for e in error)


def _as_input(value: Any) -> DensityOperator:
    if isinstance(value, DensityOperator):
        return value
    if isinstance(value, StateVector):
        return value.density()
    arr = as_array(value)
    if arr.ndim == 1:
        return StateVector(arr).density()
    return DensityOperator.deviation(arr)


def _with_noise(rho: DensityOperator, schedule: NoiseSchedule, stage: Stage) -> DensityOperator:
    for ch in schedule.channels(stage):
        rho = apply_channel(ch, rho)
    return rho


def _evolve(
    ctx: CodeContext,
    gate: LogicalGate,
    errors: Iterable[ErrorCondition],
    rho: DensityOperator,
    schedule: NoiseSchedule,
    *,
    correct: bool = True,
) -> DensityOperator:
    rho = _with_noise(apply_unitary(ctx.encoder, rho), schedule, Stage.AFTER_ENCODE)
    rho = _with_noise(apply_unitary(gate.unitary(ctx.pair), rho), schedule, Stage.AFTER_GATE)
    for e in errors:
        rho = apply_unitary(error_unitary(e), rho)
    rho = _with_noise(rho, schedule, Stage.AFTER_ERROR)
    rho = _with_noise(apply_unitary(ctx.decoder, rho), schedule, Stage.AFTER_DECODE)
    if correct:
        rho = _with_noise(apply_unitary(ctx.correction, rho), schedule, Stage.AFTER_CORRECT)
    return rho


def run_pipeline(
    gate: LogicalGate | str,
    error: ErrorSpec,
    input: Any,
    noise: NoiseSchedule | None = None,
    *,
    context: CodeContext | None = None,
) -> DensityOperator:
    """Encode, gate, inject, decode, correct; return the qubit-1 operator.

    ``input`` is a 2-vector, a :class:`StateVector`, a :class:`DensityOperator`
    or a raw 2x2 operator (taken as a deviation operator). ``error`` may be a
    single condition or a sequence injected in order.
    """
    ctx = context or default_context()
    gate = gate if isinstance(gate, LogicalGate) else LogicalGate.parse(gate)
    rho_in = _as_input(input)
    rho = DensityOperator(tensor(rho_in.mat, ANCILLA_PROJECTOR), physical=rho_in.physical)
    rho = _evolve(ctx, gate, _as_errors(error), rho, noise or NoiseSchedule())
    return partial_trace(rho, {1})


def observe_syndrome(
    gate: LogicalGate | str, error: ErrorSpec, *, context: CodeContext | None = None
) -> str:
    """Most populated syndrome after noiseless decoding of ``|0>``."""
    ctx = context or default_context()
    gate = gate if isinstance(gate, LogicalGate) else LogicalGate.parse(gate)
    rho = StateVector(np.kron(PROBE_STATES[0], _ancilla_ket())).density()
    decoded = _evolve(ctx, gate, _as_errors(error), rho, NoiseSchedule(), correct=False)
    populations = np.real(np.diag(partial_trace(decoded, range(2, 2 + SYNDROME_BITS)).mat))
    return format(int(np.argmax(populations)), f"0{SYNDROME_BITS}b")


@dataclass(frozen=True)
class Pipeline:
    """A configured :func:`run_pipeline`, callable on 2x2 input operators."""

    gate: LogicalGate
    errors: tuple[ErrorCondition, ...] = (NO_ERROR,)
    noise: NoiseSchedule | None = None
    context: CodeContext | None = field(default=None, compare=False)

    def __call__(self, rho_in: Any) -> Array:
        return run_pipeline(self.gate, self.errors, rho_in, self.noise, context=self.context).mat


__all__ = [
    "ANCILLA_PROJECTOR",
    "PROBE_STATES",
    "SyndromeEntry",
    "SyndromeTable",
    "CodeContext",
    "Pipeline",
    "default_context",
    "derive_syndrome_table",
    "apply_correction",
    "run_pipeline",
    "observe_syndrome",
]

"""Tests for syndrome derivation, correction and the end-to-end pipeline."""

from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest

from qecgate.code.circuits import EncoderFrame, LogicalGate, build_encoder
from qecgate.code.qecerrors import ErrorCondition, ErrorKind, all_conditions, error_unitary
from qecgate.code.recovery import (
    CodeContext,
    Pipeline,
    apply_correction,
    default_context,
    derive_syndrome_table,
    observe_syndrome,
    run_pipeline,
)
from qecgate.core.errors import NonProductDecoding, SyndromeCollision
from qecgate.core.qcore import (
    DIM,
    PAULIS,
    StateVector,
    UnitaryOperator,
    is_unitary,
    max_abs,
    partial_trace,
    random_unitary,
    state_fidelity,
)

SQ = 1 / np.sqrt(2)
INPUT_STATES = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([SQ, SQ], dtype=complex),
    "-": np.array([SQ, -SQ], dtype=complex),
    "+i": np.array([SQ, 1j * SQ], dtype=complex),
    "-i": np.array([SQ, -1j * SQ], dtype=complex),
}


def test_default_table_shape() -> None:
    table = default_context().table
    assert len(table.entries) == 16
    assert len({e.syndrome for e in table.entries}) == 16
    trivial = table.lookup("0000")
    assert trivial.correction == "I"
    assert trivial.condition.label == "E"


def test_default_table_corrections() -> None:
    table = default_context().table
    assert table.for_condition(ErrorCondition.parse("B1")).correction == "X"
    assert table.for_condition(ErrorCondition.parse("S1")).correction == "Z"
    assert table.for_condition(ErrorCondition.parse("BS1")).correction == "Y"
    for condition in all_conditions():
        if condition.qubit not in (None, 1):
            assert table.for_condition(condition).correction == "I"


def test_table_matches_frame() -> None:
    ctx = default_context()
    for entry in ctx.frame.entries:
        derived = ctx.table.for_condition(entry.condition)
        assert derived.syndrome == entry.syndrome
        assert derived.correction == entry.pauli


def test_table_json_rows() -> None:
    rows = default_context().table.to_json()
    assert len(rows) == 16
    assert rows[0] == {"syndrome": "0000", "condition": "E", "correction": "I", "phase": [1.0, 0.0]}


def test_apply_correction_examples() -> None:
    table = default_context().table
    psi = INPUT_STATES["+i"]
    b1 = table.for_condition(ErrorCondition.parse("B1"))
    ancilla = StateVector.basis(b1.syndrome).amps
    corrupted = StateVector(np.kron(PAULIS["X"] @ psi, ancilla))
    fixed = apply_correction(corrupted, table)
    assert max_abs(fixed.amps - np.kron(psi, ancilla)) < 1e-12

    clean = StateVector(np.kron(psi, StateVector.basis("0000").amps))
    assert max_abs(apply_correction(clean, table).amps - clean.amps) < 1e-12
    assert is_unitary(table.correction_unitary().mat)


def test_pipeline_examples() -> None:
    out = run_pipeline(LogicalGate.ID, "E", INPUT_STATES["0"])
    assert np.allclose(out.mat, [[1, 0], [0, 0]], atol=1e-10)

    out = run_pipeline(LogicalGate.NOT, "BS4", INPUT_STATES["+"])
    assert state_fidelity(out, INPUT_STATES["-"]) == pytest.approx(1.0, abs=1e-10)

    out = run_pipeline(LogicalGate.HAD, "B5", INPUT_STATES["0"])
    assert state_fidelity(out, INPUT_STATES["+"]) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("gate", list(LogicalGate))
def test_single_errors_are_corrected_perfectly(gate: LogicalGate) -> None:
    ideal = gate.ideal()
    for condition in all_conditions():
        for psi in INPUT_STATES.values():
            out = run_pipeline(gate, condition, psi)
            assert state_fidelity(out, ideal @ psi) == pytest.approx(1.0, abs=1e-10)


def test_syndrome_independent_of_input_state() -> None:
    ctx = default_context()
    for condition in all_conditions():
        expected = ctx.table.for_condition(condition).syndrome
        assert observe_syndrome(LogicalGate.ID, condition) == expected
        for psi in INPUT_STATES.values():
            ket = np.kron(psi, StateVector.basis("0000").amps)
            decoded = ctx.decoder.mat @ (
                error_unitary(condition).mat @ (ctx.encoder.mat @ ket)
            )
            register = partial_trace(StateVector(decoded).density(), range(2, 6))
            assert np.real(register.mat[int(expected, 2), int(expected, 2)]) == pytest.approx(1.0, abs=1e-10)


def test_two_qubit_errors_are_not_all_corrected() -> None:
    worst = 1.0
    for a, b in combinations(range(1, 6), 2):
        errors = [ErrorCondition(ErrorKind.B, a), ErrorCondition(ErrorKind.B, b)]
        for psi in INPUT_STATES.values():
            out = run_pipeline(LogicalGate.ID, errors, psi)
            worst = min(worst, state_fidelity(out, psi))
    assert worst < 1 - 1e-3


def test_deviation_inputs_pass_through() -> None:
    out = run_pipeline(LogicalGate.NOT, "S3", PAULIS["X"])
    # Y X Y = -X
    assert max_abs(out.mat + PAULIS["X"]) < 1e-10
    assert out.physical is False


def test_pipeline_object_is_callable() -> None:
    pipeline = Pipeline(LogicalGate.HAD, (ErrorCondition.parse("BS2"),))
    assert max_abs(pipeline(PAULIS["Z"]) - PAULIS["X"]) < 1e-10


def test_identity_encoder_collides() -> None:
    with pytest.raises(SyndromeCollision):
        derive_syndrome_table(UnitaryOperator.identity())


def test_random_encoder_is_not_a_product_decoder() -> None:
    enc = UnitaryOperator(random_unitary(DIM, np.random.default_rng(11)))
    with pytest.raises(NonProductDecoding):
        derive_syndrome_table(enc)


def test_custom_frame_context() -> None:
    conditions = all_conditions()
    mapping = {"E": ("0000", "I")}
    for index, condition in enumerate(conditions[1:], start=1):
        mapping[condition.label] = (format(16 - index, "04b"), "Z" if condition.qubit == 1 else "I")
    frame = EncoderFrame.from_mapping(mapping)
    ctx = CodeContext.build(frame)
    assert ctx.table.for_condition(ErrorCondition.parse("B1")).syndrome == "1111"
    assert ctx.table.for_condition(ErrorCondition.parse("B1")).correction == "Z"
    assert max_abs(ctx.encoder.mat - build_encoder(frame).mat) < 1e-12
    for psi in (INPUT_STATES["0"], INPUT_STATES["+i"]):
        out = run_pipeline(LogicalGate.HAD, "S1", psi, context=ctx)
        assert state_fidelity(out, LogicalGate.HAD.ideal() @ psi) == pytest.approx(1.0, abs=1e-10)

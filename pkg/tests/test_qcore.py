"""Tests for :mod:`qecgate.core.qcore`."""

from __future__ import annotations

import numpy as np
import pytest

from qecgate.code.circuits import codewords
from qecgate.core.errors import DimensionMismatch, InvariantViolation
from qecgate.core.qcore import (
    DIM,
    I2,
    X,
    Y,
    Z,
    DensityOperator,
    KrausChannel,
    StateVector,
    UnitaryOperator,
    apply_channel,
    apply_unitary,
    embed,
    embed_operator,
    is_unitary,
    max_abs,
    partial_trace,
    random_unitary,
    ry,
    tensor,
    tensor_all,
)
from qecgate.noise import depolarizing_channel, dephasing_channel

P0 = np.zeros((16, 16), dtype=complex)
P0[0, 0] = 1.0


def _random_state(n_qubits: int, rng: np.random.Generator) -> DensityOperator:
    psi = rng.standard_normal(2**n_qubits) + 1j * rng.standard_normal(2**n_qubits)
    psi /= np.linalg.norm(psi)
    return StateVector(psi).density()


def test_tensor_identity_and_basis() -> None:
    assert np.array_equal(tensor(I2, I2), np.eye(4))
    ket0 = np.array([1, 0])
    assert np.array_equal(tensor(ket0, ket0), [1, 0, 0, 0])


def test_tensor_of_ry_pi_matches_direct_expansion() -> None:
    out = tensor(ry(np.pi), ry(np.pi))
    assert max_abs(out - np.kron(-1j * Y, -1j * Y)) < 1e-12
    # Ry(pi) = [[0, -1], [1, 0]], so the [3, 0] entry is Ry[1, 0] * Ry[1, 0].
    assert abs(out[3, 0] - 1.0) < 1e-12


def test_embed_examples() -> None:
    assert np.array_equal(embed(I2, 3).mat, np.eye(DIM))
    flipped = apply_unitary(embed(X, 1), StateVector.basis("00000"))
    assert flipped.amplitude("10000") == 1

    zero_l = codewords().zero_L
    out = apply_unitary(embed(Z, 5), zero_l)
    assert abs(out.amplitude("10111") - 1 / np.sqrt(8)) < 1e-12
    assert abs(out.amplitude("00000") - 1 / np.sqrt(8)) < 1e-12


@pytest.mark.parametrize("qubit", [0, 6])
def test_embed_rejects_out_of_range_qubit(qubit: int) -> None:
    with pytest.raises(ValueError):
        embed(X, qubit)


def test_embed_consistent_with_tensor_on_all_basis_vectors() -> None:
    for qubit in range(1, 6):
        ops = [I2] * 5
        ops[qubit - 1] = Y
        reference = tensor_all(ops)
        embedded = embed_operator(Y, qubit)
        for index in range(DIM):
            ket = np.zeros(DIM, dtype=complex)
            ket[index] = 1
            assert max_abs(embedded @ ket - reference @ ket) < 1e-12


def test_apply_unitary_identity_and_commuting_conjugation() -> None:
    rng = np.random.default_rng(1)
    rho = _random_state(5, rng)
    assert max_abs(apply_unitary(UnitaryOperator.identity(), rho).mat - rho.mat) < 1e-12

    x1 = DensityOperator.deviation(tensor(X, P0))
    out = apply_unitary(embed(X, 1), x1)
    assert max_abs(out.mat - x1.mat) < 1e-12
    assert out.physical is False


def test_apply_unitary_dimension_mismatch() -> None:
    with pytest.raises(DimensionMismatch):
        apply_unitary(UnitaryOperator.identity(4), StateVector.basis("00000"))


def test_apply_channel_examples() -> None:
    rng = np.random.default_rng(2)
    rho = _random_state(5, rng)
    assert max_abs(apply_channel(KrausChannel.identity(), rho).mat - rho.mat) < 1e-12

    x1 = DensityOperator.deviation(tensor(X, P0))
    assert max_abs(apply_channel(dephasing_channel(0.5, 1), x1).mat) < 1e-12

    p = 0.2
    out = apply_channel(depolarizing_channel(p, 1), x1)
    assert max_abs(out.mat - (1 - 4 * p / 3) * x1.mat) < 1e-12


def test_single_unitary_kraus_matches_conjugation() -> None:
    rng = np.random.default_rng(3)
    u = UnitaryOperator(random_unitary(DIM, rng))
    rho = _random_state(5, rng)
    via_channel = apply_channel(KrausChannel.from_unitary(u), rho)
    assert max_abs(via_channel.mat - apply_unitary(u, rho).mat) < 1e-12


def test_partial_trace_examples() -> None:
    zero = partial_trace(StateVector.basis("00000").density(), {1})
    assert np.allclose(zero.mat, [[1, 0], [0, 0]])

    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    state = StateVector(np.kron(bell, StateVector.basis("000").amps))
    assert max_abs(partial_trace(state.density(), {1}).mat - I2 / 2) < 1e-12

    psi = np.array([np.cos(0.3), np.exp(0.7j) * np.sin(0.3)])
    gpsi = ry(1.1) @ psi
    product = StateVector(np.kron(gpsi, StateVector.basis("0110").amps))
    assert max_abs(partial_trace(product.density(), {1}).mat - np.outer(gpsi, gpsi.conj())) < 1e-12


def test_partial_trace_rejects_empty_keep() -> None:
    with pytest.raises(ValueError):
        partial_trace(StateVector.basis("00000").density(), set())


def test_partial_trace_of_product_scales_by_trace() -> None:
    rng = np.random.default_rng(4)
    rho = _random_state(1, rng)
    sigma = 0.5 * _random_state(4, rng).mat
    joint = DensityOperator.deviation(np.kron(rho.mat, sigma))
    reduced = partial_trace(joint, {1})
    assert max_abs(reduced.mat - np.trace(sigma) * rho.mat) < 1e-12


def test_unitarity_preserved_under_products() -> None:
    rng = np.random.default_rng(5)
    for _ in range(10):
        u = UnitaryOperator(random_unitary(DIM, rng))
        v = UnitaryOperator(random_unitary(DIM, rng))
        assert is_unitary((u @ v).mat, 1e-10)


def test_tensor_associativity() -> None:
    rng = np.random.default_rng(6)
    a, b, c = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(3))
    assert max_abs(tensor(tensor(a, b), c) - tensor(a, tensor(b, c))) < 1e-12


def test_value_type_invariants() -> None:
    with pytest.raises(InvariantViolation):
        StateVector(np.array([1.0, 1.0]))
    with pytest.raises(InvariantViolation):
        DensityOperator(np.array([[0.5, 1.0], [0.0, 0.5]]))
    with pytest.raises(InvariantViolation):
        DensityOperator(np.diag([1.5, -0.5]))
    with pytest.raises(InvariantViolation):
        UnitaryOperator(np.diag([1.0, 2.0]))
    with pytest.raises(InvariantViolation):
        KrausChannel((0.5 * np.eye(2),))
    # Deviation operators skip trace and positivity checks.
    assert DensityOperator.deviation(Z).trace() == 0


def test_values_are_read_only() -> None:
    state = StateVector.basis("00000")
    with pytest.raises(ValueError):
        state.amps[0] = 0

"""Dense complex linear algebra over small multi-qubit Hilbert spaces.

Basis ordering follows the ket notation ``|b1 b2 b3 b4 b5>``: qubit 1 is the
most significant bit of the basis index. All value types are immutable; the
wrapped arrays are marked read-only after validation.

Tolerances default to :data:`ATOL` and may be overridden process-wide with
the ``QECGATE_ATOL`` environment variable or per call.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
import os
from typing import Any, Iterable, Sequence

import numpy as np
import numpy.typing as npt

from .errors import DimensionMismatch, InvariantViolation

Array = npt.NDArray[np.complex128]

N_QUBITS = 5
DIM = 2**N_QUBITS
ATOL = 1e-10
PSD_ATOL = 1e-9

I2: Array = np.eye(2, dtype=np.complex128)
X: Array = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y: Array = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z: Array = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS: dict[str, Array] = {"I": I2, "X": X, "Y": Y, "Z": Z}

for _m in (I2, X, Y, Z):
    _m.setflags(write=False)


def tolerance(atol: float | None = None) -> float:
    """Return *atol* or the process default."""
    if atol is not None:
        return float(atol)
    return float(os.getenv("QECGATE_ATOL", ATOL))


def _frozen(a: Any) -> Array:
    arr = np.array(a, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


def _n_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two")
    return n


def as_array(value: Any) -> Array:
    """Unwrap value types to their ndarray, leaving arrays untouched."""
    for attr in ("mat", "amps"):
        inner = getattr(value, attr, None)
        if inner is not None:
            return np.asarray(inner, dtype=np.complex128)
    return np.asarray(value, dtype=np.complex128)


def max_abs(a: Any) -> float:
    arr = as_array(a)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def is_unitary(mat: Any, atol: float | None = None) -> bool:
    m = as_array(mat)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return max_abs(m @ m.conj().T - np.eye(m.shape[0])) <= tolerance(atol)


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class StateVector:
    """Unit-norm pure state over ``log2(len(amps))`` qubits."""

    amps: Array

    def __post_init__(self) -> None:
        amps = _frozen(self.amps)
        if amps.ndim != 1:
            raise DimensionMismatch(f"state vector must be 1-D, got shape {amps.shape}")
        _n_qubits(amps.shape[0])
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > tolerance():
            raise InvariantViolation(f"state vector norm^2 {norm!r} differs from 1")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def basis(cls, label: str) -> "StateVector":
        """Computational basis ket for a bit string such as ``"10111"``."""
        if not label or set(label) - {"0", "1"}:
            raise ValueError(f"invalid basis label {label!r}")
        amps = np.zeros(2 ** len(label), dtype=np.complex128)
        amps[int(label, 2)] = 1.0
        return cls(amps)

    @property
    def n_qubits(self) -> int:
        return _n_qubits(self.amps.shape[0])

    def amplitude(self, label: str) -> complex:
        return complex(self.amps[int(label, 2)])

    def inner(self, other: "StateVector") -> complex:
        """Return ``<self|other>``."""
        if other.amps.shape != self.amps.shape:
            raise DimensionMismatch("inner product of states of different dimension")
        return complex(np.vdot(self.amps, other.amps))

    def density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amps, self.amps.conj()))


@dataclass(frozen=True, slots=True)
class DensityOperator:
    """Hermitian operator; ``physical`` distinguishes states from deviation operators.

    Physical states additionally satisfy unit trace and positivity. Deviation
    operators (for instance ``X (x) |0000><0000|``) are linear tomography
    inputs and carry no trace or positivity constraint.
    """

    mat: Array
    physical: bool = True

    def __post_init__(self) -> None:
        mat = _frozen(self.mat)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"operator must be square, got shape {mat.shape}")
        _n_qubits(mat.shape[0])
        tol = tolerance()
        if max_abs(mat - mat.conj().T) > tol:
            raise InvariantViolation("operator is not Hermitian")
        if self.physical:
            tr = complex(np.trace(mat))
            if abs(tr - 1.0) > tol:
                raise InvariantViolation(f"physical state has trace {tr!r}")
            if float(np.min(np.linalg.eigvalsh(mat))) < -PSD_ATOL:
                raise InvariantViolation("physical state is not positive semidefinite")
        object.__setattr__(self, "mat", mat)

    @classmethod
    def deviation(cls, mat: Any) -> "DensityOperator":
        return cls(mat, physical=False)

    @property
    def dim(self) -> int:
        return int(self.mat.shape[0])

    @property
    def n_qubits(self) -> int:
        return _n_qubits(self.dim)

    def trace(self) -> complex:
        return complex(np.trace(self.mat))


@dataclass(frozen=True, slots=True)
class UnitaryOperator:
    """Square unitary matrix on ``log2(d)`` qubits."""

    mat: Array

    def __post_init__(self) -> None:
        mat = _frozen(self.mat)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"operator must be square, got shape {mat.shape}")
        _n_qubits(mat.shape[0])
        deviation = max_abs(mat @ mat.conj().T - np.eye(mat.shape[0]))
        if deviation > tolerance():
            raise InvariantViolation(f"operator is not unitary (max deviation {deviation:.3e})")
        object.__setattr__(self, "mat", mat)

    @classmethod
    def identity(cls, dim: int = DIM) -> "UnitaryOperator":
        return cls(np.eye(dim, dtype=np.complex128))

    @property
    def dim(self) -> int:
        return int(self.mat.shape[0])

    def dagger(self) -> "UnitaryOperator":
        return UnitaryOperator(self.mat.conj().T)

    def __matmul__(self, other: "UnitaryOperator") -> "UnitaryOperator":
        if other.dim != self.dim:
            raise DimensionMismatch(f"cannot compose {self.dim}x{self.dim} with {other.dim}x{other.dim}")
        return UnitaryOperator(self.mat @ other.mat)


@dataclass(frozen=True, slots=True)
class KrausChannel:
    """Trace-preserving channel given by its Kraus operators."""

    kraus_ops: tuple[Array, ...]

    def __post_init__(self) -> None:
        ops = tuple(_frozen(k) for k in self.kraus_ops)
        if not ops:
            raise InvariantViolation("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or shape[0] != shape[1] or any(k.shape != shape for k in ops):
            raise DimensionMismatch("Kraus operators must be square and of equal shape")
        _n_qubits(shape[0])
        completeness = sum(k.conj().T @ k for k in ops)
        if max_abs(completeness - np.eye(shape[0])) > tolerance():
            raise InvariantViolation("Kraus operators are not trace preserving")
        object.__setattr__(self, "kraus_ops", ops)

    @classmethod
    def identity(cls, dim: int = DIM) -> "KrausChannel":
        return cls((np.eye(dim, dtype=np.complex128),))

    @classmethod
    def from_unitary(cls, u: UnitaryOperator) -> "KrausChannel":
        return cls((u.mat,))

    @property
    def dim(self) -> int:
        return int(self.kraus_ops[0].shape[0])

    def then(self, other: "KrausChannel") -> "KrausChannel":
        """Channel applying ``self`` first and ``other`` second."""
        if other.dim != self.dim:
            raise DimensionMismatch("cannot compose channels of different dimension")
        return KrausChannel(tuple(b @ a for a in self.kraus_ops for b in other.kraus_ops))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def tensor(a: Any, b: Any) -> Array:
    """Kronecker product with ``a``'s indices most significant."""
    return np.kron(as_array(a), as_array(b))


def tensor_all(ops: Sequence[Any]) -> Array:
    if not ops:
        raise ValueError("tensor_all needs at least one operand")
    return reduce(tensor, ops[1:], as_array(ops[0]))


def embed_operator(op: Any, qubit: int, n_qubits: int = N_QUBITS) -> Array:
    """Place a 2x2 operator on ``qubit`` (1-based) with identities elsewhere."""
    m = as_array(op)
    if m.shape != (2, 2):
        raise DimensionMismatch(f"single-qubit operator must be 2x2, got {m.shape}")
    if not 1 <= qubit <= n_qubits:
        raise ValueError(f"qubit index {qubit} outside 1..{n_qubits}")
    left = np.eye(2 ** (qubit - 1), dtype=np.complex128)
    right = np.eye(2 ** (n_qubits - qubit), dtype=np.complex128)
    return np.kron(np.kron(left, m), right)


def embed(op: Any, qubit: int, n_qubits: int = N_QUBITS) -> UnitaryOperator:
    """Embed a single-qubit unitary into the register."""
    return UnitaryOperator(embed_operator(op, qubit, n_qubits))


def apply_unitary(u: UnitaryOperator, s: StateVector | DensityOperator) -> Any:
    """``U|s>`` for vectors, ``U rho U^dag`` for operators."""
    if isinstance(s, StateVector):
        if s.amps.shape[0] != u.dim:
            raise DimensionMismatch(f"unitary of dim {u.dim} applied to state of dim {s.amps.shape[0]}")
        return StateVector(u.mat @ s.amps)
    if s.dim != u.dim:
        raise DimensionMismatch(f"unitary of dim {u.dim} applied to operator of dim {s.dim}")
    return DensityOperator(u.mat @ s.mat @ u.mat.conj().T, physical=s.physical)


def apply_channel(ch: KrausChannel, rho: DensityOperator) -> DensityOperator:
    """``sum_k K_k rho K_k^dag``; linear, so deviation operators pass through too."""
    if rho.dim != ch.dim:
        raise DimensionMismatch(f"channel of dim {ch.dim} applied to operator of dim {rho.dim}")
    out = np.zeros_like(rho.mat)
    for k in ch.kraus_ops:
        out = out + k @ rho.mat @ k.conj().T
    return DensityOperator(out, physical=rho.physical)


def partial_trace(rho: DensityOperator, keep: Iterable[int]) -> DensityOperator:
    """Reduced operator on the 1-based qubits in ``keep``, in ascending order."""
    n = rho.n_qubits
    kept = sorted(set(keep))
    if not kept:
        raise ValueError("partial_trace needs at least one qubit to keep")
    if kept[0] < 1 or kept[-1] > n:
        raise ValueError(f"qubits {kept} outside 1..{n}")
    t = rho.mat.reshape((2,) * (2 * n))
    remaining = n
    for q in reversed(range(n)):
        if q + 1 not in kept:
            t = np.trace(t, axis1=q, axis2=q + remaining)
            remaining -= 1
    d = 2 ** len(kept)
    return DensityOperator(t.reshape(d, d), physical=rho.physical)


# ---------------------------------------------------------------------------
# Helpers shared by the higher layers
# ---------------------------------------------------------------------------


def ry(theta: float) -> Array:
    """``exp(-i theta Y / 2)``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def state_fidelity(rho: Any, psi: Any) -> float:
    """``<psi|rho|psi>`` for a pure target state."""
    v = as_array(psi)
    return float(np.real(np.vdot(v, as_array(rho) @ v)))


def random_unitary(dim: int, rng: np.random.Generator) -> Array:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return np.asarray(q * (d / np.abs(d)), dtype=np.complex128)


__all__ = [
    "Array",
    "ATOL",
    "DIM",
    "N_QUBITS",
    "I2",
    "X",
    "Y",
    "Z",
    "PAULIS",
    "StateVector",
    "DensityOperator",
    "UnitaryOperator",
    "KrausChannel",
    "tensor",
    "tensor_all",
    "embed",
    "embed_operator",
    "apply_unitary",
    "apply_channel",
    "partial_trace",
    "ry",
    "state_fidelity",
    "random_unitary",
    "is_unitary",
    "max_abs",
    "as_array",
    "tolerance",
]

"""Single-qubit process tomography.

A process is written as ``rho -> sum_kl chi_kl e_k rho e_l^dag`` over the
fixed operator basis ``(E, X, -iY, Z)``. Responses are gathered either from
the Pauli deviation operators E, X, Y, Z (ensemble-style inputs) or from the
four pure states |0>, |1>, |+>, |+i>; both yield the same χ for a linear
process. Reconstruction is an exact 16x16 linear solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Dict, Sequence

import numpy as np

from qecgate.core.errors import DimensionMismatch, SingularSystem, ZeroMatrix
from qecgate.core.qcore import I2, X, Y, Z, Array, max_abs
from qecgate.code.circuits import LogicalGate

BASIS_LABELS: tuple[str, ...] = ("E", "X", "-iY", "Z")
CHI_BASIS: tuple[Array, ...] = (I2, X, -1j * Y, Z)
INPUT_LABELS: tuple[str, ...] = ("E", "X", "Y", "Z")
INPUT_OPERATORS: tuple[Array, ...] = (I2, X, Y, Z)

MAX_CONDITION = 1e12

Process = Callable[[Array], Array]


def _transfer_matrix() -> Array:
    """Row ``4m + 2i + j``, column ``4k + l``: entry ``(e_k P_m e_l^dag)[i, j]``."""
    t = np.zeros((16, 16), dtype=np.complex128)
    for m, p in enumerate(INPUT_OPERATORS):
        for k, ek in enumerate(CHI_BASIS):
            for l, el in enumerate(CHI_BASIS):
                t[4 * m:4 * m + 4, 4 * k + l] = (ek @ p @ el.conj().T).reshape(4)
    return t


TRANSFER: Array = _transfer_matrix()
TRANSFER.setflags(write=False)


@dataclass(frozen=True, slots=True)
class ChiMatrix:
    """4x4 process matrix in the basis :data:`BASIS_LABELS`."""

    chi: Array

    def __post_init__(self) -> None:
        chi = np.array(self.chi, dtype=np.complex128, copy=True)
        if chi.shape != (4, 4):
            raise DimensionMismatch(f"chi matrix must be 4x4, got {chi.shape}")
        chi.setflags(write=False)
        object.__setattr__(self, "chi", chi)

    def __getitem__(self, index: tuple[int, int]) -> complex:
        """1-based element access, ``chi[2, 4]`` is the (X, Z) entry."""
        k, l = index
        return complex(self.chi[k - 1, l - 1])

    def is_hermitian(self, atol: float = 1e-9) -> bool:
        return max_abs(self.chi - self.chi.conj().T) <= atol

    def trace(self) -> complex:
        return complex(np.trace(self.chi))

    def apply(self, rho: Array) -> Array:
        out = np.zeros((2, 2), dtype=np.complex128)
        for k, ek in enumerate(CHI_BASIS):
            for l, el in enumerate(CHI_BASIS):
                out += self.chi[k, l] * ek @ rho @ el.conj().T
        return out

    def to_json(self) -> Dict[str, Any]:
        return {
            "basis": list(BASIS_LABELS),
            "chi": [
                [[_clean(v.real), _clean(v.imag)] for v in row] for row in self.chi
            ],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "ChiMatrix":
        if list(data.get("basis", BASIS_LABELS)) != list(BASIS_LABELS):
            raise ValueError(f"unsupported chi basis {data.get('basis')!r}")
        return cls(np.array([[complex(re, im) for re, im in row] for row in data["chi"]]))


def _clean(x: float, digits: int = 12) -> float:
    # Rounding keeps serialised reports stable across BLAS builds; +0.0 drops "-0.0".
    return round(float(x), digits) + 0.0


@dataclass(frozen=True, slots=True)
class OperatorResponses:
    """Outputs ``Λ(E), Λ(X), Λ(Y), Λ(Z)`` of the process."""

    responses: tuple[Array, Array, Array, Array]
    identity_measured: bool = True

    def __post_init__(self) -> None:
        frozen = []
        for r in self.responses:
            arr = np.array(r, dtype=np.complex128, copy=True)
            if arr.shape != (2, 2):
                raise DimensionMismatch(f"responses must be 2x2, got {arr.shape}")
            arr.setflags(write=False)
            frozen.append(arr)
        if len(frozen) != 4:
            raise DimensionMismatch("exactly four responses are required")
        object.__setattr__(self, "responses", tuple(frozen))

    def __getitem__(self, label: str) -> Array:
        return self.responses[INPUT_LABELS.index(label)]

    @property
    def unitality_gap(self) -> float:
        """``max|Λ(E) - E|``; zero when Λ(E) was assumed rather than measured."""
        return max_abs(self.responses[0] - I2)


def measure_responses(process: Process, include_identity: bool = True) -> OperatorResponses:
    """Feed E, X, Y, Z through ``process``.

    With ``include_identity`` cleared, Λ(E) = E is assumed instead of computed,
    as is customary when the identity component is time independent.
    """
    identity = process(I2) if include_identity else I2
    return OperatorResponses(
        (identity, process(X), process(Y), process(Z)), identity_measured=include_identity
    )


_KET0 = np.array([1, 0], dtype=np.complex128)
_KET1 = np.array([0, 1], dtype=np.complex128)
_PLUS = np.array([1, 1], dtype=np.complex128) / np.sqrt(2)
_PLUS_I = np.array([1, 1j], dtype=np.complex128) / np.sqrt(2)
PROBE_DENSITIES: tuple[Array, ...] = tuple(np.outer(v, v.conj()) for v in (_KET0, _KET1, _PLUS, _PLUS_I))


def measure_responses_from_states(process: Process) -> OperatorResponses:
    """Recover the Pauli responses from the pure inputs |0>, |1>, |+>, |+i>."""
    r0, r1, rp, ri = (process(rho) for rho in PROBE_DENSITIES)
    identity = r0 + r1
    return OperatorResponses((identity, 2 * rp - identity, 2 * ri - identity, r0 - r1))


def responses_of_unitary(v: Array) -> OperatorResponses:
    return measure_responses(lambda rho: v @ rho @ v.conj().T)


def chi_from_responses(r: OperatorResponses) -> ChiMatrix:
    """Solve ``Λ(P_m) = sum_kl chi_kl e_k P_m e_l^dag`` for the 16 unknowns."""
    rhs = np.concatenate([resp.reshape(4) for resp in r.responses])
    if not np.all(np.isfinite(rhs)):
        raise SingularSystem("responses contain non-finite values")
    try:
        if np.linalg.cond(TRANSFER) > MAX_CONDITION:
            raise SingularSystem("tomography transfer matrix is ill conditioned")
        solution = np.linalg.solve(TRANSFER, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem("tomography transfer matrix is singular", cause=exc)
    return ChiMatrix(solution.reshape(4, 4))


def chi_of_unitary(v: Array) -> ChiMatrix:
    """Analytic ``chi = c c^dag`` with ``c_k = Tr(e_k^dag V) / 2``."""
    c = np.array([np.trace(e.conj().T @ v) / 2 for e in CHI_BASIS], dtype=np.complex128)
    return ChiMatrix(np.outer(c, c.conj()))


def ideal_chi(gate: LogicalGate | str) -> ChiMatrix:
    gate = gate if isinstance(gate, LogicalGate) else LogicalGate.parse(gate)
    return chi_of_unitary(gate.ideal())


def process_fidelity(a: ChiMatrix, b: ChiMatrix) -> float:
    """``|Tr(a b^dag)| / sqrt(Tr(a a^dag) Tr(b b^dag))``, clipped to [0, 1]."""
    num = abs(np.trace(a.chi @ b.chi.conj().T))
    den = np.sqrt(np.real(np.trace(a.chi @ a.chi.conj().T)) * np.real(np.trace(b.chi @ b.chi.conj().T)))
    if den <= 1e-300:
        raise ZeroMatrix("process fidelity is undefined for a zero chi matrix")
    return float(min(1.0, max(0.0, num / den)))


def mix_responses(parts: Sequence[tuple[float, OperatorResponses]]) -> OperatorResponses:
    """Convex combination of response sets."""
    total = [sum(w * r.responses[i] for w, r in parts) for i in range(4)]
    return OperatorResponses((total[0], total[1], total[2], total[3]))


__all__ = [
    "BASIS_LABELS",
    "CHI_BASIS",
    "INPUT_LABELS",
    "ChiMatrix",
    "OperatorResponses",
    "Process",
    "measure_responses",
    "measure_responses_from_states",
    "responses_of_unitary",
    "chi_from_responses",
    "chi_of_unitary",
    "ideal_chi",
    "process_fidelity",
    "mix_responses",
]

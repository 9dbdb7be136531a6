"""Kraus noise channels and per-stage noise schedules.

Noise is digitised: ideal unitary stages run instantaneously and the
scheduled channels act between them. A schedule maps each stage to a
per-qubit :class:`ChannelSpec`. Schedules are pydantic models so they can be
loaded from JSON or YAML and validated in one place.
"""

from __future__ import annotations

from enum import Enum
import json
import math
from pathlib import Path
from typing import Any, Dict, Literal, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from qecgate.core.qcore import N_QUBITS, X, Y, Z, KrausChannel, embed_operator

try:
    import yaml  # type: ignore
except Exception:  # pragma: no cover - optional dependency
    yaml = None


class Stage(str, Enum):
    AFTER_ENCODE = "after_encode"
    AFTER_GATE = "after_gate"
    AFTER_ERROR = "after_error"
    AFTER_DECODE = "after_decode"
    AFTER_CORRECT = "after_correct"


# Stages that share the experiment duration when noise is derived from T2*.
TIMED_STAGES: tuple[Stage, ...] = (
    Stage.AFTER_ENCODE,
    Stage.AFTER_GATE,
    Stage.AFTER_ERROR,
    Stage.AFTER_DECODE,
)


def _check_probability(p: float, upper: float = 1.0) -> float:
    p = float(p)
    if not 0.0 <= p <= upper:
        raise ValueError(f"probability {p} outside [0, {upper}]")
    return p


def dephasing_channel(p: float, qubit: int) -> KrausChannel:
    """``(1 - p) rho + p Z rho Z`` on ``qubit``."""
    p = _check_probability(p)
    return KrausChannel((
        np.sqrt(1 - p) * embed_operator(np.eye(2), qubit),
        np.sqrt(p) * embed_operator(Z, qubit),
    ))


def depolarizing_channel(p: float, qubit: int) -> KrausChannel:
    """``(1 - p) rho + p/3 (X rho X + Y rho Y + Z rho Z)`` on ``qubit``.

    Transverse and longitudinal components contract by ``1 - 4p/3``; the
    channel is fully depolarising at ``p = 3/4``.
    """
    p = _check_probability(p)
    return KrausChannel((
        np.sqrt(1 - p) * embed_operator(np.eye(2), qubit),
        np.sqrt(p / 3) * embed_operator(X, qubit),
        np.sqrt(p / 3) * embed_operator(Y, qubit),
        np.sqrt(p / 3) * embed_operator(Z, qubit),
    ))


def p_from_t2(t: float, t2: float) -> float:
    """Dephasing probability ``(1 - exp(-t / T2*)) / 2`` after ``t`` ms."""
    if t2 <= 0:
        raise ValueError(f"T2* must be positive, got {t2}")
    if t < 0:
        raise ValueError(f"duration must be non-negative, got {t}")
    return (1.0 - math.exp(-t / t2)) / 2.0


class ChannelSpec(BaseModel):
    """Single-qubit channel applied at one stage."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["none", "dephasing", "depolarizing"] = "none"
    p: float = Field(0.0, ge=0.0, le=1.0)

    def channel(self, qubit: int) -> KrausChannel | None:
        if self.kind == "none" or self.p == 0.0:
            return None
        if self.kind == "dephasing":
            return dephasing_channel(self.p, qubit)
        return depolarizing_channel(self.p, qubit)


QubitChannels = Dict[int, ChannelSpec]


class NoiseSchedule(BaseModel):
    """Per-stage, per-qubit channel specification.

    Keys of each stage map are 1-based qubit indices; JSON string keys such
    as ``"1"`` are accepted.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    after_encode: QubitChannels = Field(default_factory=dict)
    after_gate: QubitChannels = Field(default_factory=dict)
    after_error: QubitChannels = Field(default_factory=dict)
    after_decode: QubitChannels = Field(default_factory=dict)
    after_correct: QubitChannels = Field(default_factory=dict)

    @field_validator("*")
    @classmethod
    def _qubits_in_range(cls, value: QubitChannels) -> QubitChannels:
        for qubit in value:
            if not 1 <= qubit <= N_QUBITS:
                raise ValueError(f"qubit {qubit} outside 1..{N_QUBITS}")
        return value

    # -- construction ---------------------------------------------------

    @classmethod
    def noiseless(cls) -> "NoiseSchedule":
        return cls()

    @classmethod
    def uniform(
        cls,
        kind: Literal["dephasing", "depolarizing"],
        p: float,
        stages: Sequence[Stage] = TIMED_STAGES,
        qubits: Sequence[int] = tuple(range(1, N_QUBITS + 1)),
    ) -> "NoiseSchedule":
        """Same channel on every listed qubit at every listed stage."""
        spec = ChannelSpec(kind=kind, p=p)
        per_qubit = {q: spec for q in qubits}
        return cls(**{Stage(s).value: dict(per_qubit) for s in stages})

    @classmethod
    def from_t2(cls, t2_ms: float | Sequence[float], total_ms: float) -> "NoiseSchedule":
        """Exponential dephasing from per-qubit T2*, ``total_ms`` split over the timed stages."""
        t2s = [float(t2_ms)] * N_QUBITS if isinstance(t2_ms, (int, float)) else [float(t) for t in t2_ms]
        if len(t2s) == 1:
            t2s = t2s * N_QUBITS
        if len(t2s) != N_QUBITS:
            raise ValueError(f"expected 1 or {N_QUBITS} T2* values, got {len(t2s)}")
        stage_ms = total_ms / len(TIMED_STAGES)
        per_qubit = {
            q: ChannelSpec(kind="dephasing", p=p_from_t2(stage_ms, t2))
            for q, t2 in enumerate(t2s, start=1)
        }
        return cls(**{s.value: dict(per_qubit) for s in TIMED_STAGES})

    @classmethod
    def from_file(cls, path: str | Path) -> "NoiseSchedule":
        p = Path(path)
        data: Any
        if p.suffix in {".yaml", ".yml"}:
            if yaml is None:
                raise RuntimeError("pyyaml required to load YAML noise schedules")
            data = yaml.safe_load(p.read_text())
        else:
            data = json.loads(p.read_text())
        return cls.model_validate(data or {})

    # -- queries --------------------------------------------------------

    def channels(self, stage: Stage) -> list[KrausChannel]:
        """Kraus channels for ``stage`` in ascending qubit order."""
        specs: QubitChannels = getattr(self, Stage(stage).value)
        out = []
        for qubit in sorted(specs):
            ch = specs[qubit].channel(qubit)
            if ch is not None:
                out.append(ch)
        return out

    @property
    def is_noiseless(self) -> bool:
        return not any(self.channels(s) for s in Stage)

    def describe(self) -> Dict[str, Any]:
        """JSON-ready echo with only the active entries."""
        out: Dict[str, Any] = {}
        for s in Stage:
            specs: QubitChannels = getattr(self, s.value)
            active = {
                str(q): spec.model_dump()
                for q, spec in sorted(specs.items())
                if spec.kind != "none" and spec.p > 0
            }
            if active:
                out[s.value] = active
        return out


__all__ = [
    "Stage",
    "TIMED_STAGES",
    "ChannelSpec",
    "NoiseSchedule",
    "dephasing_channel",
    "depolarizing_channel",
    "p_from_t2",
]

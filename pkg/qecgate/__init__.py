"""Simulator of logical gate operations on the five-qubit perfect code.

The package encodes one qubit into five, applies an encoded identity, NOT or
Hadamard gate, injects one of the 16 single-qubit error conditions, decodes,
corrects coherently, and characterises the whole pipeline by process
tomography.
"""

__version__ = "0.1.0"

from .code.circuits import LogicalGate, codewords  # noqa: E402
from .code.qecerrors import ErrorCondition, all_conditions  # noqa: E402
from .code.recovery import run_pipeline  # noqa: E402

__all__ = [
    "__version__",
    "LogicalGate",
    "ErrorCondition",
    "all_conditions",
    "codewords",
    "run_pipeline",
]

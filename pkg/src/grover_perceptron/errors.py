"""Exception types shared across the package."""

from __future__ import annotations


class CircuitError(ValueError):
    """Base class for malformed circuits and block misuse."""


class AllocationError(CircuitError):
    pass


class ValidationError(CircuitError):
    pass


class NotReversibleError(CircuitError):
    pass


class StaleHandleError(CircuitError):
    pass


class ResourceError(RuntimeError):
    """A size guard was exceeded (qubit cap, ancilla budget, enumeration guard)."""


class StructureError(RuntimeError):
    """A circuit violates the branch-engine structure precondition.

    ``gate_index`` points at the offending gate.
    """

    def __init__(self, message: str, gate_index: int | None = None):
        if gate_index is not None:
            message = f"gate {gate_index}: {message}"
        super().__init__(message)
        self.gate_index = gate_index


class QasmError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SchemaError(ValueError):
    pass

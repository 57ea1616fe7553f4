"""Grover search scaffolding over a list of weight registers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .arith import BlockHandle, _finish, qubits_of
from .circuit import Circuit, Gate, GateKind, Register, x_gate, z_gate
from .errors import ValidationError


@dataclass
class GroverBody:
    weight_registers: list[Register]
    iterations: int = 1

    def __post_init__(self):
        if not self.weight_registers:
            raise ValidationError("Grover body needs at least one weight register")
        if self.iterations < 1:
            raise ValidationError(f"iteration count must be >= 1, got {self.iterations}")
        qs = self.weight_qubits
        if len(set(qs)) != len(qs):
            raise ValidationError("weight registers overlap")

    @property
    def weight_qubits(self) -> list[int]:
        return [q for r in self.weight_registers for q in r.qubits]

    @property
    def total_weight_bits(self) -> int:
        return len(self.weight_qubits)


def hadamard_init(circuit: Circuit, body: GroverBody) -> BlockHandle:
    start = len(circuit.gates)
    circuit.extend(Gate(GateKind.H, (), (q,)) for q in body.weight_qubits)
    return _finish(circuit, start, outputs=[body.weight_qubits])


def phase_flip(circuit: Circuit, flags: Sequence[int] | Register) -> BlockHandle:
    """Negate the amplitude of every branch in which all ``flags`` are 1."""
    flags = qubits_of(flags)
    if not flags:
        raise ValidationError("phase flip needs at least one flag qubit")
    start = len(circuit.gates)
    circuit.append(z_gate(flags))
    return _finish(circuit, start, inputs=[flags])


def diffusion(circuit: Circuit, body: GroverBody) -> BlockHandle:
    """Reflection about the uniform superposition on the weight qubits.

    The H/X/NCZ/X/H sandwich realizes ``I - 2|s><s|``, i.e. the textbook
    ``2|s><s| - I`` times a global -1.
    """
    qs = body.weight_qubits
    start = len(circuit.gates)
    hs = [Gate(GateKind.H, (), (q,)) for q in qs]
    xs = [x_gate([], q) for q in qs]
    circuit.extend(hs + xs)
    circuit.append(z_gate(qs))
    circuit.extend(xs + hs)
    return _finish(circuit, start, inputs=[qs], outputs=[qs])


def grover_iterate(circuit: Circuit, body: GroverBody,
                   oracle_builder: Callable[[Circuit], object]) -> BlockHandle:
    """Append ``body.iterations`` rounds of (oracle, diffusion)."""
    if body.iterations < 1:
        raise ValidationError(f"iteration count must be >= 1, got {body.iterations}")
    start = len(circuit.gates)
    for _ in range(body.iterations):
        oracle_builder(circuit)
        diffusion(circuit, body)
    return _finish(circuit, start, outputs=[body.weight_qubits])


def solution_mass(solutions: int, space: int, iterations: int) -> float:
    """Probability of measuring a marked item after ``iterations`` rounds."""
    theta = math.asin(math.sqrt(solutions / space))
    return math.sin((2 * iterations + 1) * theta) ** 2

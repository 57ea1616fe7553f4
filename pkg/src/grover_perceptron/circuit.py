"""Circuit intermediate representation.

A :class:`Circuit` is an append-only list of :class:`Gate` objects acting on
qubits grouped into named, contiguous registers.  Qubit ``i`` is bit ``i`` of
a basis-state index (little-endian), so the first register declared ends up in
the rightmost characters of a printed bitstring.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import AllocationError, NotReversibleError, ValidationError


class Role(str, enum.Enum):
    WEIGHT = "weight"
    INPUT = "input"
    THRESHOLD = "threshold"
    PRODUCT = "product"
    SUM = "sum"
    FLAG = "flag"
    ANCILLA = "ancilla"


class GateKind(str, enum.Enum):
    H = "h"
    X = "x"
    Z = "z"
    CX = "cx"
    CCX = "ccx"
    MCX = "mcx"
    CZ = "cz"
    NCZ = "ncz"
    MEASURE = "measure"
    BARRIER = "barrier"


# kind -> (min controls, max controls); None means unbounded
_CONTROL_COUNTS = {
    GateKind.H: (0, 0),
    GateKind.X: (0, 0),
    GateKind.Z: (0, 0),
    GateKind.CX: (1, 1),
    GateKind.CCX: (2, 2),
    GateKind.MCX: (3, None),
    GateKind.CZ: (1, 1),
    GateKind.NCZ: (2, None),
    GateKind.MEASURE: (0, 0),
    GateKind.BARRIER: (0, 0),
}

PERMUTATION_KINDS = frozenset({GateKind.X, GateKind.CX, GateKind.CCX, GateKind.MCX})
PHASE_KINDS = frozenset({GateKind.Z, GateKind.CZ, GateKind.NCZ})


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    controls: tuple[int, ...] = ()
    targets: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(int(q) for q in self.controls))
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        lo, hi = _CONTROL_COUNTS[self.kind]
        k = len(self.controls)
        if k < lo or (hi is not None and k > hi):
            raise ValidationError(f"{self.kind.value} takes {lo}..{hi or 'n'} controls, got {k}")
        if self.kind is GateKind.BARRIER:
            if not self.targets:
                raise ValidationError("barrier needs at least one qubit")
        elif len(self.targets) != 1:
            raise ValidationError(f"{self.kind.value} takes exactly one target")
        ops = self.qubits
        if any(q < 0 for q in ops):
            raise ValidationError(f"negative qubit index in {self}")
        if len(set(ops)) != len(ops):
            raise ValidationError(f"duplicate operand in {self}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets

    @property
    def target(self) -> int:
        return self.targets[0]

    def __str__(self) -> str:
        return f"{self.kind.value}({','.join(map(str, self.qubits))})"


def x_gate(controls: Sequence[int], target: int) -> Gate:
    """Bit flip on ``target`` controlled on all of ``controls`` (X, CX, CCX or MCX)."""
    kind = {0: GateKind.X, 1: GateKind.CX, 2: GateKind.CCX}.get(len(controls), GateKind.MCX)
    return Gate(kind, tuple(controls), (target,))


def z_gate(qubits: Sequence[int]) -> Gate:
    """Phase flip of the all-ones pattern on ``qubits`` (Z, CZ or NCZ).

    The last qubit is used as the nominal target.
    """
    if not qubits:
        raise ValidationError("phase flip needs at least one qubit")
    *controls, target = qubits
    kind = {0: GateKind.Z, 1: GateKind.CZ}.get(len(controls), GateKind.NCZ)
    return Gate(kind, tuple(controls), (target,))


@dataclass(frozen=True)
class Register:
    name: str
    offset: int
    width: int
    role: Role = Role.ANCILLA

    @property
    def qubits(self) -> list[int]:
        return list(range(self.offset, self.offset + self.width))

    def __getitem__(self, i):
        return self.qubits[i]

    def __len__(self) -> int:
        return self.width

    def __iter__(self):
        return iter(self.qubits)


@dataclass
class Circuit:
    registers: list[Register] = field(default_factory=list)
    gates: list[Gate] = field(default_factory=list)
    qubit_count: int = 0

    def allocate_register(self, name: str, width: int, role: Role | str = Role.ANCILLA) -> Register:
        if not name.isidentifier():
            raise ValidationError(f"register name {name!r} is not an identifier")
        if any(r.name == name for r in self.registers):
            raise AllocationError(f"register {name!r} already exists")
        if width <= 0:
            raise ValidationError(f"register {name!r} must have positive width, got {width}")
        if self.gates:
            raise AllocationError("registers must be allocated before any gate is appended")
        reg = Register(name, self.qubit_count, width, Role(role))
        self.registers.append(reg)
        self.qubit_count += width
        return reg

    def register(self, name: str) -> Register:
        for r in self.registers:
            if r.name == name:
                return r
        raise KeyError(name)

    def append(self, gate: Gate) -> None:
        bad = [q for q in gate.qubits if q >= self.qubit_count]
        if bad:
            raise ValidationError(f"{gate} addresses qubit(s) {bad} outside 0..{self.qubit_count - 1}")
        self.gates.append(gate)

    def extend(self, gates: Iterable[Gate]) -> None:
        for g in gates:
            self.append(g)

    def validate(self) -> list[str]:
        """Return a list of invariant violations; empty when the circuit is well formed."""
        problems = []
        seen_names = set()
        for r in self.registers:
            if r.name in seen_names:
                problems.append(f"duplicate register name {r.name!r}")
            seen_names.add(r.name)
            if r.width <= 0:
                problems.append(f"register {r.name!r} has non-positive width {r.width}")

        covered = sorted(q for r in self.registers for q in r.qubits)
        if len(covered) != len(set(covered)):
            problems.append("register ranges overlap")
        elif covered != list(range(self.qubit_count)):
            problems.append(f"registers do not tile qubits 0..{self.qubit_count - 1}")

        for i, g in enumerate(self.gates):
            bad = [q for q in g.qubits if not 0 <= q < self.qubit_count]
            if bad:
                problems.append(f"gate {i} {g} addresses out-of-range qubit(s) {bad}")
        return problems

    def qubit_names(self) -> dict[int, str]:
        return {q: f"{r.name}[{q - r.offset}]" for r in self.registers for q in r.qubits}


def reversed_segment(gates: Sequence[Gate]) -> list[Gate]:
    """Mirror a sequence of self-inverse permutation gates.

    Appending the result after ``gates`` gives the identity on basis states.
    """
    for g in gates:
        if g.kind not in PERMUTATION_KINDS:
            raise NotReversibleError(f"{g} cannot be undone by mirroring")
    return list(reversed(gates))

"""Reversible integer arithmetic built from X/CX/CCX/MCX gates.

Every builder appends a contiguous run of basis-permutation gates and returns
a :class:`BlockHandle` describing it.  Work ancillas come from an
:class:`AncillaPool` and are back in ``|0>`` when the block ends, so
:func:`uncompute` only has to mirror the block's gates.

Operands are registers or plain lists of qubit indices, least-significant
qubit first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .circuit import Circuit, Gate, Register, reversed_segment, x_gate
from .errors import ResourceError, StaleHandleError, ValidationError

Qubits = Union[Register, Sequence[int], int]


def qubits_of(x: Qubits) -> list[int]:
    if isinstance(x, Register):
        return x.qubits
    if isinstance(x, int):
        return [x]
    return [int(q) for q in x]


class AncillaPool:
    """Free list of work qubits shared by the arithmetic builders."""

    def __init__(self, qubits: Iterable[int] = ()):
        self._free = list(qubits_of(list(qubits)))
        self._borrowed: set[int] = set()

    @classmethod
    def from_register(cls, reg: Register) -> AncillaPool:
        return cls(reg.qubits)

    @property
    def free(self) -> list[int]:
        return list(self._free)

    def borrow(self, count: int) -> list[int]:
        if count > len(self._free):
            raise ResourceError(f"need {count} ancillas, only {len(self._free)} free")
        taken, self._free = self._free[:count], self._free[count:]
        self._borrowed.update(taken)
        return taken

    def release(self, qubits: Iterable[int]) -> None:
        for q in qubits:
            if q not in self._borrowed:
                raise ValueError(f"qubit {q} was not borrowed")
            self._borrowed.remove(q)
            self._free.append(q)
        self._free.sort()


@dataclass
class BlockHandle:
    circuit: Circuit
    start: int
    end: int
    inputs: list[list[int]] = field(default_factory=list)
    outputs: list[list[int]] = field(default_factory=list)
    borrowed_ancillas: list[int] = field(default_factory=list)
    _snapshot: tuple[Gate, ...] = ()

    @property
    def gate_range(self) -> tuple[int, int]:
        return self.start, self.end

    @property
    def gates(self) -> list[Gate]:
        return self.circuit.gates[self.start:self.end]

    def is_stale(self) -> bool:
        return tuple(self.gates) != self._snapshot or len(self._snapshot) != self.end - self.start


def _finish(circuit, start, inputs=(), outputs=(), borrowed=()) -> BlockHandle:
    end = len(circuit.gates)
    return BlockHandle(
        circuit, start, end,
        [qubits_of(q) for q in inputs],
        [qubits_of(q) for q in outputs],
        list(borrowed),
        tuple(circuit.gates[start:end]),
    )


def _check_disjoint(*groups: list[int]) -> None:
    seen: set[int] = set()
    for g in groups:
        if seen & set(g) or len(set(g)) != len(g):
            raise ValidationError("operand registers overlap")
        seen.update(g)


def cuccaro_gates(a: Sequence[int], b: Sequence[int], carry_in: int,
                  carry_out: int | None = None, controls: Sequence[int] = ()) -> list[Gate]:
    """Ripple-carry adder ``b <- a + b`` for equal-width ``a`` and ``b``.

    ``carry_in`` must be a clean ancilla.  When ``carry_out`` is given the
    final carry is XORed into it; otherwise the sum is taken mod ``2**n``.
    Every gate picks up ``controls`` as extra controls.
    """
    ctl = list(controls)
    gates: list[Gate] = []

    def g(cs, t):
        gates.append(x_gate(ctl + list(cs), t))

    def maj(x, y, z):
        g([z], y)
        g([z], x)
        g([x, y], z)

    def uma(x, y, z):
        g([x, y], z)
        g([z], x)
        g([x], y)

    n = len(a)
    carries = [carry_in] + list(a[:-1])
    for i in range(n):
        maj(carries[i], b[i], a[i])
    if carry_out is not None:
        g([a[-1]], carry_out)
    for i in reversed(range(n)):
        uma(carries[i], b[i], a[i])
    return gates


def _adder(circuit, ctrl, a, b, carry_out, pool) -> BlockHandle:
    a, b = qubits_of(a), qubits_of(b)
    ctl = [] if ctrl is None else qubits_of(ctrl)
    co = [] if carry_out is None else qubits_of(carry_out)
    if len(co) > 1 or len(ctl) > 1:
        raise ValidationError("carry_out and ctrl must be single qubits")
    if not a or len(a) > len(b):
        raise ValidationError(f"addend width {len(a)} must be in 1..{len(b)}")
    _check_disjoint(a, b, co, ctl)
    if pool is None:
        raise ResourceError("adder needs an ancilla pool for its carry qubit")
    pad = len(b) - len(a)
    borrowed = pool.borrow(1 + pad)
    _check_disjoint(a, b, co, ctl, borrowed)
    start = len(circuit.gates)
    circuit.extend(cuccaro_gates(a + borrowed[1:], b, borrowed[0], co[0] if co else None, ctl))
    pool.release(borrowed)
    return _finish(circuit, start, [a] + ([ctl] if ctl else []), [b] + ([co] if co else []), borrowed)


def build_adder(circuit: Circuit, a: Qubits, b: Qubits, carry_out: Qubits | None = None,
                pool: AncillaPool | None = None) -> BlockHandle:
    """In-place ``|a>|b>|c> -> |a>|(a+b) mod 2^n>|c xor carry>``.

    ``a`` may be narrower than ``b``; it is zero-padded with pool ancillas.
    """
    return _adder(circuit, None, a, b, carry_out, pool)


def build_controlled_adder(circuit: Circuit, ctrl: Qubits, a: Qubits, b: Qubits,
                           carry_out: Qubits | None = None,
                           pool: AncillaPool | None = None) -> BlockHandle:
    """Same as :func:`build_adder` but only acts when ``ctrl`` is 1."""
    return _adder(circuit, ctrl, a, b, carry_out, pool)


def build_multiplier(circuit: Circuit, a: Qubits, b: Qubits, product: Qubits,
                     pool: AncillaPool | None = None) -> BlockHandle:
    """Schoolbook multiplication ``|a>|b>|0> -> |a>|b>|a*b>``.

    For bit ``i`` of ``a``, ``b`` is added into ``product[i:i+n]`` with the
    carry landing in ``product[i+n]``; that qubit is still zero at that point
    because the partial sum is below ``2**(i+n)``.  Only ``a`` is used as a
    control, so ``a`` is never written to.
    """
    a, b, p = qubits_of(a), qubits_of(b), qubits_of(product)
    m, n = len(a), len(b)
    if len(p) < m + n:
        raise ValidationError(f"product width {len(p)} < {m} + {n}")
    _check_disjoint(a, b, p)
    start = len(circuit.gates)
    borrowed: list[int] = []
    for i, ai in enumerate(a):
        h = build_controlled_adder(circuit, ai, b, p[i:i + n], p[i + n], pool)
        borrowed.extend(q for q in h.borrowed_ancillas if q not in borrowed)
    return _finish(circuit, start, [a, b], [p], borrowed)


def _check_constant(x: list[int], constant: int) -> None:
    if not 0 <= constant < (1 << len(x)):
        raise ValidationError(f"constant {constant} does not fit in {len(x)} bits")


def build_equality_comparator(circuit: Circuit, x: Qubits, constant: int, flag: Qubits) -> BlockHandle:
    """Flip ``flag`` iff register ``x`` holds ``constant``."""
    x, f = qubits_of(x), qubits_of(flag)
    _check_constant(x, constant)
    _check_disjoint(x, f)
    start = len(circuit.gates)
    zeros = [q for i, q in enumerate(x) if not (constant >> i) & 1]
    circuit.extend(x_gate([], q) for q in zeros)
    circuit.append(x_gate(x, f[0]))
    circuit.extend(x_gate([], q) for q in reversed(zeros))
    return _finish(circuit, start, [x], [f])


def build_geq_comparator(circuit: Circuit, x: Qubits, constant: int, flag: Qubits,
                         pool: AncillaPool | None = None) -> BlockHandle:
    """Flip ``flag`` iff ``x >= constant``.

    Adds ``x`` into an ``n+1``-bit ancilla preloaded with ``2**n - constant``;
    the top bit of the sum is the answer.  The addition and the preload are
    undone before returning.
    """
    x, f = qubits_of(x), qubits_of(flag)
    n = len(x)
    _check_constant(x, constant)
    _check_disjoint(x, f)
    if pool is None:
        raise ResourceError("comparator needs an ancilla pool")
    acc = pool.borrow(n + 1)
    start = len(circuit.gates)
    offset = (1 << n) - constant
    preload = [x_gate([], q) for i, q in enumerate(acc) if (offset >> i) & 1]
    circuit.extend(preload)
    add = build_adder(circuit, x, acc[:n], acc[n], pool)
    circuit.append(x_gate([acc[n]], f[0]))
    circuit.extend(reversed_segment(add.gates))
    circuit.extend(reversed(preload))
    pool.release(acc)
    return _finish(circuit, start, [x], [f], acc + add.borrowed_ancillas)


def uncompute(circuit: Circuit, handle: BlockHandle) -> BlockHandle:
    """Append the mirror image of ``handle``'s gates."""
    if handle.circuit is not circuit or handle.is_stale():
        raise StaleHandleError("block no longer matches the circuit's gate list")
    start = len(circuit.gates)
    circuit.extend(reversed_segment(handle.gates))
    return _finish(circuit, start, handle.outputs, handle.inputs, handle.borrowed_ancillas)

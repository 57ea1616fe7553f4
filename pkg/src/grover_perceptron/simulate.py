"""Exact simulators.

Two engines share the circuit IR:

* :func:`run_dense` keeps the full ``2**n`` amplitude vector and is used for
  small circuits (block tests, decomposition equivalence).
* :func:`run_branch` keeps one concrete basis state per branch.  It is exact
  for circuits where Hadamards only touch a designated set of qubits (the
  weight registers) and everything else is basis-permutation or phase
  arithmetic, which is the shape of every synthesized training circuit.
  Cost grows with the number of branches, not with the qubit count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit, GateKind, PERMUTATION_KINDS, PHASE_KINDS
from .errors import ResourceError, StructureError

DEFAULT_DENSE_CAP = 22
_INV_SQRT2 = 1 / math.sqrt(2)
# amplitudes below this are dropped from the branch table after a Hadamard
_PRUNE = 1e-14


def _as_bits(value: int | Sequence[int] | None, n: int) -> np.ndarray:
    if value is None:
        return np.zeros(n, dtype=bool)
    if isinstance(value, (int, np.integer)):
        value = int(value)
        if value < 0 or value >> n:
            raise ValueError(f"basis state {value} does not fit in {n} qubits")
        return np.array([(value >> q) & 1 for q in range(n)], dtype=bool)
    bits = np.asarray(value, dtype=bool)
    if bits.shape != (n,):
        raise ValueError(f"expected {n} bits, got shape {bits.shape}")
    return bits.copy()


def bitstring(bits: Iterable[int | bool], qubits: Sequence[int]) -> str:
    """Render ``bits`` restricted to ``qubits``; highest qubit index leftmost."""
    bits = list(bits)
    return "".join("1" if bits[q] else "0" for q in sorted(qubits, reverse=True))


# --------------------------------------------------------------------------
# dense engine


@dataclass
class DenseState:
    amplitudes: np.ndarray  # flat, index bit q <-> qubit q
    qubit_count: int

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self, qubits: Sequence[int]) -> dict[str, float]:
        """Marginal distribution over ``qubits`` as bitstring -> probability."""
        n = self.qubit_count
        probs = np.abs(self.amplitudes.reshape([2] * n)) ** 2 if n else np.abs(self.amplitudes) ** 2
        keep = sorted(qubits, reverse=True)
        keep_axes = [n - 1 - q for q in keep]
        drop_axes = tuple(a for a in range(n) if a not in keep_axes)
        marg = probs.sum(axis=drop_axes) if drop_axes else probs
        # remaining axes are in increasing axis order == decreasing qubit order
        marg = np.asarray(marg).reshape(-1)
        b = len(keep)
        return {format(i, f"0{b}b") if b else "": float(p) for i, p in enumerate(marg)}


def _dense_index(n: int, fixed: dict[int, int]) -> tuple:
    idx = [slice(None)] * n
    for q, v in fixed.items():
        idx[n - 1 - q] = v
    return tuple(idx)


def apply_dense_gate(psi: np.ndarray, gate, n: int) -> None:
    """Apply one gate in place to ``psi`` of shape ``(2,)*n``."""
    kind = gate.kind
    if kind in (GateKind.MEASURE, GateKind.BARRIER):
        return
    if kind in PERMUTATION_KINDS:
        t = gate.target
        i0 = _dense_index(n, {**{c: 1 for c in gate.controls}, t: 0})
        i1 = _dense_index(n, {**{c: 1 for c in gate.controls}, t: 1})
        tmp = psi[i0].copy()
        psi[i0] = psi[i1]
        psi[i1] = tmp
    elif kind in PHASE_KINDS:
        psi[_dense_index(n, {q: 1 for q in gate.qubits})] *= -1
    elif kind is GateKind.H:
        t = gate.target
        i0 = _dense_index(n, {t: 0})
        i1 = _dense_index(n, {t: 1})
        a0 = psi[i0].copy()
        a1 = psi[i1]
        psi[i0] = (a0 + a1) * _INV_SQRT2
        psi[i1] = (a0 - a1) * _INV_SQRT2
    else:  # pragma: no cover - GateKind is closed
        raise ValueError(f"unsupported gate {gate}")


def run_dense(
    circuit: Circuit,
    initial: int | Sequence[int] | np.ndarray | None = None,
    cap: int = DEFAULT_DENSE_CAP,
) -> DenseState:
    """Simulate ``circuit`` on a full statevector.

    ``initial`` is a basis-state integer, a bit list, or a complex vector of
    length ``2**n``.  Measurements and barriers are skipped.
    """
    n = circuit.qubit_count
    if n > cap:
        raise ResourceError(
            f"{n} qubits exceeds the dense-engine cap of {cap}; use run_branch for wide circuits"
        )
    if isinstance(initial, np.ndarray) and np.iscomplexobj(initial):
        psi = np.array(initial, dtype=complex).reshape(-1)
        if psi.size != 1 << n:
            raise ValueError(f"state vector must have length {1 << n}")
    else:
        bits = _as_bits(initial, n)
        psi = np.zeros(1 << n, dtype=complex)
        psi[sum(1 << q for q in range(n) if bits[q])] = 1.0
    view = psi.reshape([2] * n) if n else psi
    for gate in circuit.gates:
        apply_dense_gate(view, gate, n)
    return DenseState(psi, n)


# --------------------------------------------------------------------------
# branch engine


@dataclass
class BranchState:
    """Sparse exact state: one row of concrete bits per branch.

    ``bits[r, q]`` is qubit ``q`` in branch ``r`` and ``amplitudes[r]`` its
    amplitude.  Rows are distinct on the superposed qubits.
    """

    superposed: tuple[int, ...]
    bits: np.ndarray
    amplitudes: np.ndarray

    @property
    def qubit_count(self) -> int:
        return self.bits.shape[1]

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    @property
    def branches(self) -> dict[str, tuple[complex, str]]:
        """weight bitstring -> (amplitude, bitstring of the remaining qubits)."""
        rest = [q for q in range(self.qubit_count) if q not in set(self.superposed)]
        return {
            bitstring(row, self.superposed): (complex(a), bitstring(row, rest))
            for row, a in zip(self.bits, self.amplitudes)
        }

    def probabilities(self, qubits: Sequence[int]) -> dict[str, float]:
        b = len(qubits)
        table = {format(i, f"0{b}b"): 0.0 for i in range(1 << b)}
        for row, a in zip(self.bits, self.amplitudes):
            table[bitstring(row, qubits)] += float(abs(a) ** 2)
        return table


def _weight_keys(bits: np.ndarray, superposed: Sequence[int]) -> np.ndarray:
    if not superposed:
        return np.zeros(len(bits), dtype=np.int64)
    weights = np.array([1 << j for j in range(len(superposed))], dtype=np.int64)
    return bits[:, list(superposed)].astype(np.int64) @ weights


def _apply_branch_hadamard(bits: np.ndarray, amps: np.ndarray, t: int):
    others = bits.copy()
    others[:, t] = False
    packed = np.packbits(others, axis=1)
    group = np.unique(packed, axis=0, return_inverse=True)[1].reshape(-1)
    g = int(group.max()) + 1 if len(group) else 0
    a0 = np.zeros(g, dtype=complex)
    a1 = np.zeros(g, dtype=complex)
    is1 = bits[:, t]
    np.add.at(a0, group[~is1], amps[~is1])
    np.add.at(a1, group[is1], amps[is1])
    base = np.zeros((g, bits.shape[1]), dtype=bool)
    base[group] = others
    new_bits = np.concatenate([base, base])
    new_bits[g:, t] = True
    new_amps = np.concatenate([(a0 + a1) * _INV_SQRT2, (a0 - a1) * _INV_SQRT2])
    keep = np.abs(new_amps) > _PRUNE
    return new_bits[keep], new_amps[keep]


def run_branch(
    circuit: Circuit,
    superposed: Iterable[int],
    initial: int | Sequence[int] | None = None,
) -> BranchState:
    """Simulate ``circuit`` keeping superposition only on ``superposed`` qubits.

    Raises :class:`StructureError` if a Hadamard hits any other qubit, or if
    after a Hadamard two branches share the same superposed bits (which
    happens when work registers were left entangled, e.g. a diffusion step
    before the oracle was uncomputed).
    """
    superposed = tuple(sorted(set(superposed)))
    sup_set = set(superposed)
    n = circuit.qubit_count
    bits = _as_bits(initial, n)[None, :]
    amps = np.ones(1, dtype=complex)

    for index, gate in enumerate(circuit.gates):
        kind = gate.kind
        if kind in PERMUTATION_KINDS:
            if gate.controls:
                cond = np.all(bits[:, list(gate.controls)], axis=1)
                bits[:, gate.target] ^= cond
            else:
                bits[:, gate.target] ^= True
        elif kind in PHASE_KINDS:
            amps[np.all(bits[:, list(gate.qubits)], axis=1)] *= -1
        elif kind is GateKind.H:
            t = gate.target
            if t not in sup_set:
                raise StructureError(f"Hadamard on non-superposed qubit {t}", index)
            bits, amps = _apply_branch_hadamard(bits, amps, t)
            keys = _weight_keys(bits, superposed)
            if len(np.unique(keys)) != len(keys):
                raise StructureError(
                    "branches disagree on non-superposed qubits at a Hadamard "
                    "(work registers not uncomputed)",
                    index,
                )
    return BranchState(superposed, bits, amps)


def measure_weights(state: DenseState | BranchState, weight_qubits) -> dict[str, float]:
    """Exact probability of every weight bitstring.

    ``weight_qubits`` is a qubit list or anything with a ``weight_qubits``
    attribute (a register plan).
    """
    qubits = list(getattr(weight_qubits, "weight_qubits", weight_qubits))
    return state.probabilities(qubits)

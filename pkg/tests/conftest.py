from __future__ import annotations

import pytest

from grover_perceptron.circuit import Circuit
from grover_perceptron.simulate import run_branch
from grover_perceptron.specfile import example_path, expected_strings_path, load_expected_strings, load_spec

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def basis_run(circuit: Circuit, initial: int) -> list[bool]:
    """Final basis state of a permutation-only circuit started in ``initial``."""
    state = run_branch(circuit, (), initial)
    assert len(state.amplitudes) == 1
    assert abs(state.amplitudes[0] - 1) < 1e-12
    return [bool(b) for b in state.bits[0]]


def value(bits, qubits) -> int:
    qubits = qubits.qubits if hasattr(qubits, "qubits") else list(qubits)
    return sum(int(bits[q]) << i for i, q in enumerate(qubits))


def encode(*pairs) -> int:
    """Basis-state integer from ``(register, value)`` pairs."""
    out = 0
    for reg, v in pairs:
        for i, q in enumerate(reg.qubits if hasattr(reg, "qubits") else reg):
            out |= ((v >> i) & 1) << q
    return out


@pytest.fixture(scope="session")
def example_specs():
    return {n: load_spec(example_path(f"example{n}")) for n in (1, 2, 3)}


@pytest.fixture(scope="session")
def expected_tables():
    return {n: load_expected_strings(expected_strings_path(f"example{n}")) for n in (1, 2, 3)}


def random_branch_circuit(rng, n_weights: int, n_work: int, rounds: int = 2, tail: bool = False):
    """Random circuit satisfying the branch-engine structure rule.

    Each round is a random permutation "oracle" writing only to work qubits,
    a phase flip, the mirrored oracle, some weight-only permutations and a
    diffusion.  With ``tail`` a final oracle is left un-mirrored.
    """
    from grover_perceptron.circuit import Role, reversed_segment, x_gate, z_gate
    from grover_perceptron.grover import GroverBody, diffusion, hadamard_init

    c = Circuit()
    w = c.allocate_register("w", n_weights, Role.WEIGHT)
    work = c.allocate_register("work", n_work, Role.ANCILLA)
    body = GroverBody([w])
    hadamard_init(c, body)
    everything = list(range(c.qubit_count))

    def oracle():
        gates = []
        for _ in range(int(rng.integers(3, 10))):
            t = int(rng.choice(work.qubits))
            others = [q for q in everything if q != t]
            k = int(rng.integers(0, min(4, len(others)) + 1))
            gates.append(x_gate([int(q) for q in rng.choice(others, k, replace=False)], t))
        return gates

    for _ in range(rounds):
        g = oracle()
        c.extend(g)
        k = int(rng.integers(1, 4))
        c.append(z_gate([int(q) for q in rng.choice(everything, k, replace=False)]))
        c.extend(reversed_segment(g))
        for _ in range(int(rng.integers(0, 3))):
            t = int(rng.choice(w.qubits))
            ctl = [q for q in w.qubits if q != t][: int(rng.integers(0, n_weights))]
            c.append(x_gate(ctl, t))
        diffusion(c, body)
    if tail:
        c.extend(oracle())
    return c, w.qubits

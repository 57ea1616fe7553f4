import numpy as np
import pytest

from grover_perceptron.circuit import Circuit, Gate, GateKind, Role, x_gate, z_gate
from grover_perceptron.errors import QasmError, ResourceError
from grover_perceptron.perceptron import synthesize_training_circuit
from grover_perceptron.qasm import decompose_multicontrols, emit_qasm, parse_qasm, v_chain
from grover_perceptron.simulate import run_dense


def small_circuit():
    c = Circuit()
    c.allocate_register("w", 2, Role.WEIGHT)
    c.allocate_register("t", 3, Role.SUM)
    c.allocate_register("anc", 2, Role.ANCILLA)
    return c


def test_header_and_native_lines():
    c = small_circuit()
    c.append(Gate(GateKind.H, (), (0,)))
    c.append(x_gate([0, 1], 2))
    text = emit_qasm(c)
    lines = text.splitlines()
    assert lines[0] == "OPENQASM 2.0;"
    assert lines[1] == 'include "qelib1.inc";'
    assert "qreg w[2]; // weight" in lines
    assert "h w[0];" in lines
    assert "ccx w[0],w[1],t[0];" in lines


def test_mcx_three_controls_uses_one_ancilla():
    c = small_circuit()
    c.append(x_gate([0, 1, 2], 3))
    text = emit_qasm(c)
    gates = [l for l in text.splitlines() if l.startswith("ccx")]
    assert len(gates) == 3
    assert all("anc[1]" not in l for l in gates)
    assert sum("anc[0]" in l for l in gates) == 3


def test_ncz_two_controls_is_h_ccx_h():
    c = small_circuit()
    c.append(z_gate([0, 1, 2]))
    body = [l for l in emit_qasm(c).splitlines() if not l.startswith(("OPENQASM", "include", "qreg", "creg"))]
    assert body == ["h t[0];", "ccx w[0],w[1],t[0];", "h t[0];"]


def test_v_chain_shortage():
    with pytest.raises(ResourceError):
        v_chain([0, 1, 2, 3], 4, [5])


def test_decomposition_needs_free_ancilla():
    c = Circuit()
    c.allocate_register("q", 4)
    c.append(x_gate([0, 1, 2], 3))
    with pytest.raises(ResourceError):
        decompose_multicontrols(c)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_round_trip_examples(example_specs, n):
    circuit, _ = synthesize_training_circuit(example_specs[n])
    lowered = decompose_multicontrols(circuit)
    parsed = parse_qasm(emit_qasm(circuit))
    assert parsed.qubit_count == circuit.qubit_count
    assert [(r.name, r.offset, r.width, r.role) for r in parsed.registers] == \
        [(r.name, r.offset, r.width, r.role) for r in circuit.registers]
    assert parsed.gates == lowered.gates
    assert emit_qasm(parsed) == emit_qasm(circuit)


def test_lowered_circuit_has_no_multicontrols(example_specs):
    circuit, _ = synthesize_training_circuit(example_specs[3])
    kinds = {g.kind for g in decompose_multicontrols(circuit).gates}
    assert not kinds & {GateKind.MCX, GateKind.NCZ}


def test_parse_errors_carry_location():
    with pytest.raises(QasmError) as exc:
        parse_qasm("qreg q[2];\n")
    assert exc.value.line == 1
    with pytest.raises(QasmError) as exc:
        parse_qasm('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\ncx q[0], q[9];\n')
    assert exc.value.line == 4 and exc.value.column is not None
    assert "range" in str(exc.value)
    for bad in ("u3 q[0];", "h r[0];", "cx q[0];", "h q[0]"):
        with pytest.raises(QasmError):
            parse_qasm('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\n' + bad + "\n")


def test_parse_broadcast_and_measure():
    c = parse_qasm('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\ncreg c[2];\n'
                   "h q;\nmeasure q[1] -> c[1];\n")
    assert [g.kind for g in c.gates] == [GateKind.H, GateKind.H, GateKind.MEASURE]
    assert c.gates[2].target == 1


def random_multicontrol_circuit(rng, n_data, n_anc):
    c = Circuit()
    c.allocate_register("d", n_data)
    c.allocate_register("anc", n_anc, Role.ANCILLA)
    for _ in range(25):
        r = rng.integers(4)
        qs = [int(q) for q in rng.permutation(n_data)[: rng.integers(1, min(n_data, 5) + 1)]]
        if r == 0:
            c.append(Gate(GateKind.H, (), (qs[0],)))
        elif r == 1:
            c.append(x_gate(qs[:-1], qs[-1]))
        else:
            c.append(z_gate(qs))
    return c


@pytest.mark.parametrize("seed", range(8))
def test_decomposition_is_unitary_equivalent(seed):
    rng = np.random.default_rng(seed)
    n_data, n_anc = 7, 3
    c = random_multicontrol_circuit(rng, n_data, n_anc)
    lowered = decompose_multicontrols(c)
    for _ in range(3):
        psi = np.zeros(1 << c.qubit_count, complex)
        # ancillas start clean; data in a random state
        psi[: 1 << n_data] = rng.normal(size=1 << n_data) + 1j * rng.normal(size=1 << n_data)
        psi /= np.linalg.norm(psi)
        a = run_dense(c, psi).amplitudes
        b = run_dense(lowered, psi).amplitudes
        assert np.allclose(a, b, atol=1e-12)

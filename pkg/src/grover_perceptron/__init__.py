"""Grover-search circuits for finding perceptron weights.

Build a training circuit from a topology, export it as OPENQASM 2.0,
simulate it exactly and check the result against brute force.
"""

from .circuit import Circuit, Gate, GateKind, Register, Role, reversed_segment
from .perceptron import (
    Condition,
    PerceptronSpec,
    RegisterPlan,
    Topology,
    build_param_network,
    decode_measurement,
    synthesize_training_circuit,
)
from .qasm import decompose_multicontrols, emit_qasm, parse_qasm
from .sampling import Histogram, sample_shots
from .simulate import measure_weights, run_branch, run_dense
from .specfile import load_spec
from .verify import brute_force, cross_check

__all__ = [
    "Circuit", "Gate", "GateKind", "Register", "Role", "reversed_segment",
    "Condition", "PerceptronSpec", "RegisterPlan", "Topology", "build_param_network",
    "decode_measurement", "synthesize_training_circuit",
    "decompose_multicontrols", "emit_qasm", "parse_qasm",
    "Histogram", "sample_shots", "measure_weights", "run_branch", "run_dense",
    "load_spec", "brute_force", "cross_check",
]
__version__ = "0.1.0"

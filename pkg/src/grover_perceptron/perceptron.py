"""Synthesis of Grover circuits that search for perceptron weights.

A perceptron here has one hidden layer with linear activation, so every
neuron value is an exact integer polynomial in the weights::

    hidden[h] = sum(input[i] * w[j]  for connection j: i -> h)
    output[o] = sum(hidden[h] * w[j] for connection j: h -> o)

The oracle computes this forward pass with reversible arithmetic, compares
each output neuron with the threshold, phase-flips branches where every
comparison holds, and then mirrors the arithmetic away.

Weights are numbered input->hidden connections first (in list order), then
hidden->output connections.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .arith import (
    AncillaPool,
    BlockHandle,
    _finish,
    build_adder,
    build_equality_comparator,
    build_geq_comparator,
    build_multiplier,
    uncompute,
)
from .circuit import Circuit, Gate, GateKind, Register, Role, x_gate
from .errors import ValidationError
from .grover import GroverBody, grover_iterate, hadamard_init, phase_flip

WeightAssignment = tuple  # (w1, w2, ..., wk)


class Condition(str, enum.Enum):
    EQUAL = "eq"
    GREATER_OR_EQUAL = "geq"

    def holds(self, value: int, threshold: int) -> bool:
        return value == threshold if self is Condition.EQUAL else value >= threshold


class Connection(NamedTuple):
    source: int
    target: int


def _check_layer_ids(ids: set[int], what: str) -> int:
    if ids != set(range(1, len(ids) + 1)):
        raise ValidationError(f"{what} ids must be 1..n without gaps, got {sorted(ids)}")
    return len(ids)


@dataclass
class Topology:
    input_to_hidden: list[Connection]
    hidden_to_output: list[Connection]

    def __post_init__(self):
        self.input_to_hidden = [Connection(*c) for c in self.input_to_hidden]
        self.hidden_to_output = [Connection(*c) for c in self.hidden_to_output]
        if not self.input_to_hidden or not self.hidden_to_output:
            raise ValidationError("topology needs at least one connection in each layer")
        for layer in (self.input_to_hidden, self.hidden_to_output):
            if len(set(layer)) != len(layer):
                raise ValidationError(f"duplicate connection in {layer}")
        _check_layer_ids({c.source for c in self.input_to_hidden}, "input")
        fed = {c.target for c in self.input_to_hidden}
        _check_layer_ids(fed | {c.source for c in self.hidden_to_output}, "hidden")
        unfed = {c.source for c in self.hidden_to_output} - fed
        if unfed:
            raise ValidationError(f"hidden neuron(s) {sorted(unfed)} have no incoming connection")
        _check_layer_ids({c.target for c in self.hidden_to_output}, "output")

    @property
    def n_inputs(self) -> int:
        return max(c.source for c in self.input_to_hidden)

    @property
    def n_hidden(self) -> int:
        return max(c.target for c in self.input_to_hidden)

    @property
    def n_outputs(self) -> int:
        return max(c.target for c in self.hidden_to_output)

    @property
    def n_weights(self) -> int:
        return len(self.input_to_hidden) + len(self.hidden_to_output)

    def hidden_inputs(self, h: int) -> list[int]:
        """Weight indices (0-based) of the connections feeding hidden neuron ``h``."""
        return [j for j, c in enumerate(self.input_to_hidden) if c.target == h]

    def output_inputs(self, o: int) -> list[int]:
        k = len(self.input_to_hidden)
        return [k + j for j, c in enumerate(self.hidden_to_output) if c.target == o]


@dataclass
class PerceptronSpec:
    topology: Topology
    input_values: list[int]
    input_width: int
    weight_width: int
    threshold: int
    threshold_width: int | None = None
    condition: Condition = Condition.EQUAL

    def __post_init__(self):
        self.condition = Condition(self.condition)
        if self.input_width < 1 or self.weight_width < 1:
            raise ValidationError("input_width and weight_width must be positive")
        if len(self.input_values) != self.topology.n_inputs:
            raise ValidationError(
                f"topology has {self.topology.n_inputs} inputs but {len(self.input_values)} values given"
            )
        for i, v in enumerate(self.input_values, 1):
            if not 0 <= v < (1 << self.input_width):
                raise ValidationError(f"input I{i}={v} does not fit in {self.input_width} bits")
        if self.threshold < 0:
            raise ValidationError("threshold must be non-negative")
        if self.threshold_width is not None and not self.threshold < (1 << self.threshold_width):
            raise ValidationError(f"threshold {self.threshold} does not fit in {self.threshold_width} bits")

    @property
    def n_weights(self) -> int:
        return self.topology.n_weights


class ForwardValues(NamedTuple):
    products: list[int]  # indexed like weights
    hidden: list[int]
    outputs: list[int]


def forward_values(spec: PerceptronSpec, weights: Sequence[int]) -> ForwardValues:
    """Classical forward pass with unbounded integers."""
    topo = spec.topology
    products = [0] * topo.n_weights
    hidden = [0] * topo.n_hidden
    for j, c in enumerate(topo.input_to_hidden):
        products[j] = spec.input_values[c.source - 1] * weights[j]
        hidden[c.target - 1] += products[j]
    outputs = [0] * topo.n_outputs
    k = len(topo.input_to_hidden)
    for j, c in enumerate(topo.hidden_to_output, k):
        products[j] = hidden[c.source - 1] * weights[j]
        outputs[c.target - 1] += products[j]
    return ForwardValues(products, hidden, outputs)


def satisfies(spec: PerceptronSpec, weights: Sequence[int]) -> bool:
    outputs = forward_values(spec, weights).outputs
    return all(spec.condition.holds(v, spec.threshold) for v in outputs)


def _sum_width(widths: list[int]) -> int:
    return max(widths) + (len(widths) - 1).bit_length()


@dataclass
class RegisterPlan:
    weight_regs: list[Register]
    input_regs: list[Register]
    threshold_reg: Register
    product_regs: list[Register]  # one per weight, same index
    hidden_regs: list[Register]  # may alias a product register
    output_regs: list[Register]
    flag_reg: Register
    work_reg: Register
    mcx_reg: Register | None = None
    body: GroverBody | None = field(default=None, repr=False)

    @property
    def weight_qubits(self) -> list[int]:
        return [q for r in self.weight_regs for q in r.qubits]

    @property
    def flag_qubits(self) -> list[int]:
        return self.flag_reg.qubits

    def summary(self) -> str:
        lines = ["register      role       offset  width"]
        seen = set()
        for reg in (
            self.weight_regs + self.input_regs + [self.threshold_reg] + self.product_regs
            + self.hidden_regs + self.output_regs + [self.flag_reg, self.work_reg]
            + ([self.mcx_reg] if self.mcx_reg else [])
        ):
            if reg.name in seen:
                continue
            seen.add(reg.name)
            lines.append(f"{reg.name:<13} {reg.role.value:<10} {reg.offset:>6}  {reg.width:>5}")
        order = " ".join(r.name for r in reversed(self.weight_regs))
        lines.append(f"decode order (left to right in measured strings): {order}")
        return "\n".join(lines)


def _work_qubits_needed(spec: PerceptronSpec, hidden_w, output_w, product_w) -> int:
    topo = spec.topology
    need = 1  # carry-in for the controlled adders inside the multipliers
    for sums, feeds in ((hidden_w, topo.hidden_inputs), (output_w, topo.output_inputs)):
        for n, width in enumerate(sums, 1):
            js = feeds(n)
            if len(js) > 1:
                need = max(need, 1 + width - min(product_w[j] for j in js))
    if spec.condition is Condition.GREATER_OR_EQUAL:
        need = max(need, max(output_w) + 2)
    return need


def _mcx_qubits_needed(spec: PerceptronSpec, output_w) -> int:
    controls = [3]  # controlled adders: CCX plus the control line
    controls.append(spec.n_weights * spec.weight_width - 1)  # diffusion NCZ
    controls.append(spec.topology.n_outputs - 1)  # flag NCZ
    if spec.condition is Condition.EQUAL:
        controls.extend(output_w)
    return max(k - 2 for k in controls)


def build_param_network(spec: PerceptronSpec, iterations: int = 1):
    """Allocate every register and load the input and threshold constants.

    Returns ``(circuit, plan, body)``; the circuit holds only the X gates that
    encode the inputs and the threshold.
    """
    topo = spec.topology
    ww, iw = spec.weight_width, spec.input_width

    product_w = [0] * topo.n_weights
    for j in range(len(topo.input_to_hidden)):
        product_w[j] = iw + ww
    hidden_w = [_sum_width([product_w[j] for j in topo.hidden_inputs(h)])
                for h in range(1, topo.n_hidden + 1)]
    for j, c in enumerate(topo.hidden_to_output, len(topo.input_to_hidden)):
        product_w[j] = hidden_w[c.source - 1] + ww
    output_w = [_sum_width([product_w[j] for j in topo.output_inputs(o)])
                for o in range(1, topo.n_outputs + 1)]

    tw = spec.threshold_width if spec.threshold_width is not None else max(output_w)
    if tw > min(output_w):
        raise ValidationError(
            f"threshold width {tw} exceeds output sum width {min(output_w)}; widen the threshold register instead"
        )
    if spec.threshold >= (1 << tw):
        raise ValidationError(f"threshold {spec.threshold} does not fit in {tw} bits")

    c = Circuit()
    weights = [c.allocate_register(f"w{j + 1}", ww, Role.WEIGHT) for j in range(topo.n_weights)]
    inputs = [c.allocate_register(f"i{i + 1}", iw, Role.INPUT) for i in range(topo.n_inputs)]
    threshold = c.allocate_register("ac", tw, Role.THRESHOLD)
    products = [c.allocate_register(f"p{j + 1}", product_w[j], Role.PRODUCT) for j in range(topo.n_weights)]

    def sums(prefix, widths, feeds):
        regs = []
        for n, width in enumerate(widths, 1):
            js = feeds(n)
            if len(js) == 1:
                regs.append(products[js[0]])
            else:
                regs.append(c.allocate_register(f"{prefix}{n}", width, Role.SUM))
        return regs

    hidden = sums("h", hidden_w, topo.hidden_inputs)
    outputs = sums("o", output_w, topo.output_inputs)
    flags = c.allocate_register("flag", topo.n_outputs, Role.FLAG)
    work = c.allocate_register("anc", _work_qubits_needed(spec, hidden_w, output_w, product_w), Role.ANCILLA)
    n_mcx = _mcx_qubits_needed(spec, output_w)
    mcx = c.allocate_register("mcx_anc", n_mcx, Role.ANCILLA) if n_mcx > 0 else None

    for reg, value in zip(inputs, spec.input_values):
        c.extend(x_gate([], q) for i, q in enumerate(reg) if (value >> i) & 1)
    c.extend(x_gate([], q) for i, q in enumerate(threshold) if (spec.threshold >> i) & 1)

    body = GroverBody(weights, iterations)
    plan = RegisterPlan(weights, inputs, threshold, products, hidden, outputs, flags, work, mcx, body)
    return c, plan, body


def build_forward_pass(circuit: Circuit, plan: RegisterPlan, spec: PerceptronSpec,
                       pool: AncillaPool | None = None) -> BlockHandle:
    """Compute every product, hidden value and output value into its register."""
    topo = spec.topology
    pool = pool or AncillaPool.from_register(plan.work_reg)
    start = len(circuit.gates)

    def layer(connections, offset, sources, sums, feeds):
        for j, conn in enumerate(connections, offset):
            build_multiplier(circuit, plan.weight_regs[j], sources[conn.source - 1],
                             plan.product_regs[j], pool)
        for n, reg in enumerate(sums, 1):
            js = feeds(n)
            if len(js) > 1:
                for j in js:
                    build_adder(circuit, plan.product_regs[j], reg, None, pool)

    layer(topo.input_to_hidden, 0, plan.input_regs, plan.hidden_regs, topo.hidden_inputs)
    layer(topo.hidden_to_output, len(topo.input_to_hidden), plan.hidden_regs,
          plan.output_regs, topo.output_inputs)
    return _finish(circuit, start, [plan.weight_qubits], [r.qubits for r in plan.output_regs])


def build_condition(circuit: Circuit, plan: RegisterPlan, spec: PerceptronSpec,
                    pool: AncillaPool | None = None) -> BlockHandle:
    """Set one flag qubit per output neuron where the threshold condition holds."""
    pool = pool or AncillaPool.from_register(plan.work_reg)
    start = len(circuit.gates)
    for reg, flag in zip(plan.output_regs, plan.flag_qubits):
        if spec.threshold >= (1 << reg.width):
            raise ValidationError(f"threshold {spec.threshold} is wider than sum register {reg.name}")
        if spec.condition is Condition.EQUAL:
            build_equality_comparator(circuit, reg, spec.threshold, flag)
        else:
            build_geq_comparator(circuit, reg, spec.threshold, flag, pool)
    return _finish(circuit, start, [r.qubits for r in plan.output_regs], [plan.flag_qubits])


def build_oracle(circuit: Circuit, plan: RegisterPlan, spec: PerceptronSpec) -> BlockHandle:
    """Forward pass, comparison, phase flip, then the mirrored arithmetic."""
    start = len(circuit.gates)
    fp = build_forward_pass(circuit, plan, spec)
    cond = build_condition(circuit, plan, spec)
    phase_flip(circuit, plan.flag_qubits)
    uncompute(circuit, cond)
    uncompute(circuit, fp)
    return _finish(circuit, start, [plan.weight_qubits], [plan.weight_qubits])


def _max_mcx_controls(circuit: Circuit) -> int:
    # NCZ decomposes to H-MCX-H with the same control count
    return max((len(g.controls) for g in circuit.gates
                if g.kind in (GateKind.MCX, GateKind.NCZ)), default=0)


def synthesize_training_circuit(spec: PerceptronSpec, iterations: int = 1):
    """Full weight-search circuit; returns ``(circuit, plan)``.

    Layout: constant loading, Hadamards on the weights, ``iterations`` rounds
    of (oracle, diffusion), then a barrier and one measurement per weight
    qubit.
    """
    circuit, plan, body = build_param_network(spec, iterations)
    hadamard_init(circuit, body)
    grover_iterate(circuit, body, lambda c: build_oracle(c, plan, spec))
    circuit.append(Gate(GateKind.BARRIER, (), tuple(plan.weight_qubits)))
    circuit.extend(Gate(GateKind.MEASURE, (), (q,)) for q in plan.weight_qubits)

    have = plan.mcx_reg.width if plan.mcx_reg else 0
    assert _max_mcx_controls(circuit) - 2 <= have, "mcx ancilla reservation too small"
    return circuit, plan


def decode_measurement(bits: str, plan: RegisterPlan) -> WeightAssignment:
    """Split a measured weight bitstring into ``(w1, ..., wk)``.

    The first-declared register sits in the rightmost field; within a field
    the leftmost character is the most significant bit.
    """
    qubits = sorted(plan.weight_qubits)
    if len(bits) != len(qubits):
        raise ValueError(f"expected {len(qubits)} bits, got {len(bits)}: {bits!r}")
    if set(bits) - {"0", "1"}:
        raise ValueError(f"not a bitstring: {bits!r}")
    pos = {q: len(bits) - 1 - j for j, q in enumerate(qubits)}
    return tuple(
        sum(int(bits[pos[q]]) << i for i, q in enumerate(reg))
        for reg in plan.weight_regs
    )


def weight_fields(bits: str, plan: RegisterPlan) -> list[tuple[str, str, int]]:
    """``(name, binary field, value)`` per weight, leftmost field first."""
    values = decode_measurement(bits, plan)
    return [
        (reg.name, format(v, f"0{reg.width}b"), v)
        for reg, v in reversed(list(zip(plan.weight_regs, values)))
    ]

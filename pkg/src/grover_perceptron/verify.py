"""Classical ground truth for the weight search.

:func:`brute_force` enumerates every weight assignment with exact integer
arithmetic.  :func:`cross_check` compares a measured (or simulated)
probability table against it and against the closed-form Grover success
probability.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ResourceError
from .grover import solution_mass
from .perceptron import (
    Condition,
    PerceptronSpec,
    RegisterPlan,
    WeightAssignment,
    build_param_network,
    decode_measurement,
    forward_values,
)

ENUMERATION_GUARD_BITS = 24
_CHUNK = 1 << 18


@dataclass
class SolutionSet:
    solutions: set[WeightAssignment]
    search_space_size: int
    # largest value each intermediate takes over the whole search space
    max_products: list[int] = field(default_factory=list)
    max_hidden: list[int] = field(default_factory=list)
    max_outputs: list[int] = field(default_factory=list)

    @property
    def solution_count(self) -> int:
        return len(self.solutions)

    def __contains__(self, item) -> bool:
        return tuple(item) in self.solutions


def _forward_arrays(spec: PerceptronSpec, w: list[np.ndarray]):
    topo = spec.topology
    products = [None] * topo.n_weights
    hidden = [np.zeros_like(w[0]) for _ in range(topo.n_hidden)]
    for j, c in enumerate(topo.input_to_hidden):
        products[j] = spec.input_values[c.source - 1] * w[j]
        hidden[c.target - 1] = hidden[c.target - 1] + products[j]
    outputs = [np.zeros_like(w[0]) for _ in range(topo.n_outputs)]
    for j, c in enumerate(topo.hidden_to_output, len(topo.input_to_hidden)):
        products[j] = hidden[c.source - 1] * w[j]
        outputs[c.target - 1] = outputs[c.target - 1] + products[j]
    return products, hidden, outputs


def brute_force(spec: PerceptronSpec, guard_bits: int = ENUMERATION_GUARD_BITS) -> SolutionSet:
    """Every weight assignment satisfying the spec's condition on all outputs."""
    k, ww = spec.n_weights, spec.weight_width
    bits = k * ww
    if bits > guard_bits:
        raise ResourceError(f"{bits} weight bits exceeds the enumeration guard of {guard_bits}")
    n = 1 << bits
    mask = (1 << ww) - 1
    # all values are monotone in the weights, so the all-max assignment bounds them
    top = forward_values(spec, [mask] * k)
    dtype = np.int64 if max(top.products + top.hidden + top.outputs, default=0) < (1 << 62) else object

    solutions: set[WeightAssignment] = set()
    max_p = [0] * k
    max_h = [0] * spec.topology.n_hidden
    max_o = [0] * spec.topology.n_outputs
    for lo in range(0, n, _CHUNK):
        idx = np.arange(lo, min(n, lo + _CHUNK), dtype=np.int64)
        w = [((idx >> (j * ww)) & mask).astype(dtype) for j in range(k)]
        products, hidden, outputs = _forward_arrays(spec, w)
        ok = np.ones(len(idx), dtype=bool)
        for o in outputs:
            if spec.condition is Condition.EQUAL:
                ok &= np.asarray(o == spec.threshold, dtype=bool)
            else:
                ok &= np.asarray(o >= spec.threshold, dtype=bool)
        for i in np.flatnonzero(ok):
            solutions.add(tuple(int(x[i]) for x in w))
        max_p = [max(m, int(np.max(a))) for m, a in zip(max_p, products)]
        max_h = [max(m, int(np.max(a))) for m, a in zip(max_h, hidden)]
        max_o = [max(m, int(np.max(a))) for m, a in zip(max_o, outputs)]
    return SolutionSet(solutions, n, max_p, max_h, max_o)


def check_plan_widths(spec: PerceptronSpec, plan: RegisterPlan,
                      truth: SolutionSet | None = None) -> list[str]:
    """Intermediate values that would overflow their planned registers."""
    truth = truth or brute_force(spec)
    problems = []
    groups = (
        ("product", plan.product_regs, truth.max_products),
        ("hidden", plan.hidden_regs, truth.max_hidden),
        ("output", plan.output_regs, truth.max_outputs),
    )
    for what, regs, maxima in groups:
        for reg, m in zip(regs, maxima):
            if m >= (1 << reg.width):
                problems.append(f"{what} register {reg.name} ({reg.width} bits) overflows at value {m}")
    return problems


def encode_assignment(values: WeightAssignment, plan: RegisterPlan) -> str:
    qubits = sorted(plan.weight_qubits)
    bit = {}
    for reg, v in zip(plan.weight_regs, values):
        for i, q in enumerate(reg):
            bit[q] = (v >> i) & 1
    return "".join(str(bit[q]) for q in reversed(qubits))


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


@dataclass
class VerificationReport:
    checks: list[Check]
    solution_count: int
    search_space_size: int
    iterations: int
    solution_mass: float
    expected_mass: float
    missing: list[str] = field(default_factory=list)
    unexpected: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "status": "PASS" if self.passed else "FAIL",
            "solution_count": self.solution_count,
            "search_space_size": self.search_space_size,
            "iterations": self.iterations,
            "solution_mass": self.solution_mass,
            "expected_mass": self.expected_mass,
            "missing": self.missing,
            "unexpected": self.unexpected,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        lines = [
            f"{'PASS' if self.passed else 'FAIL'}: M={self.solution_count} N={self.search_space_size} "
            f"k={self.iterations} solution mass {self.solution_mass:.6f} (expected {self.expected_mass:.6f})"
        ]
        for c in self.checks:
            lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
        return "\n".join(lines)


def cross_check(spec: PerceptronSpec, probabilities: Mapping[str, float], tolerance: float = 1e-9,
                iterations: int = 1, plan: RegisterPlan | None = None) -> VerificationReport:
    """Compare a weight probability table with brute force and Grover theory.

    Checks that the ``M`` most probable strings are exactly the solutions,
    that solutions share one probability and non-solutions another, and that
    the total solution probability is ``sin^2((2k+1) asin(sqrt(M/N)))``.
    """
    if plan is None:
        plan = build_param_network(spec, iterations)[1]
    truth = brute_force(spec)
    m, n = truth.solution_count, truth.search_space_size
    expected_strings = {encode_assignment(s, plan) for s in truth.solutions}

    ranked = sorted(probabilities, key=lambda s: (-probabilities[s], s))
    top = set(ranked[:m])
    missing = sorted(expected_strings - top)
    unexpected = sorted(top - expected_strings)
    checks = [Check(
        "top-M strings are the brute-force solutions",
        not missing and not unexpected and len(probabilities) == n,
        "match" if not (missing or unexpected) else f"missing {missing}, unexpected {unexpected}",
    )]

    decoded_ok = all(decode_measurement(s, plan) in truth for s in top)
    checks.append(Check("top strings decode to satisfying weights", decoded_ok,
                        f"{sum(decode_measurement(s, plan) in truth for s in top)}/{len(top)} satisfy"))

    sol_p = [probabilities.get(s, 0.0) for s in expected_strings]
    non_p = [p for s, p in probabilities.items() if s not in expected_strings]
    spread_sol = (max(sol_p) - min(sol_p)) if sol_p else 0.0
    spread_non = (max(non_p) - min(non_p)) if non_p else 0.0
    checks.append(Check("solutions share one probability, non-solutions another",
                        spread_sol <= tolerance and spread_non <= tolerance,
                        f"spreads {spread_sol:.3g} / {spread_non:.3g}"))

    mass = float(sum(sol_p))
    expected = solution_mass(m, n, iterations) if m else 0.0
    checks.append(Check("solution mass matches Grover formula", abs(mass - expected) <= tolerance,
                        f"|{mass:.12f} - {expected:.12f}| = {abs(mass - expected):.3g}"))

    overflow = check_plan_widths(spec, plan, truth)
    checks.append(Check("no intermediate overflows its register", not overflow,
                        "; ".join(overflow) or "all widths sufficient"))
    return VerificationReport(checks, m, n, iterations, mass, expected, missing, unexpected)

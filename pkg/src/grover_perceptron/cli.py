"""Command-line front end.

    grover-perceptron synth  SPEC [--iterations K] [--out circuit.qasm]
    grover-perceptron run    SPEC [--iterations K] [--shots 8192] [--seed S] [--out hist.json]
    grover-perceptron verify SPEC [--iterations K] [--expected FILE] [--report report.json]
    grover-perceptron decode BITSTRING SPEC

SPEC is a JSON spec file path or the name of a bundled example
(``example1``, ``example2``, ``example3``).  The default seed can be set with
the ``GROVER_PERCEPTRON_SEED`` environment variable; ``--seed`` wins.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from .errors import CircuitError, ResourceError, SchemaError, StructureError
from .perceptron import (
    PerceptronSpec,
    RegisterPlan,
    build_param_network,
    synthesize_training_circuit,
    weight_fields,
)
from .qasm import emit_qasm
from .sampling import DEFAULT_SEED, Histogram, sample_shots
from .simulate import measure_weights, run_branch
from .specfile import EXAMPLES, example_path, load_expected_strings, load_spec
from .verify import Check, VerificationReport, brute_force, cross_check, encode_assignment

log = logging.getLogger(__name__)

SEED_ENV = "GROVER_PERCEPTRON_SEED"
DOMINANCE_FACTOR = 1.5


def resolve_spec(arg: str | Path) -> PerceptronSpec:
    if str(arg) in EXAMPLES:
        return load_spec(example_path(str(arg)))
    return load_spec(arg)


def simulate(spec: PerceptronSpec, iterations: int = 1):
    """Synthesize and run the branch engine; returns ``(circuit, plan, probabilities)``."""
    circuit, plan = synthesize_training_circuit(spec, iterations)
    t0 = time.perf_counter()
    state = run_branch(circuit, plan.weight_qubits)
    log.debug("%d qubits, %d gates, %d branches simulated in %.3f s", circuit.qubit_count,
              len(circuit.gates), len(state.amplitudes), time.perf_counter() - t0)
    return circuit, plan, measure_weights(state, plan)


def dominant_strings(probabilities: dict[str, float]) -> list[str]:
    """Strings whose probability exceeds 1.5x the uniform level."""
    level = DOMINANCE_FACTOR / len(probabilities)
    return sorted(s for s, p in probabilities.items() if p > level)


def format_weight_table(strings, plan: RegisterPlan, counts: dict[str, int] | None = None) -> str:
    names = [r.name for r in reversed(plan.weight_regs)]
    width = max(len(plan.weight_qubits), len("measured"))
    head = f"{'measured':<{width}}  " + "  ".join(f"{n:<8}" for n in names)
    if counts is not None:
        head += "  count"
    rows = [head.rstrip()]
    for s in strings:
        cells = "  ".join(f"{f}({v})".ljust(8) for _, f, v in weight_fields(s, plan))
        row = f"{s:<{width}}  {cells}"
        if counts is not None:
            row += f"  {counts.get(s, 0)}"
        rows.append(row.rstrip())
    return "\n".join(rows)


def default_seed() -> int:
    env = os.environ.get(SEED_ENV)
    return int(env) if env else DEFAULT_SEED


def cmd_synth(spec_path, iterations: int = 1, out: str | Path | None = "circuit.qasm") -> str:
    spec = resolve_spec(spec_path)
    circuit, plan = synthesize_training_circuit(spec, iterations)
    text = emit_qasm(circuit)
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    print(plan.summary())
    print(f"qubits: {circuit.qubit_count}, IR gates: {len(circuit.gates)}")
    if out is not None:
        print(f"wrote {out}")
    return text


def cmd_run(spec_path, iterations: int = 1, shots: int = 8192, seed: int | None = None,
            out: str | Path | None = "hist.json") -> Histogram:
    if shots <= 0:
        raise ValueError(f"shots must be positive, got {shots}")
    seed = default_seed() if seed is None else seed
    spec = resolve_spec(spec_path)
    _, plan, probs = simulate(spec, iterations)
    hist = sample_shots(probs, shots, seed)
    hist.metadata = {
        "iterations": iterations,
        "decode_order": [r.name for r in reversed(plan.weight_regs)],
        "field_widths": [r.width for r in reversed(plan.weight_regs)],
    }
    if out is not None:
        out = Path(out)
        out.write_text(hist.to_csv() if out.suffix == ".csv" else hist.to_json(), encoding="utf-8")
    top = dominant_strings(probs)
    top.sort(key=lambda s: (-hist.counts.get(s, 0), s))
    print(f"shots={shots} seed={seed} rng={hist.rng}; {len(top)} dominant strings")
    print(format_weight_table(top, plan, hist.counts))
    return hist


def cmd_verify(spec_path, iterations: int = 1, expected: str | Path | None = None,
               report: str | Path | None = None, tolerance: float = 1e-9) -> VerificationReport:
    spec = resolve_spec(spec_path)
    _, plan, probs = simulate(spec, iterations)
    rep = cross_check(spec, probs, tolerance, iterations, plan)
    if expected is not None:
        want = set(load_expected_strings(expected))
        got = {encode_assignment(s, plan) for s in brute_force(spec).solutions}
        dominant = set(dominant_strings(probs))
        ok = want == got == dominant
        detail = "match" if ok else (
            f"expected-only {sorted(want - dominant)}, simulated-only {sorted(dominant - want)}"
        )
        rep.checks.append(Check(f"dominant strings match {Path(expected).name}", ok, detail))
    if report is not None:
        Path(report).write_text(rep.to_json(), encoding="utf-8")
    print(rep.to_text())
    return rep


def cmd_decode(bitstring: str, spec_path) -> list[tuple[str, str, int]]:
    spec = resolve_spec(spec_path)
    plan = build_param_network(spec)[1]
    fields = weight_fields(bitstring, plan)
    print(format_weight_table([bitstring], plan))
    return fields


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grover-perceptron", description=__doc__.split("\n\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="emit the training circuit as OPENQASM 2.0")
    s.add_argument("spec")
    s.add_argument("--iterations", type=int, default=1)
    s.add_argument("--out", default="circuit.qasm")

    r = sub.add_parser("run", help="simulate and sample a measurement histogram")
    r.add_argument("spec")
    r.add_argument("--iterations", type=int, default=1)
    r.add_argument("--shots", type=int, default=8192)
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--out", default="hist.json", help="histogram path (.json or .csv)")

    v = sub.add_parser("verify", help="check simulation against brute force")
    v.add_argument("spec")
    v.add_argument("--iterations", type=int, default=1)
    v.add_argument("--expected", default=None, help="file of expected measured strings")
    v.add_argument("--report", default=None, help="write the JSON report here")
    v.add_argument("--tolerance", type=float, default=1e-9)

    d = sub.add_parser("decode", help="split a measured bitstring into weights")
    d.add_argument("bitstring")
    d.add_argument("spec")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        if args.command == "synth":
            cmd_synth(args.spec, args.iterations, args.out)
        elif args.command == "run":
            cmd_run(args.spec, args.iterations, args.shots, args.seed, args.out)
        elif args.command == "verify":
            rep = cmd_verify(args.spec, args.iterations, args.expected, args.report, args.tolerance)
            return 0 if rep.passed else 1
        elif args.command == "decode":
            cmd_decode(args.bitstring, args.spec)
    except (SchemaError, CircuitError, ResourceError, StructureError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

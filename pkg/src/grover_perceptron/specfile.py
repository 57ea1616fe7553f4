"""JSON spec files describing a perceptron weight search.

Example::

    {
      "input_to_hidden": [{"from": 1, "to": 1}, {"from": 2, "to": 1}],
      "hidden_to_output": [{"from": 1, "to": 1}],
      "inputs": [3, 2],
      "input_width": 2,
      "weight_width": 2,
      "threshold": 6,
      "threshold_width": 6,
      "condition": "eq"
    }

``threshold_width`` is optional and defaults to the output-sum width.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import SchemaError
from .perceptron import Condition, PerceptronSpec, Topology

_CONNECTION = {
    "type": "object",
    "properties": {"from": {"type": "integer", "minimum": 1}, "to": {"type": "integer", "minimum": 1}},
    "required": ["from", "to"],
    "additionalProperties": False,
}

SCHEMA = {
    "type": "object",
    "properties": {
        "input_to_hidden": {"type": "array", "items": _CONNECTION, "minItems": 1},
        "hidden_to_output": {"type": "array", "items": _CONNECTION, "minItems": 1},
        "inputs": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
        "input_width": {"type": "integer", "minimum": 1},
        "weight_width": {"type": "integer", "minimum": 1},
        "threshold": {"type": "integer", "minimum": 0},
        "threshold_width": {"type": "integer", "minimum": 1},
        "condition": {"enum": [c.value for c in Condition]},
    },
    "required": [
        "input_to_hidden", "hidden_to_output", "inputs", "input_width",
        "weight_width", "threshold", "condition",
    ],
    "additionalProperties": False,
}

EXAMPLES = ("example1", "example2", "example3")


def spec_from_dict(doc: dict) -> PerceptronSpec:
    errors = sorted(jsonschema.Draft7Validator(SCHEMA).iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        msgs = []
        for e in errors:
            where = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in e.absolute_path)
            msgs.append(f"{where.lstrip('.') or '<root>'}: {e.message}")
        raise SchemaError("; ".join(msgs))
    topo = Topology(
        [(c["from"], c["to"]) for c in doc["input_to_hidden"]],
        [(c["from"], c["to"]) for c in doc["hidden_to_output"]],
    )
    return PerceptronSpec(
        topo,
        list(doc["inputs"]),
        doc["input_width"],
        doc["weight_width"],
        doc["threshold"],
        doc.get("threshold_width"),
        Condition(doc["condition"]),
    )


def spec_to_dict(spec: PerceptronSpec) -> dict:
    doc = {
        "input_to_hidden": [{"from": c.source, "to": c.target} for c in spec.topology.input_to_hidden],
        "hidden_to_output": [{"from": c.source, "to": c.target} for c in spec.topology.hidden_to_output],
        "inputs": list(spec.input_values),
        "input_width": spec.input_width,
        "weight_width": spec.weight_width,
        "threshold": spec.threshold,
        "condition": spec.condition.value,
    }
    if spec.threshold_width is not None:
        doc["threshold_width"] = spec.threshold_width
    return doc


def load_spec(path: str | Path) -> PerceptronSpec:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc}") from None
    return spec_from_dict(doc)


def example_path(name: str) -> Path:
    """Path of a bundled example spec (``example1`` .. ``example3``)."""
    return Path(str(resources.files("grover_perceptron") / "specs" / f"{name}.json"))


def expected_strings_path(name: str) -> Path:
    return Path(str(resources.files("grover_perceptron") / "specs" / f"{name}.expected.txt"))


def load_expected_strings(path: str | Path) -> list[str]:
    """Measured strings listed one per line; ``#`` starts a comment."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out

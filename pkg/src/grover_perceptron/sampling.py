"""Seeded shot sampling.

Shots are drawn by inverse-CDF lookup.  Uniforms come from the raw 64-bit
output of numpy's PCG64 bit generator (top 53 bits scaled by 2**-53); the
cumulative distribution is built over bitstrings in ascending order.  Both
steps are plain IEEE arithmetic, so a seed reproduces the same histogram on
any platform and numpy version that ships PCG64.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

RNG_NAME = "pcg64-inverse-cdf"
DEFAULT_SEED = 20220304


@dataclass
class Histogram:
    counts: dict[str, int]
    shots: int
    seed: int
    rng: str = RNG_NAME
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {
            "shots": self.shots,
            "seed": self.seed,
            "rng": self.rng,
            "counts": dict(sorted(self.counts.items())),
        }
        if self.metadata:
            doc["metadata"] = self.metadata
        return json.dumps(doc, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bitstring", "count"])
        for k, v in sorted(self.counts.items()):
            w.writerow([k, v])
        return buf.getvalue()

    @classmethod
    def from_json(cls, text: str) -> Histogram:
        doc = json.loads(text)
        return cls(doc["counts"], doc["shots"], doc["seed"], doc.get("rng", RNG_NAME),
                   doc.get("metadata", {}))

    def most_common(self, n: int | None = None) -> list[tuple[str, int]]:
        items = sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return items[:n] if n is not None else items


def uniforms(seed: int, count: int) -> np.ndarray:
    raw = np.random.PCG64(seed).random_raw(count)
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def sample_shots(probabilities: Mapping[str, float], shots: int, seed: int = DEFAULT_SEED) -> Histogram:
    """Draw ``shots`` outcomes from ``probabilities`` (bitstring -> probability)."""
    if shots <= 0:
        raise ValueError(f"shots must be positive, got {shots}")
    keys = sorted(probabilities)
    p = np.array([probabilities[k] for k in keys], dtype=np.float64)
    if np.any(p < -1e-12):
        raise ValueError("negative probability")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {total}, not 1")
    cdf = np.cumsum(p)
    u = uniforms(seed, shots) * cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    idx = np.minimum(idx, len(keys) - 1)
    hits = np.bincount(idx, minlength=len(keys))
    counts = {keys[i]: int(c) for i, c in enumerate(hits) if c}
    return Histogram(counts, shots, seed)

"""Experiment result schema and canonical JSON for byte-exact regression."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from memcortex.harness import stats
from memcortex.harness.rng import Mulberry32


def _canonical(obj):
    """Make floats/ints/containers JSON-stable (repr round-trip for floats)."""
    if isinstance(obj, dict):
        return {str(k): _canonical(obj[k]) for k in sorted(obj, key=str)}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    return obj


def canonical_json(obj) -> str:
    """Sorted keys, shortest round-trip float repr; byte-stable across runs."""
    return json.dumps(_canonical(obj), sort_keys=True, indent=1)


@dataclass
class ExperimentResult:
    experiment: str
    config: dict
    per_seed: list[dict]
    aggregate: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": self.config,
            "per_seed": self.per_seed,
            "aggregate": self.aggregate,
            "stats": self.stats,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())


def aggregate_metric(values: list[float], ci_seed: int = 20260421) -> dict:
    """Mean, sd, and seeded 95% bootstrap CI for one metric column."""
    rng = Mulberry32(ci_seed)
    lo, hi = stats.bootstrap_ci(values, rng) if values else (0.0, 0.0)
    return {
        "mean": stats.mean(values) if values else 0.0,
        "sd": stats.stdev(values),
        "ci95": [lo, hi],
        "n": len(values),
    }


def paired_stats(a: list[float], b: list[float]) -> dict:
    """Wilcoxon p and Cohen's d for two paired metric columns."""
    out: dict = {}
    try:
        _, p = stats.wilcoxon_signed_rank(a, b)
        out["wilcoxon_p"] = p
    except ValueError as exc:
        out["wilcoxon_p"] = None
        out["wilcoxon_note"] = str(exc)
    try:
        d = stats.cohens_d(a, b)
        out["cohens_d"] = d if math.isfinite(d) else ("inf" if d > 0 else "-inf")
    except ValueError as exc:
        out["cohens_d"] = None
        out["cohens_note"] = str(exc)
    return out

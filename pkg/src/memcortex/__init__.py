"""memcortex: a deterministic, self-contained agent-memory engine.

Seven addressable memory layers orchestrated by a coordinator, a synaptic
knowledge graph with two-factor (weight + consolidation variance) edges,
Ebbinghaus/triple-copy decay, prediction-error-coupled spaced repetition,
an offline simulation-selection consolidation loop, Bayesian confidence
propagation, a four-channel neuromodulator, reconsolidation with rollback,
and priority/stability/metacognition gating.

Everything runs on a simulated clock and seeded PRNG streams; no wall-clock
reads, no network, no model calls. The `memcortex.harness` subpackage holds
the synthetic-benchmark generators, metrics, statistics, and experiment
drivers; `memcortex.cli` exposes them as a command-line tool.
"""

from memcortex.clock import SimClock
from memcortex.model import LayerKind, MemoryItem
from memcortex.coordinator import AblationFlags, EngineConfig, MemoryEngine

__all__ = [
    "AblationFlags",
    "EngineConfig",
    "LayerKind",
    "MemoryEngine",
    "MemoryItem",
    "SimClock",
]

__version__ = "0.1.0"

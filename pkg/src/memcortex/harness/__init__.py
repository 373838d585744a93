"""Seeded synthetic benchmarks: generators, metrics, statistics, experiments."""

from memcortex.harness.rng import Mulberry32

__all__ = ["Mulberry32"]

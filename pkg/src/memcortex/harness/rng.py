"""Mulberry32 PRNG: 32-bit state, bit-exact across platforms.

Port of the widely used JavaScript mulberry32 generator:

    a |= 0; a = a + 0x6D2B79F5 | 0;
    t = Math.imul(a ^ a >>> 15, 1 | a);
    t = t + Math.imul(t ^ t >>> 7, 61 | t) ^ t;
    return ((t ^ t >>> 14) >>> 0) / 4294967296;

All experiment randomness flows through this class so that runs are
reproducible regardless of Python's own hash/seed machinery.
"""

from __future__ import annotations

import math

_MASK = 0xFFFFFFFF


class Mulberry32:
    def __init__(self, seed: int):
        self.state = seed & _MASK
        self._gauss_spare: float | None = None

    def next_uint32(self) -> int:
        self.state = (self.state + 0x6D2B79F5) & _MASK
        t = self.state
        t = ((t ^ (t >> 15)) * (t | 1)) & _MASK
        t = (t ^ (t + (((t ^ (t >> 7)) * (t | 61)) & _MASK))) & _MASK
        return (t ^ (t >> 14)) & _MASK

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return self.next_uint32() / 4294967296.0

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("randint bound must be positive")
        return int(self.random() * n)

    def choice(self, seq):
        return seq[self.randint(len(seq))]

    def sample_pair(self, n: int) -> tuple[int, int]:
        """Two distinct indices from range(n)."""
        if n < 2:
            raise ValueError("need at least two elements")
        a = self.randint(n)
        b = self.randint(n - 1)
        if b >= a:
            b += 1
        return a, b

    def shuffle(self, seq: list) -> None:
        """In-place Fisher-Yates."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.randint(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def gauss(self) -> float:
        """Standard normal via Box-Muller (two uniforms per pair)."""
        if self._gauss_spare is not None:
            value = self._gauss_spare
            self._gauss_spare = None
            return value
        u1 = self.random()
        u2 = self.random()
        # Guard the log singularity at u1 == 0.
        while u1 <= 1e-12:
            u1 = self.random()
        radius = math.sqrt(-2.0 * math.log(u1))
        theta = 2.0 * math.pi * u2
        self._gauss_spare = radius * math.sin(theta)
        return radius * math.cos(theta)

    def unit_vector(self, dim: int) -> list[float]:
        """Random direction on the unit sphere."""
        vec = [self.gauss() for _ in range(dim)]
        norm = math.sqrt(sum(x * x for x in vec))
        while norm < 1e-9:
            vec = [self.gauss() for _ in range(dim)]
            norm = math.sqrt(sum(x * x for x in vec))
        return [x / norm for x in vec]

    def spawn(self, stream: int) -> "Mulberry32":
        """Independent child stream, keyed off the current state."""
        return Mulberry32((self.state ^ (0x9E3779B9 * (stream + 1))) & _MASK)


def derive(seed: int, salt: int) -> Mulberry32:
    """Well-mixed substream: nearby (seed, salt) pairs decorrelate."""
    state = (seed * 0x9E3779B1) & _MASK
    state ^= (salt * 0x85EBCA77) & _MASK
    state = (state ^ (state >> 13)) * 0xC2B2AE35 & _MASK
    return Mulberry32(state & _MASK)


# The ten canonical experiment seeds.
DEFAULT_SEEDS = (42, 123, 456, 789, 1024, 2048, 3072, 4096, 5120, 6144)

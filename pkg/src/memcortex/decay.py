"""Forgetting curves: Ebbinghaus base decay, emotional modulation, triple-copy.

Base retrievability is exponential in elapsed time over stability,

    R(t) = e^(-t/S)            (t, S in days)

Emotional arousal at encoding multiplies stability linearly in |valence| up
to a cap (3x at |v| = 1), and each successful review multiplies stability by
a fixed growth factor (1.3x).

Triple-copy storage keeps three traces per item with divergent dynamics:

    fast(t) = s0 * e^(-t/tau_f)                 tau_f = 4 h
    med(t)  = 0.8 * s0 * e^(-t/tau_m)           tau_m = 14 d
    deep(t) = min(s0 * ln(1 + t/tau_d), s0)     tau_d = 7 d

The composite strength is the max of the three. The deep trace is clamped at
s0: the raw logarithm is unbounded, and strengths must stay comparable with
the forgetting threshold. In the live engine the deep trace advances only on
sleep-consolidation passes (see `CopySet.consolidated_days`); the pure curve
below describes its trajectory under uninterrupted nightly consolidation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

HOURS_PER_DAY = 24.0


@dataclass
class DecayConfig:
    default_stability: float = 1.0        # days
    emotional_multiplier_cap: float = 3.0
    review_growth: float = 1.3
    forget_threshold: float = 0.1
    tau_fast_hours: float = 4.0
    tau_medium_days: float = 14.0
    tau_deep_days: float = 7.0
    medium_scale: float = 0.8
    stability_cap: float = 5.0            # ceiling for grown stability, days

    def validate(self) -> None:
        if min(self.default_stability, self.review_growth, self.forget_threshold) <= 0:
            raise ValueError("decay parameters must be positive")
        if self.emotional_multiplier_cap < 1.0:
            raise ValueError("emotional cap must be >= 1")


def retrievability(stability_days: float, elapsed_days: float) -> float:
    """R(t) = e^(-t/S). Strictly decreasing in t, increasing in S; R(0) = 1."""
    if stability_days <= 0:
        raise ValueError("stability must be positive")
    if elapsed_days < 0:
        raise ValueError("elapsed time cannot be negative")
    return math.exp(-elapsed_days / stability_days)


def emotional_stability(base_days: float, valence: float, cap: float = 3.0) -> float:
    """Linear arousal ramp: 1x at |v| = 0 up to `cap`x at |v| = 1."""
    if base_days <= 0:
        raise ValueError("base stability must be positive")
    if not -1.0 <= valence <= 1.0:
        raise ValueError("valence out of [-1, 1]")
    return base_days * (1.0 + (cap - 1.0) * abs(valence))


def review_boost(stability_days: float, growth: float = 1.3) -> float:
    """Stability growth on a successful review."""
    if stability_days <= 0:
        raise ValueError("stability must be positive")
    return growth * stability_days


@dataclass
class CopySet:
    """The three decay traces of one item.

    `consolidated_days` is the portion of the item's lifetime during which
    sleep consolidation actually ran for it; the deep trace grows along the
    log curve indexed by this quantity, not by raw elapsed time.
    """

    s0: float = 1.0
    created_at_days: float = 0.0
    tau_fast_days: float = 4.0 / HOURS_PER_DAY
    tau_medium_days: float = 14.0
    tau_deep_days: float = 7.0
    medium_scale: float = 0.8
    consolidated_days: float = 0.0
    last_consolidated_days: float = 0.0

    def advance_consolidation(self, nights: float = 1.0) -> None:
        self.consolidated_days += nights

    def deep_level(self) -> float:
        """Deep-trace strength from accumulated consolidation."""
        return min(self.s0 * math.log1p(self.consolidated_days / self.tau_deep_days), self.s0)


def triple_strength(copy_set: CopySet, elapsed_days: float) -> tuple[float, str]:
    """Composite strength under uninterrupted consolidation, and the dominant copy.

    Pure curve: deep is evaluated at `elapsed_days`, matching the behaviour
    of an item consolidated every night since creation.
    """
    if elapsed_days < 0:
        raise ValueError("elapsed time cannot be negative")
    fast = copy_set.s0 * math.exp(-elapsed_days / copy_set.tau_fast_days)
    med = copy_set.medium_scale * copy_set.s0 * math.exp(-elapsed_days / copy_set.tau_medium_days)
    deep = min(copy_set.s0 * math.log1p(elapsed_days / copy_set.tau_deep_days), copy_set.s0)
    best, label = fast, "fast"
    if med > best:
        best, label = med, "medium"
    if deep > best:
        best, label = deep, "deep"
    return best, label


def triple_components(copy_set: CopySet, elapsed_days: float) -> tuple[float, float, float]:
    """(fast, medium, deep) where deep reflects actual consolidation progress."""
    fast = copy_set.s0 * math.exp(-elapsed_days / copy_set.tau_fast_days)
    med = copy_set.medium_scale * copy_set.s0 * math.exp(-elapsed_days / copy_set.tau_medium_days)
    return fast, med, copy_set.deep_level()


def composite_strength(copy_set: CopySet, elapsed_days: float) -> float:
    """max(fast, med, deep) with deep gated on consolidation progress."""
    fast, med, deep = triple_components(copy_set, elapsed_days)
    return max(fast, med, deep)

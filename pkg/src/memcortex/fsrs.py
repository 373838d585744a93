"""Spaced-repetition scheduling coupled to a context prediction-error signal.

The base interval solves the Ebbinghaus curve for a target retrievability:

    R(I) = e^(-I/S) = target  =>  I = -S * ln(target)

At review time a prediction error is computed as the cosine distance between
the context embedding at the previous review and the current one,

    PE = 1 - cos(c_prev, c_now)        in [0, 2]

mapped through a sigmoid re-encoding factor rho = sigmoid((PE - 0.5) * 6),
and the next interval is the base interval scaled by

    1 + alpha_v * (2*rho - 1),   alpha_v = 0.6

clamped to [0.3, 2.0]. The equation as stated lengthens intervals at high PE
(rho > 0.5 gives factor > 1); `prose_sign=True` flips the coupling for the
opposite reading, where context shift shortens the interval instead.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field


@dataclass
class FsrsConfig:
    alpha_v: float = 0.6
    pe_threshold: float = 0.5
    max_extension: float = 2.0
    min_shortening: float = 0.3
    sigmoid_gain: float = 6.0
    target_retention: float = 0.9
    prose_sign: bool = False   # True: high PE shortens instead of extends

    def validate(self) -> None:
        if not 0.0 < self.min_shortening < 1.0 < self.max_extension:
            raise ValueError("need 0 < min_shortening < 1 < max_extension")
        if not 0.0 < self.target_retention < 1.0:
            raise ValueError("target retention must lie in (0, 1)")


@dataclass(order=True)
class ReviewCard:
    next_due: float
    item_id: int
    stability: float = field(compare=False, default=1.0)
    last_context: list[float] = field(compare=False, default_factory=list)
    review_count: int = field(compare=False, default=0)


def prediction_error(c_prev: list[float], c_now: list[float]) -> float:
    """Cosine distance between two context embeddings; 0 identical, 2 opposed."""
    if len(c_prev) != len(c_now):
        raise ValueError("context dimensions differ")
    dot = sum(a * b for a, b in zip(c_prev, c_now))
    norm_prev = math.sqrt(sum(a * a for a in c_prev))
    norm_now = math.sqrt(sum(b * b for b in c_now))
    if norm_prev < 1e-12 or norm_now < 1e-12:
        raise ValueError("cosine undefined for zero vector")
    cos = max(-1.0, min(1.0, dot / (norm_prev * norm_now)))
    return 1.0 - cos


def reencode_factor(pe: float, gain: float = 6.0, threshold: float = 0.5) -> float:
    """Sigmoid re-encoding factor rho(PE) in (0, 1); 0.5 at PE = threshold."""
    if pe < 0:
        raise ValueError("prediction error cannot be negative")
    x = (pe - threshold) * gain
    # Numerically stable logistic.
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def next_interval(base_interval_days: float, pe: float, config: FsrsConfig | None = None) -> float:
    """Base interval scaled by the PE-coupled factor, clamped to [0.3, 2.0]x."""
    cfg = config or FsrsConfig()
    if base_interval_days <= 0:
        raise ValueError("base interval must be positive")
    rho = reencode_factor(pe, cfg.sigmoid_gain, cfg.pe_threshold)
    swing = 2.0 * rho - 1.0
    if cfg.prose_sign:
        swing = -swing
    factor = 1.0 + cfg.alpha_v * swing
    factor = max(cfg.min_shortening, min(cfg.max_extension, factor))
    return base_interval_days * factor


def base_fsrs_interval(stability_days: float, target_r: float = 0.9) -> float:
    """Interval at which retrievability reaches `target_r`: -S * ln(target)."""
    if stability_days <= 0:
        raise ValueError("stability must be positive")
    if not 0.0 < target_r < 1.0:
        raise ValueError("target retention must lie in (0, 1)")
    return -stability_days * math.log(target_r)


class DueQueue:
    """Min-heap of review cards by due time. Pop/reschedule need exclusive access."""

    def __init__(self):
        self._heap: list[ReviewCard] = []
        self._live: dict[int, ReviewCard] = {}

    def __len__(self) -> int:
        return len(self._live)

    def __contains__(self, item_id: int) -> bool:
        return item_id in self._live

    def schedule(self, card: ReviewCard) -> None:
        self._live[card.item_id] = card
        heapq.heappush(self._heap, card)

    def drop(self, item_id: int) -> None:
        self._live.pop(item_id, None)

    def pop_due(self, now: float) -> ReviewCard | None:
        """Earliest card with next_due <= now, skipping dropped/stale entries."""
        while self._heap and self._heap[0].next_due <= now:
            card = heapq.heappop(self._heap)
            if self._live.get(card.item_id) is card:
                del self._live[card.item_id]
                return card
        return None

    def due_items(self, now: float) -> list[ReviewCard]:
        """All live cards due at `now`, in (due, id) order, without popping."""
        due = [c for c in self._live.values() if c.next_due <= now]
        due.sort(key=lambda c: (c.next_due, c.item_id))
        return due

"""Priority scoring, update-resistance gating, and metacognitive monitoring.

Priority is a four-dimensional weighted sum over saliency, emotion, reward
and goal alignment,

    P = w_s*s + w_e*|v| + w_r*r + w_g*g,   (w_s, w_e, w_r, w_g) = (.20, .25, .25, .30)

with neuromodulator rescaling (each weight multiplied by (0.5 + level) of
its driving channel, then renormalized) and an amygdala fast-path: any item
with |v| > 0.6 is floored at P = 0.5, applied after rescaling.

The stability protector computes a lock score and rigidity factor

    L   = 0.3*log2(1+a)/log2(11) + 0.3*c + 0.2*min(d/365, 1) + 0.2*[core]
    rho = 1 + 0.1*log2(1+d)

and admits an update only when PE >= 0.5 + 0.3*L*rho.

The metacognitive monitor keeps 30-day sliding counters for confirmation,
recency, and retrieval-efficiency asymmetries, alerting when a normalized
statistic exceeds 0.15, and opens a 10-minute encoding-boost window after
any event with PE > 0.7.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from memcortex.model import LayerKind
from memcortex.neuro import ModulationOutputs

PRIORITY_WEIGHTS = (0.20, 0.25, 0.25, 0.30)  # saliency, emotion, reward, goal
FAST_PATH_VALENCE = 0.6
FAST_PATH_FLOOR = 0.5
BIAS_THRESHOLD = 0.15
BIAS_WINDOW_DAYS = 30.0
NOVELTY_WINDOW_SECONDS = 600.0
NOVELTY_PE_TRIGGER = 0.7
MIN_EVENTS_FOR_ALERT = 10

URGENCY_KEYWORDS = (
    "urgent",
    "asap",
    "immediately",
    "right away",
    "critical",
    "emergency",
    "deadline",
)


@dataclass
class PriorityInput:
    saliency: float
    valence: float
    reward: float
    goal: float

    def validate(self) -> None:
        for name, value in (("saliency", self.saliency), ("reward", self.reward), ("goal", self.goal)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} out of [0,1]: {value}")
        if not -1.0 <= self.valence <= 1.0:
            raise ValueError(f"valence out of [-1,1]: {self.valence}")


def priority(inp: PriorityInput, neuro: ModulationOutputs | None = None) -> float:
    """Weighted priority in [0, 1] with optional neuromodulator rescaling."""
    inp.validate()
    w_s, w_e, w_r, w_g = PRIORITY_WEIGHTS
    if neuro is not None:
        # DA drives saliency, NE emotion, ACh reward, 5HT goal weighting;
        # (0.5 + level) is neutral at the 0.5 baseline.
        w_s *= 0.5 + neuro.exploration_bias
        w_e *= 0.5 + neuro.learning_rate
        w_r *= 0.5 + neuro.attention_ratio
        w_g *= 0.5 + neuro.consolidation_patience
        total = w_s + w_e + w_r + w_g
        w_s, w_e, w_r, w_g = w_s / total, w_e / total, w_r / total, w_g / total
    score = w_s * inp.saliency + w_e * abs(inp.valence) + w_r * inp.reward + w_g * inp.goal
    if abs(inp.valence) > FAST_PATH_VALENCE:
        score = max(score, FAST_PATH_FLOOR)
    return min(1.0, score)


@dataclass
class LockInput:
    access_count: int
    confidence: float
    age_days: float
    is_core: bool = False

    def validate(self) -> None:
        if self.access_count < 0 or self.age_days < 0:
            raise ValueError("access count and age must be >= 0")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence out of [0,1]")


def lock_score(inp: LockInput) -> tuple[float, float]:
    """(lock L in [0,1], rigidity rho >= 1). Access term saturates at a=10."""
    inp.validate()
    access_term = min(math.log2(1 + inp.access_count) / math.log2(11), 1.0)
    lock = (
        0.3 * access_term
        + 0.3 * inp.confidence
        + 0.2 * min(inp.age_days / 365.0, 1.0)
        + 0.2 * (1.0 if inp.is_core else 0.0)
    )
    rigidity = 1.0 + 0.1 * math.log2(1 + inp.age_days)
    return lock, rigidity


def gate_update(pe: float, lock: float, rigidity: float) -> bool:
    """Allow an update only when surprise clears the protection threshold."""
    return pe >= 0.5 + 0.3 * lock * rigidity


def lock_for_item(item, now_days: float) -> tuple[float, float]:
    """Lock inputs straight off a stored memory item."""
    return lock_score(
        LockInput(
            access_count=item.access_count,
            confidence=item.confidence,
            age_days=max(0.0, now_days - item.created_at / 86400.0),
            is_core=item.is_core or item.layer is LayerKind.CORE,
        )
    )


# -- metacognitive monitor ----------------------------------------------------


@dataclass
class BiasAlert:
    kind: str
    statistic: float
    window_days: float
    at_seconds: float

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "statistic": round(self.statistic, 12),
            "window_days": self.window_days,
            "at_seconds": self.at_seconds,
        }


EVENT_KINDS = ("evidence_accept", "evidence_reject", "retrieval_hit", "retrieval_miss", "recency_pick")


@dataclass
class BiasLedger:
    window_days: float = BIAS_WINDOW_DAYS
    bias_threshold: float = BIAS_THRESHOLD
    events: list[tuple[float, str, int]] = field(default_factory=list)  # (t_seconds, kind, polarity)
    novelty_window_until: float = -1.0
    alerts: list[BiasAlert] = field(default_factory=list)

    def _prune(self, now_seconds: float) -> None:
        horizon = now_seconds - self.window_days * 86400.0
        self.events = [e for e in self.events if e[0] >= horizon]

    def _counts(self) -> dict[tuple[str, int], int]:
        counts: dict[tuple[str, int], int] = {}
        for _, kind, polarity in self.events:
            key = (kind, polarity)
            counts[key] = counts.get(key, 0) + 1
        return counts

    def confirmation_bias(self) -> float:
        """|accepted-positive - accepted-negative| over all evidence events."""
        counts = self._counts()
        accept_pos = counts.get(("evidence_accept", 1), 0)
        accept_neg = counts.get(("evidence_accept", -1), 0)
        total = sum(v for (kind, _), v in counts.items() if kind.startswith("evidence"))
        if total == 0:
            return 0.0
        return abs(accept_pos - accept_neg) / total

    def recency_bias(self) -> float:
        """Asymmetry of recency-driven picks among retrieval picks."""
        counts = self._counts()
        recency = sum(v for (kind, _), v in counts.items() if kind == "recency_pick")
        plain = sum(v for (kind, _), v in counts.items() if kind == "retrieval_hit")
        total = recency + plain
        if total == 0:
            return 0.0
        return abs(recency - plain) / total

    def efficiency_bias(self) -> float:
        """Excess of retrieval misses over hits (0 when hits dominate)."""
        counts = self._counts()
        hits = sum(v for (kind, _), v in counts.items() if kind in ("retrieval_hit", "recency_pick"))
        misses = sum(v for (kind, _), v in counts.items() if kind == "retrieval_miss")
        total = hits + misses
        if total == 0:
            return 0.0
        return max(0.0, (misses - hits) / total)

    def statistics(self) -> dict[str, float]:
        return {
            "confirmation": self.confirmation_bias(),
            "recency": self.recency_bias(),
            "efficiency": self.efficiency_bias(),
        }


def record_outcome(ledger: BiasLedger, kind: str, polarity: int, now_seconds: float) -> BiasLedger:
    """Record one monitored event; prunes the window and fires due alerts."""
    if kind not in EVENT_KINDS:
        raise ValueError(f"unknown outcome kind {kind!r}")
    if polarity not in (-1, 0, 1):
        raise ValueError("polarity must be -1, 0 or +1")
    ledger.events.append((now_seconds, kind, polarity))
    ledger._prune(now_seconds)
    if len(ledger.events) >= MIN_EVENTS_FOR_ALERT:
        for name, stat in ledger.statistics().items():
            if stat > ledger.bias_threshold:
                ledger.alerts.append(BiasAlert(name, stat, ledger.window_days, now_seconds))
    return ledger


def novelty_window(ledger: BiasLedger, pe: float, now_seconds: float) -> BiasLedger:
    """Open the 10-minute encoding boost after a high-PE event (strict > 0.7)."""
    if pe > NOVELTY_PE_TRIGGER:
        ledger.novelty_window_until = now_seconds + NOVELTY_WINDOW_SECONDS
    return ledger


def encoding_boost_active(ledger: BiasLedger, now_seconds: float) -> bool:
    return now_seconds < ledger.novelty_window_until


def detect_urgency(text: str, keywords: tuple[str, ...] = URGENCY_KEYWORDS) -> bool:
    """Keyword-list urgency detector; the list is config so locales can extend it."""
    lowered = text.lower()
    return any(k in lowered for k in keywords)

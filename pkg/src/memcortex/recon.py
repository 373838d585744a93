"""Prediction-error-gated reconsolidation with snapshot rollback.

A retrieved memory is labile for ten minutes. Incoming content is scored by
raw prediction error (token-set Jaccard distance plus a +0.2 contradiction
bonus, clamped to [0, 1.2]) and gated by neuromodulation:

    PE_eff = PE_raw * (1 + 0.3 * NE - 0.2 * 5HT)

The effective PE selects one of four update modes:

    < 0.1        confirmed       (stability review boost only)
    [0.1, 0.3)   selective_edit  (token-level merge, incoming wins conflicts)
    [0.3, 0.7)   integration     (append incoming as linked elaboration)
    >= 0.7       new_episode     (store incoming separately, original intact)

Procedural and core memories carry resistance offsets (+0.1 / +0.2 on every
boundary) so stable skills and identity facts need a larger surprise to
leave `confirmed`. Every applied update logs a full pre-update snapshot;
rollback restores it bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from memcortex.decay import review_boost
from memcortex.model import LayerKind, MemoryItem

LABILITY_WINDOW_SECONDS = 600.0
CONTRADICTION_BONUS = 0.2
MODE_BOUNDS = (0.1, 0.3, 0.7)
RESISTANCE_OFFSET = {LayerKind.PROCEDURAL: 0.1, LayerKind.CORE: 0.2}

MODES = ("confirmed", "selective_edit", "integration", "new_episode")


@dataclass
class ReconEvent:
    memory_id: int
    pe_raw: float
    pe_eff: float
    mode: str
    timestamp: float
    applied: bool = True
    blocked_by_gate: bool = False
    snapshot: MemoryItem | None = None
    new_item_id: int | None = None

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "memory_id": self.memory_id,
                "pe_raw": round(self.pe_raw, 12),
                "pe_eff": round(self.pe_eff, 12),
                "mode": self.mode,
                "timestamp": self.timestamp,
                "applied": self.applied,
                "blocked_by_gate": self.blocked_by_gate,
                "new_item_id": self.new_item_id,
            },
            sort_keys=True,
        )


def raw_pe(existing_content: str, incoming_content: str, contradicts: bool = False) -> float:
    """Jaccard distance over whitespace token sets, plus contradiction bonus."""
    if not existing_content.strip() or not incoming_content.strip():
        raise ValueError("content must be non-empty")
    a = set(existing_content.split())
    b = set(incoming_content.split())
    union = a | b
    jaccard = len(a & b) / len(union)
    pe = 1.0 - jaccard
    if contradicts:
        pe += CONTRADICTION_BONUS
    return min(1.2, max(0.0, pe))


def effective_pe(pe_raw: float, ne_level: float, serotonin_level: float) -> float:
    """Neuromodulation gate: NE amplifies surprise, 5HT damps it."""
    if not 0.0 <= ne_level <= 1.0 or not 0.0 <= serotonin_level <= 1.0:
        raise ValueError("neuromodulator levels must lie in [0, 1]")
    return max(0.0, pe_raw * (1.0 + 0.3 * ne_level - 0.2 * serotonin_level))


def classify_mode(pe_eff: float, layer: LayerKind | None = None) -> str:
    """Threshold partition of [0, inf); resistance offsets shift boundaries."""
    if pe_eff < 0:
        raise ValueError("effective PE cannot be negative")
    offset = RESISTANCE_OFFSET.get(layer, 0.0) if layer is not None else 0.0
    low, mid, high = (b + offset for b in MODE_BOUNDS)
    if pe_eff < low:
        return "confirmed"
    if pe_eff < mid:
        return "selective_edit"
    if pe_eff < high:
        return "integration"
    return "new_episode"


def merge_selective(existing: str, incoming: str) -> str:
    """Position-wise token merge preferring incoming tokens at conflicts."""
    a = existing.split()
    b = incoming.split()
    merged = []
    for i in range(max(len(a), len(b))):
        if i < len(b):
            merged.append(b[i])
        else:
            merged.append(a[i])
    return " ".join(merged)


class ReconciliationLog:
    """Append-only event log; serializes to JSON lines for audit."""

    def __init__(self):
        self.events: list[ReconEvent] = []

    def append(self, event: ReconEvent) -> ReconEvent:
        self.events.append(event)
        return event

    def to_json_lines(self) -> str:
        return "\n".join(e.to_json_line() for e in self.events)


def apply_update(
    memory: MemoryItem,
    incoming_content: str,
    now_seconds: float,
    ne_level: float = 0.0,
    serotonin_level: float = 0.0,
    contradicts: bool = False,
    stability_gate=None,
    log: ReconciliationLog | None = None,
    store_new_episode=None,
    review_growth: float = 1.3,
    stability_cap: float | None = None,
) -> ReconEvent:
    """Run one gated reconsolidation attempt against a retrieved memory.

    `stability_gate(pe_eff, memory) -> bool` may veto the update entirely
    (blocked event, no mutation). `store_new_episode(content) -> item_id`
    is invoked for the new_episode mode. Outside the lability window the
    call is a no-op diagnostic event.
    """
    pe = raw_pe(memory.content, incoming_content, contradicts)
    pe_eff = effective_pe(pe, ne_level, serotonin_level)
    mode = classify_mode(pe_eff, memory.layer)

    if now_seconds - memory.last_accessed > LABILITY_WINDOW_SECONDS:
        event = ReconEvent(memory.id, pe, pe_eff, mode, now_seconds, applied=False)
        return log.append(event) if log else event

    if stability_gate is not None and not stability_gate(pe_eff, memory):
        event = ReconEvent(
            memory.id, pe, pe_eff, mode, now_seconds, applied=False, blocked_by_gate=True
        )
        return log.append(event) if log else event

    snapshot = memory.copy()
    new_item_id = None
    if mode == "confirmed":
        boosted = review_boost(memory.stability, review_growth)
        memory.stability = boosted if stability_cap is None else min(stability_cap, boosted)
    elif mode == "selective_edit":
        memory.content = merge_selective(memory.content, incoming_content)
    elif mode == "integration":
        memory.content = memory.content + " | " + incoming_content
    else:  # new_episode: original untouched, incoming stored separately
        if store_new_episode is not None:
            new_item_id = store_new_episode(incoming_content)
    event = ReconEvent(
        memory.id, pe, pe_eff, mode, now_seconds, snapshot=snapshot, new_item_id=new_item_id
    )
    return log.append(event) if log else event


def rollback(memory: MemoryItem, event: ReconEvent) -> MemoryItem:
    """Restore the pre-update snapshot logged with an applied event."""
    if event.snapshot is None:
        raise ValueError("event carries no snapshot (update was never applied)")
    if event.memory_id != memory.id:
        raise ValueError("event does not belong to this memory")
    snap = event.snapshot
    memory.content = snap.content
    memory.embedding = list(snap.embedding)
    memory.stability = snap.stability
    memory.confidence = snap.confidence
    memory.emotional_valence = snap.emotional_valence
    memory.access_count = snap.access_count
    memory.last_accessed = snap.last_accessed
    memory.related_ids = set(snap.related_ids)
    return memory

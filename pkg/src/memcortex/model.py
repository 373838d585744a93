"""Core domain types: memory items and the seven-layer store.

Layers follow the classic cognitive split: a small working buffer (~7 items,
FIFO eviction into short-term), session-scoped short-term memory, episodic
experiences, semantic knowledge, procedural skills, never-decaying core
identity facts, and a cross-context layer for inter-domain material.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional

WORKING_CAPACITY = 7


class LayerKind(Enum):
    WORKING = "working"
    SHORT_TERM = "short_term"
    EPISODIC = "episodic"
    SEMANTIC = "semantic"
    PROCEDURAL = "procedural"
    CORE = "core"
    CROSS_CONTEXT = "cross_context"


# Canonical ordering used for routing fallbacks and stable iteration.
LAYER_ORDER = (
    LayerKind.WORKING,
    LayerKind.SHORT_TERM,
    LayerKind.EPISODIC,
    LayerKind.SEMANTIC,
    LayerKind.PROCEDURAL,
    LayerKind.CORE,
    LayerKind.CROSS_CONTEXT,
)


@dataclass
class MemoryItem:
    """One stored memory.

    `stability` is the Ebbinghaus time constant S in days (R(t) = e^(-t/S));
    it must stay positive. `emotional_valence` lies in [-1, 1] and
    `confidence` in [0, 1]. `layer` is fixed once stored; consolidation moves
    create a new record carrying a provenance link instead of mutating it.
    """

    id: int
    content: str
    layer: LayerKind
    embedding: list[float]
    created_at: float = 0.0
    last_accessed: float = 0.0
    access_count: int = 0
    stability: float = 1.0
    emotional_valence: float = 0.0
    confidence: float = 0.5
    is_core: bool = False
    related_ids: set[int] = field(default_factory=set)
    provenance_of: Optional[int] = None

    def validate(self) -> None:
        if self.stability <= 0:
            raise ValueError(f"stability must be > 0, got {self.stability}")
        if not -1.0 <= self.emotional_valence <= 1.0:
            raise ValueError(f"valence out of [-1,1]: {self.emotional_valence}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence out of [0,1]: {self.confidence}")

    def copy(self) -> "MemoryItem":
        dup = MemoryItem(
            id=self.id,
            content=self.content,
            layer=self.layer,
            embedding=list(self.embedding),
            created_at=self.created_at,
            last_accessed=self.last_accessed,
            access_count=self.access_count,
            stability=self.stability,
            emotional_valence=self.emotional_valence,
            confidence=self.confidence,
            is_core=self.is_core,
            related_ids=set(self.related_ids),
            provenance_of=self.provenance_of,
        )
        return dup


class DimensionMismatch(ValueError):
    """Raised when an embedding does not match the engine dimension."""


class LayerStore:
    """Seven addressable layers with per-layer semantics.

    Single-writer: mutation requires exclusive access. Items keep dense
    integer ids in insertion order, which makes every downstream tie-break
    and provenance link deterministic.
    """

    def __init__(self, embedding_dim: int, working_capacity: int = WORKING_CAPACITY):
        self.embedding_dim = embedding_dim
        self.working_capacity = working_capacity
        self._items: dict[int, MemoryItem] = {}
        self._layers: dict[LayerKind, list[int]] = {k: [] for k in LAYER_ORDER}
        self._next_id = 0

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, item_id: int) -> bool:
        return item_id in self._items

    def get(self, item_id: int) -> MemoryItem:
        return self._items[item_id]

    def maybe(self, item_id: int) -> Optional[MemoryItem]:
        return self._items.get(item_id)

    def ids(self) -> list[int]:
        return sorted(self._items)

    def items(self) -> Iterable[MemoryItem]:
        for item_id in sorted(self._items):
            yield self._items[item_id]

    def layer_ids(self, layer: LayerKind) -> list[int]:
        return list(self._layers[layer])

    def allocate_id(self) -> int:
        allocated = self._next_id
        self._next_id += 1
        return allocated

    def insert(self, item: MemoryItem) -> int:
        """Insert, applying the working-layer eviction rule.

        An 8th working-memory item evicts the oldest working item into
        short-term (FIFO). Core-layer items are flagged `is_core`.
        """
        if len(item.embedding) != self.embedding_dim:
            raise DimensionMismatch(
                f"embedding dim {len(item.embedding)} != engine dim {self.embedding_dim}"
            )
        item.validate()
        if item.id in self._items:
            raise ValueError(f"duplicate item id {item.id}")
        if item.layer is LayerKind.CORE:
            item.is_core = True
        self._items[item.id] = item
        self._layers[item.layer].append(item.id)
        self._next_id = max(self._next_id, item.id + 1)
        if item.layer is LayerKind.WORKING:
            while len(self._layers[LayerKind.WORKING]) > self.working_capacity:
                oldest = self._layers[LayerKind.WORKING].pop(0)
                self._move(oldest, LayerKind.SHORT_TERM)
        return item.id

    def _move(self, item_id: int, target: LayerKind) -> None:
        # Internal relocation (eviction); consolidation moves go through
        # remove + insert so the provenance chain stays explicit.
        item = self._items[item_id]
        if item_id in self._layers[item.layer]:
            self._layers[item.layer].remove(item_id)
        item.layer = target
        self._layers[target].append(item_id)

    def remove(self, item_id: int) -> MemoryItem:
        item = self._items.pop(item_id)
        self._layers[item.layer].remove(item_id)
        return item

    def scan(
        self,
        layer: LayerKind,
        predicate: Optional[Callable[[MemoryItem], bool]] = None,
    ) -> list[MemoryItem]:
        """All items in `layer` matching `predicate`, in insertion-id order."""
        out = []
        for item_id in sorted(self._layers[layer]):
            item = self._items[item_id]
            if predicate is None or predicate(item):
                out.append(item)
        return out

    def count_by_layer(self) -> dict[LayerKind, int]:
        return {k: len(v) for k, v in self._layers.items()}

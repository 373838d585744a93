"""Memory coordinator: routing, retrieval, consolidation, decay, review.

The engine owns the seven-layer store, the synaptic graph, the BM25 index,
the review queue, the neuromodulator, and the reconsolidation log, and it
exposes the five lifecycle verbs:

    store(...)       classify + route + init (S = 1.0, w = 1.0, sigma2 = 1.0)
    recall(...)      per-layer dense top-K, weighted max-fusion, importance
                     boost, strength rescoring, near-duplicate collapse
    consolidate()    episodic->semantic abstraction + short-term promotion
    decay_pass(...)  forgetting sweep (threshold 0.1) + edge decay
    review_pass(...) budgeted spaced-repetition reviews of due cards
    sleep_pass()     nightly simulation-selection consolidation cycle

An item's survival strength is the max of two tracks. The anchored track is

    E = exp(-rate * (t - anchor) / S_eff),
    S_eff = S_encode * g_review * g_sleep * d_importance

where S_encode carries the emotional-arousal multiplier fixed at encoding,
g_review ratchets up on successful reviews (norepinephrine-scaled, capped),
g_sleep ratchets up on replay selection (serotonin-scaled, capped), and
d_importance divides pressure for items with mature graph edges (capped).
A review only succeeds if the memory is still retrievable above a floor;
a failed review resets g_review (a lapse) and leaves the anchor stale.

The triple-copy track contributes fast and medium traces plus a deep trace
that ratchets along log(1 + nights/tau_d) on consolidated nights and leaks
with an absolute hold time constant once consolidation stops. Replay
candidacy itself requires hippocampal vividness: max(E, fast, med) above a
floor, so traces that fade out of reach stop being consolidated.

Every algorithmic mechanism sits behind an ablation flag; disabling a layer
reroutes its content to the next enabled layer instead of dropping it.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from memcortex import decay, fsrs, neuro, priority, recon, sleep
from memcortex.bm25 import Bm25Index
from memcortex.clock import SECONDS_PER_DAY, SimClock
from memcortex.kg import KgConfig, SynapticGraph
from memcortex.model import (
    LAYER_ORDER,
    DimensionMismatch,
    LayerKind,
    LayerStore,
    MemoryItem,
)

# -- ablation registry --------------------------------------------------------

MODELED_ALGORITHMS = (
    "two_factor",
    "sleep",
    "vmpfc_fsrs",
    "neuromodulator",
    "reconsolidation",
    "triple_copy",
    "priority_map",
    "stability_protector",
    "metacog_monitor",
)

# Registry toggles whose "enabled" behaviour is a documented no-op: these
# mechanisms need machinery (debate, schema extraction, budget policies,
# meta-policies) that this engine does not model. Their ablation rows are
# reported as not modeled.
NOOP_ALGORITHMS = (
    "imad_debate",
    "spectral_kg",
    "compositional_context",
    "ib_budget",
    "dual_process_cot",
    "hyperagent",
)

ALGORITHM_FLAGS = MODELED_ALGORITHMS + NOOP_ALGORITHMS

LAYER_FLAGS = {
    "layer_working": LayerKind.WORKING,
    "layer_short_term": LayerKind.SHORT_TERM,
    "layer_episodic": LayerKind.EPISODIC,
    "layer_semantic": LayerKind.SEMANTIC,
    "layer_procedural": LayerKind.PROCEDURAL,
    "layer_core": LayerKind.CORE,
    "layer_cross_context": LayerKind.CROSS_CONTEXT,
}

ALL_FLAGS = tuple(ALGORITHM_FLAGS) + tuple(LAYER_FLAGS)


class UnknownFlag(ValueError):
    pass


@dataclass(frozen=True)
class AblationFlags:
    disabled: frozenset[str] = frozenset()

    @classmethod
    def disable(cls, *names: str) -> "AblationFlags":
        for name in names:
            if name not in ALL_FLAGS:
                raise UnknownFlag(f"unknown ablation flag {name!r}")
        return cls(frozenset(names))

    @classmethod
    def bare(cls) -> "AblationFlags":
        """All fifteen algorithm flags off; layers stay available."""
        return cls(frozenset(ALGORITHM_FLAGS))

    def on(self, name: str) -> bool:
        if name not in ALL_FLAGS:
            raise UnknownFlag(f"unknown ablation flag {name!r}")
        return name not in self.disabled

    def layer_enabled(self, layer: LayerKind) -> bool:
        for flag, kind in LAYER_FLAGS.items():
            if kind is layer:
                return flag not in self.disabled
        return True


# -- query classification ------------------------------------------------------

QUERY_PATTERNS: dict[str, tuple[str, ...]] = {
    "temporal": (
        r"\bwhen\b",
        r"\byesterday\b",
        r"\blast (week|month|year)\b",
        r"\bdate\b",
        r"\bago\b",
        r"\bbefore\b",
        r"\bafter\b",
    ),
    "procedural": (
        r"\bhow (do|to)\b",
        r"\bsteps\b",
        r"\bconfigure\b",
        r"\binstall\b",
        r"\bworkflow\b",
    ),
    "factual": (
        r"\bwhat is\b",
        r"\bwho is\b",
        r"\bdefine\b",
        r"\bfact\b",
    ),
}

_COMPILED_PATTERNS = {
    qtype: [re.compile(p) for p in pats] for qtype, pats in QUERY_PATTERNS.items()
}

QUERY_TYPES = ("temporal", "procedural", "factual", "general")


def classify_query(text: str) -> str:
    """Regex classification with precedence temporal > procedural > factual."""
    if not text.strip():
        raise ValueError("query text must be non-empty")
    lowered = text.lower()
    for qtype in ("temporal", "procedural", "factual"):
        if any(p.search(lowered) for p in _COMPILED_PATTERNS[qtype]):
            return qtype
    return "general"


@dataclass
class FusionWeights:
    temporal_episodic: float = 2.0
    factual_semantic: float = 1.8
    procedural_procedural: float = 1.8

    def weight(self, qtype: str, layer: LayerKind) -> float:
        if qtype == "temporal" and layer is LayerKind.EPISODIC:
            return self.temporal_episodic
        if qtype == "factual" and layer is LayerKind.SEMANTIC:
            return self.factual_semantic
        if qtype == "procedural" and layer is LayerKind.PROCEDURAL:
            return self.procedural_procedural
        return 1.0


# -- engine configuration -------------------------------------------------------

KIND_TO_LAYER = {
    "fact": LayerKind.SEMANTIC,
    "episode": LayerKind.EPISODIC,
    "skill": LayerKind.PROCEDURAL,
    "identity": LayerKind.CORE,
    "working": LayerKind.WORKING,
}

_ROUTE_ORDER = list(LAYER_ORDER)


@dataclass
class EngineConfig:
    embedding_dim: int = 32
    decay: decay.DecayConfig = field(default_factory=decay.DecayConfig)
    kg: KgConfig = field(default_factory=KgConfig)
    fsrs: fsrs.FsrsConfig = field(default_factory=fsrs.FsrsConfig)
    sleep: sleep.SleepConfig = field(default_factory=sleep.SleepConfig)
    retrieval_top_k: int = 8
    dedup_jaccard: float = 0.9
    consolidation_access_threshold: int = 3
    session_bound_days: float = 1.0
    review_cutoff: float = 0.5
    review_budget_per_day: int = 20
    decay_rate_per_day: float = 1.0        # condition pressure; 1.0 = pure Ebbinghaus
    review_success_floor: float = 0.45     # failed recall below this: lapse
    review_growth_cap: float = 3.0         # ceiling on the review multiplier
    sleep_growth_cap: float = 2.2          # ceiling on the replay multiplier
    sleep_boost: float = 0.5               # preferential consolidation gain
    sleep_ltd_item_frac: float = 0.75      # replay-rejected stability shrink
    sleep_capacity: int = 600
    replay_floor: float = 0.2              # hippocampal vividness needed for replay
    deep_hold_days: float = 7.0            # deep-trace leak once consolidation stops
    edge_decay_scale: float = 0.25
    importance_divisor_cap: float = 2.2
    fusion: FusionWeights = field(default_factory=FusionWeights)


@dataclass
class RecallResult:
    item_id: int
    score: float
    layer: LayerKind


def _embed_from_content(content: str, dim: int) -> list[float]:
    """Deterministic pseudo-embedding: content hash seeds a unit vector."""
    from memcortex.harness.rng import Mulberry32

    digest = hashlib.sha256(content.encode("utf-8")).digest()
    seed = int.from_bytes(digest[:4], "big")
    return Mulberry32(seed).unit_vector(dim)


def _jaccard(a: str, b: str) -> float:
    sa, sb = set(a.lower().split()), set(b.lower().split())
    if not sa and not sb:
        return 1.0
    return len(sa & sb) / len(sa | sb)


@dataclass
class _ItemDynamics:
    """Per-item survival state beyond the MemoryItem record."""

    anchor_seconds: float
    g_review: float = 1.0
    g_sleep: float = 1.0
    last_replayed: float = -math.inf


class MemoryEngine:
    """Single-writer engine instance; experiment workers own one each."""

    def __init__(self, config: EngineConfig | None = None, flags: AblationFlags | None = None):
        self.config = config or EngineConfig()
        self.flags = flags or AblationFlags()
        self.clock = SimClock()
        self.store_layers = LayerStore(self.config.embedding_dim)
        self.kg = SynapticGraph(self.config.kg)
        self.bm25 = Bm25Index()
        self.queue = fsrs.DueQueue()
        self.neuro_state = neuro.NeuroState()
        self.bias_ledger = priority.BiasLedger()
        self.recon_log = recon.ReconciliationLog()
        self.copysets: dict[int, decay.CopySet] = {}
        self.dynamics: dict[int, _ItemDynamics] = {}
        self.priorities: dict[int, float] = {}
        self.rewards: dict[int, float] = {}
        self.initial_ids: list[int] = []
        self.forgotten_ids: list[int] = []
        self.corrupted_ids: set[int] = set()
        self.value_estimate: float | None = None
        self._coactive_window: list[int] = []
        self._emb = np.zeros((0, self.config.embedding_dim), dtype=np.float64)

    # -- modulation ------------------------------------------------------------

    def modulation(self) -> neuro.ModulationOutputs:
        if not self.flags.on("neuromodulator"):
            return neuro.SILENT_OUTPUTS
        return neuro.outputs(self.neuro_state)

    # -- routing & store ---------------------------------------------------------

    def route_layer(self, kind: str) -> LayerKind:
        target = KIND_TO_LAYER.get(kind, LayerKind.SHORT_TERM)
        if self.flags.layer_enabled(target):
            return target
        start = _ROUTE_ORDER.index(target)
        for step in range(1, len(_ROUTE_ORDER)):
            candidate = _ROUTE_ORDER[(start + step) % len(_ROUTE_ORDER)]
            if self.flags.layer_enabled(candidate):
                return candidate
        raise RuntimeError("all layers disabled")

    def _grow_matrix(self, item_id: int) -> None:
        if item_id >= self._emb.shape[0]:
            grown = max(64, item_id + 1, self._emb.shape[0] * 2)
            fresh = np.zeros((grown, self.config.embedding_dim), dtype=np.float64)
            fresh[: self._emb.shape[0]] = self._emb
            self._emb = fresh

    def store(
        self,
        content: str,
        kind: str = "fact",
        valence: float = 0.0,
        embedding: list[float] | None = None,
        attributes: priority.PriorityInput | None = None,
        link_to: list[int] | None = None,
        reward: float = 0.5,
        track_initial: bool = False,
    ) -> int:
        """Route, initialize, index, and wire a new memory; returns its id."""
        if not content.strip():
            raise ValueError("content must be non-empty")
        if embedding is None:
            embedding = _embed_from_content(content, self.config.embedding_dim)
        if len(embedding) != self.config.embedding_dim:
            raise DimensionMismatch(
                f"embedding dim {len(embedding)} != engine dim {self.config.embedding_dim}"
            )
        layer = self.route_layer(kind)
        item_id = self.store_layers.allocate_id()
        stability = decay.emotional_stability(
            self.config.decay.default_stability, valence, self.config.decay.emotional_multiplier_cap
        )
        item = MemoryItem(
            id=item_id,
            content=content,
            layer=layer,
            embedding=list(embedding),
            created_at=self.clock.now,
            last_accessed=self.clock.now,
            stability=stability,
            emotional_valence=valence,
            is_core=(kind == "identity") or layer is LayerKind.CORE,
        )
        self.store_layers.insert(item)
        self._grow_matrix(item_id)
        self._emb[item_id] = np.asarray(embedding, dtype=np.float64)
        self.dynamics[item_id] = _ItemDynamics(anchor_seconds=self.clock.now)
        self.rewards[item_id] = reward
        if track_initial:
            self.initial_ids.append(item_id)

        self.copysets[item_id] = decay.CopySet(
            s0=1.0,
            created_at_days=self.clock.days,
            last_consolidated_days=self.clock.days,
            tau_fast_days=self.config.decay.tau_fast_hours / 24.0,
            tau_medium_days=self.config.decay.tau_medium_days,
            tau_deep_days=self.config.decay.tau_deep_days,
            medium_scale=self.config.decay.medium_scale,
        )

        neighbors = list(link_to or [])
        neighbors.extend(i for i in self._coactive_window if i != item_id)
        for other in neighbors:
            if other in self.store_layers and other != item_id:
                self.kg.ensure_edge(item_id, other, w=self.config.kg.initial_w)
                item.related_ids.add(other)
                self.store_layers.get(other).related_ids.add(item_id)

        self.bm25.add(item_id, content)

        prio = self._priority_for(valence, attributes)
        self.priorities[item_id] = prio
        if (
            self.flags.on("vmpfc_fsrs")
            and not item.is_core
            and prio >= self.config.review_cutoff
        ):
            self._schedule_review(item)
        return item_id

    def _priority_for(self, valence: float, attributes: priority.PriorityInput | None) -> float:
        inp = attributes or priority.PriorityInput(
            saliency=0.5, valence=valence, reward=0.5, goal=0.5
        )
        if self.flags.on("priority_map"):
            return priority.priority(inp, self.modulation() if self.flags.on("neuromodulator") else None)
        # Ablated map: raw weighted sum, no neuro rescale, no fast-path floor.
        w_s, w_e, w_r, w_g = priority.PRIORITY_WEIGHTS
        return w_s * inp.saliency + w_e * abs(inp.valence) + w_r * inp.reward + w_g * inp.goal

    def _schedule_review(self, item: MemoryItem) -> None:
        base = fsrs.base_fsrs_interval(item.stability, self.config.fsrs.target_retention)
        interval = base / max(self.config.decay_rate_per_day, 1e-9)
        self.queue.schedule(
            fsrs.ReviewCard(
                next_due=self.clock.now + interval * SECONDS_PER_DAY,
                item_id=item.id,
                stability=item.stability,
                last_context=list(item.embedding),
                review_count=0,
            )
        )

    # -- retrieval ----------------------------------------------------------------

    def recall(
        self,
        text: str | None = None,
        embedding: list[float] | None = None,
        k: int = 5,
        qtype: str | None = None,
        touch: bool = True,
    ) -> list[RecallResult]:
        if embedding is None:
            if text is None:
                raise ValueError("need query text or embedding")
            embedding = _embed_from_content(text, self.config.embedding_dim)
        if len(embedding) != self.config.embedding_dim:
            raise DimensionMismatch("query dimension mismatch")
        if qtype is None:
            qtype = classify_query(text) if text else "general"
        query = np.asarray(embedding, dtype=np.float64)
        qnorm = np.linalg.norm(query)
        if qnorm > 0:
            query = query / qnorm

        candidates: dict[int, tuple[float, LayerKind]] = {}
        for layer in LAYER_ORDER:
            if not self.flags.layer_enabled(layer):
                continue
            ids = self.store_layers.layer_ids(layer)
            if not ids:
                continue
            rows = self._emb[ids]
            norms = np.linalg.norm(rows, axis=1)
            norms[norms == 0] = 1.0
            sims = rows @ query / norms
            layer_weight = self.config.fusion.weight(qtype, layer)
            order = np.argsort(-sims, kind="stable")[: self.config.retrieval_top_k]
            for idx in order:
                item_id = ids[int(idx)]
                fused = layer_weight * float(sims[int(idx)])
                prev = candidates.get(item_id)
                if prev is None or fused > prev[0]:
                    candidates[item_id] = (fused, layer)

        scored: list[RecallResult] = []
        for item_id in sorted(candidates):
            fused, layer = candidates[item_id]
            if self.flags.on("two_factor"):
                edge = self.kg.strongest_edge(item_id)
                fused = self.kg.importance_boost(fused, edge)
            fused *= self.ranking_retrievability(item_id)
            scored.append(RecallResult(item_id, fused, layer))
        scored.sort(key=lambda r: (-r.score, r.item_id))

        kept: list[RecallResult] = []
        for result in scored:
            content = self.store_layers.get(result.item_id).content
            if any(
                _jaccard(content, self.store_layers.get(r.item_id).content) > self.config.dedup_jaccard
                for r in kept
            ):
                continue
            kept.append(result)
            if len(kept) >= k:
                break

        if touch:
            for result in kept:
                item = self.store_layers.get(result.item_id)
                item.access_count += 1
                item.last_accessed = self.clock.now
            self._coactive_window = [r.item_id for r in kept]
        return kept

    def bm25_search(self, text_query: str, k: int = 5) -> list[tuple[int, float]]:
        return self.bm25.search(text_query, k)

    # -- strength & decay -----------------------------------------------------------

    def _importance_divisor(self, item_id: int) -> float:
        if not self.flags.on("two_factor"):
            return 1.0
        mean_importance = self.kg.mean_incident_importance(item_id)
        divisor = 1.0 + 0.1 * max(0.0, mean_importance - 1.0)
        return min(self.config.importance_divisor_cap, divisor)

    def _track_components(self, item_id: int) -> tuple[float, float, float]:
        """(anchored track, hippocampal copies, deep trace) for one item."""
        item = self.store_layers.get(item_id)
        if item.is_core or item.layer is LayerKind.CORE:
            return 1.0, 1.0, 1.0
        dyn = self.dynamics[item_id]
        cfg = self.config
        s_eff = (
            item.stability
            * min(dyn.g_review, cfg.review_growth_cap)
            * min(dyn.g_sleep, cfg.sleep_growth_cap)
            * self._importance_divisor(item_id)
        )
        elapsed_days = max(0.0, (self.clock.now - dyn.anchor_seconds) / SECONDS_PER_DAY)
        anchored = math.exp(-cfg.decay_rate_per_day * elapsed_days / s_eff)

        copies = 0.0
        deep = 0.0
        if self.flags.on("triple_copy"):
            cs = self.copysets.get(item_id)
            if cs is not None:
                age_days = max(0.0, self.clock.days - cs.created_at_days)
                fast, med, deep_level = decay.triple_components(cs, age_days)
                copies = max(fast, med)
                if self.flags.on("sleep") and deep_level > 0.0:
                    gap = max(0.0, self.clock.days - cs.last_consolidated_days)
                    deep = deep_level * math.exp(-gap / cfg.deep_hold_days)
        return anchored, copies, deep

    def effective_strength(self, item_id: int) -> float:
        anchored, copies, deep = self._track_components(item_id)
        return max(anchored, copies, deep)

    def ranking_retrievability(self, item_id: int) -> float:
        """Anchored Ebbinghaus retrievability used for recall rescoring.

        This is the decay term alone: the triple-copy floors protect
        survival but do not inflate ranking scores.
        """
        return self._track_components(item_id)[0]

    def decay_pass(self, base_rate: float | None = None, dt_days: float = 1.0) -> list[int]:
        """Forget sub-threshold items and decay graph edges; returns forgotten ids."""
        rate = self.config.decay_rate_per_day if base_rate is None else base_rate
        if rate > 0:
            self.kg.decay_edges(
                rate * self.config.edge_decay_scale,
                dt_days,
                gated=self.flags.on("two_factor"),
            )
        forgotten: list[int] = []
        threshold = self.config.decay.forget_threshold
        for item in list(self.store_layers.items()):
            if item.is_core or item.layer is LayerKind.CORE:
                continue
            if self.effective_strength(item.id) < threshold:
                forgotten.append(item.id)
        for item_id in forgotten:
            self.forget(item_id)
        return forgotten

    def forget(self, item_id: int) -> None:
        self.store_layers.remove(item_id)
        self.kg.drop_node(item_id)
        self.bm25.remove(item_id)
        self.queue.drop(item_id)
        self.copysets.pop(item_id, None)
        self.dynamics.pop(item_id, None)
        self.forgotten_ids.append(item_id)

    # -- review -------------------------------------------------------------------

    def review_pass(self, budget: int | None = None) -> dict[str, int]:
        """Review up to `budget` due cards; returns success/lapse counts."""
        outcome = {"reviewed": 0, "lapsed": 0}
        if not self.flags.on("vmpfc_fsrs"):
            return outcome
        limit = self.config.review_budget_per_day if budget is None else budget
        due = self.queue.due_items(self.clock.now)
        if self.flags.on("priority_map"):
            due.sort(key=lambda c: (c.next_due, -self.priorities.get(c.item_id, 0.0), c.item_id))
        else:
            due.sort(key=lambda c: (c.next_due, c.item_id))
        mod = self.modulation()
        growth = 1.0 + (self.config.decay.review_growth - 1.0) * 2.0 * mod.learning_rate
        taken = 0
        for card in due:
            if taken >= limit:
                break
            taken += 1
            self.queue.drop(card.item_id)
            item = self.store_layers.maybe(card.item_id)
            if item is None:
                continue
            dyn = self.dynamics[card.item_id]
            strength = self.effective_strength(card.item_id)
            if strength >= self.config.review_success_floor:
                dyn.anchor_seconds = self.clock.now
                dyn.g_review = min(self.config.review_growth_cap, dyn.g_review * growth)
                item.access_count += 1
                item.last_accessed = self.clock.now
                self._coactivate_item_edges(card.item_id, tag=1.0)
                outcome["reviewed"] += 1
            else:
                # Lapse: the trace was not retrievable, accumulated review
                # growth is lost and the anchor stays stale.
                dyn.g_review = 1.0
                outcome["lapsed"] += 1
            try:
                pe = fsrs.prediction_error(card.last_context, item.embedding)
            except ValueError:
                pe = 0.0
            base = fsrs.base_fsrs_interval(
                item.stability * dyn.g_review, self.config.fsrs.target_retention
            )
            interval = fsrs.next_interval(base, pe, self.config.fsrs)
            interval /= max(self.config.decay_rate_per_day, 1e-9)
            self.queue.schedule(
                fsrs.ReviewCard(
                    next_due=self.clock.now + interval * SECONDS_PER_DAY,
                    item_id=card.item_id,
                    stability=item.stability,
                    last_context=list(item.embedding),
                    review_count=card.review_count + 1,
                )
            )
        return outcome

    def _coactivate_item_edges(self, item_id: int, tag: float, amp_scale: float = 1.0) -> None:
        if amp_scale <= 0.0:
            return
        emb_a = self._emb[item_id]
        norm_a = float(np.linalg.norm(emb_a))
        for other in self.kg.neighbors(item_id):
            edge = self.kg.edge(item_id, other)
            if edge is None:
                continue
            emb_b = self._emb[other]
            denom = norm_a * float(np.linalg.norm(emb_b))
            amp = max(0.0, float(emb_a @ emb_b) / denom) if denom > 0 else 0.0
            amp = min(1.0, amp * amp_scale)
            if self.flags.on("two_factor"):
                self.kg.coactivate(edge, tag, amp)
            else:
                # Plain Hebbian bump: no variance maturation, no importance.
                self.kg.scale_weight(edge, self.kg.config.eta * tag * amp)

    # -- sleep ----------------------------------------------------------------------

    def sleep_pass(self) -> sleep.SleepReport:
        """One nightly simulation-selection cycle over a rotating replay window."""
        if not self.flags.on("sleep"):
            return sleep.SleepReport()
        cfg = self.config
        mod = self.modulation()
        patience = mod.consolidation_patience

        pool: list[int] = []
        for item in self.store_layers.items():
            if item.is_core or item.layer is LayerKind.CORE:
                continue
            anchored, copies, _ = self._track_components(item.id)
            if max(anchored, copies) >= cfg.replay_floor:
                pool.append(item.id)
        pool.sort(key=lambda i: (self.dynamics[i].last_replayed, i))
        window = pool[: cfg.sleep_capacity]

        views = []
        for item_id in window:
            item = self.store_layers.get(item_id)
            views.append(
                sleep.EpisodeView(
                    id=item_id,
                    reward=self.rewards.get(item_id, 0.5),
                    embedding=item.embedding,
                    related_count=self.kg.degree(item_id),
                    td_error=abs(self.rewards.get(item_id, 0.5) - (self.value_estimate or 0.5)),
                )
            )
        if self.value_estimate is None and views:
            self.value_estimate = sum(v.reward for v in views) / len(views)
            for v in views:
                v.td_error = abs(v.reward - self.value_estimate)
        candidates = [
            sleep.ReplayCandidate(
                episode_id=v.id,
                td_error=v.td_error,
                reward=v.reward,
                related_count=v.related_count,
            )
            for v in views
        ]
        existing = {(e.src, e.dst) for e in self.kg.edges()}
        candidates.extend(
            sleep.counterfactual_candidates(views, self._sleep_rng(), cfg.sleep, exclude_links=existing)
        )

        report = sleep.sleep_cycle(
            candidates,
            self.kg,
            cfg.sleep,
            ltp_scale=2.0 * patience,
            ltd_scale=2.0 * patience,
        )

        strengthened = {i for i in report.strengthened_ids if i in self.store_layers}
        weakened = {i for i in report.weakened_ids if i in self.store_layers} - strengthened
        for item_id in window:
            self.dynamics[item_id].last_replayed = self.clock.now
        for item_id in sorted(strengthened):
            item = self.store_layers.get(item_id)
            dyn = self.dynamics[item_id]
            current = self.effective_strength(item_id)
            boost = 1.0 + cfg.sleep_boost * (1.0 - current) * 2.0 * patience
            dyn.g_sleep = min(cfg.sleep_growth_cap, dyn.g_sleep * boost)
            cs = self.copysets.get(item_id)
            if cs is not None:
                cs.advance_consolidation(1.0)
                cs.last_consolidated_days = self.clock.days
            self._coactivate_item_edges(item_id, tag=1.0, amp_scale=2.0 * mod.attention_ratio)
        for item_id in sorted(weakened):
            dyn = self.dynamics[item_id]
            dyn.g_sleep = max(0.02, dyn.g_sleep * (1.0 - cfg.sleep_ltd_item_frac * 2.0 * patience))

        if window:
            mean_reward = sum(self.rewards.get(i, 0.5) for i in window) / len(window)
            base = self.value_estimate if self.value_estimate is not None else mean_reward
            self.value_estimate = base + 0.2 * (mean_reward - base)
        return report

    def _sleep_rng(self):
        from memcortex.harness.rng import Mulberry32

        night = int(self.clock.days * 1000)
        return Mulberry32((0xC0FFEE ^ night) & 0xFFFFFFFF)

    # -- consolidation ----------------------------------------------------------------

    def consolidate(self) -> dict[str, int]:
        """Episodic->semantic abstraction and short-term->episodic promotion."""
        report = {"abstracted": 0, "promoted": 0}
        threshold = self.config.consolidation_access_threshold
        existing_abstractions = {
            i.provenance_of for i in self.store_layers.items() if i.provenance_of is not None
        }
        for item in list(self.store_layers.scan(LayerKind.EPISODIC)):
            if item.access_count >= threshold and item.id not in existing_abstractions:
                twin_id = self._clone_item(item, self.route_layer("fact"), provenance=item.id)
                self.kg.ensure_edge(twin_id, item.id, w=self.config.kg.initial_w)
                report["abstracted"] += 1
        bound = self.config.session_bound_days * SECONDS_PER_DAY
        for item in list(self.store_layers.scan(LayerKind.SHORT_TERM)):
            if self.clock.now - item.created_at >= bound:
                self._move_item(item, self.route_layer("episode"))
                report["promoted"] += 1
        return report

    def _clone_item(self, item: MemoryItem, layer: LayerKind, provenance: int | None) -> int:
        twin_id = self.store_layers.allocate_id()
        twin = MemoryItem(
            id=twin_id,
            content=item.content,
            layer=layer,
            embedding=list(item.embedding),
            created_at=self.clock.now,
            last_accessed=self.clock.now,
            stability=item.stability,
            emotional_valence=item.emotional_valence,
            provenance_of=provenance,
            related_ids={item.id} if provenance is not None else set(),
        )
        self.store_layers.insert(twin)
        self._grow_matrix(twin_id)
        self._emb[twin_id] = self._emb[item.id]
        self.dynamics[twin_id] = _ItemDynamics(anchor_seconds=self.clock.now)
        self.rewards[twin_id] = self.rewards.get(item.id, 0.5)
        self.priorities[twin_id] = self.priorities.get(item.id, 0.5)
        self.copysets[twin_id] = decay.CopySet(
            s0=1.0,
            created_at_days=self.clock.days,
            last_consolidated_days=self.clock.days,
            tau_fast_days=self.config.decay.tau_fast_hours / 24.0,
            tau_medium_days=self.config.decay.tau_medium_days,
            tau_deep_days=self.config.decay.tau_deep_days,
            medium_scale=self.config.decay.medium_scale,
        )
        self.bm25.add(twin_id, twin.content)
        return twin_id

    def _move_item(self, item: MemoryItem, target: LayerKind) -> int:
        """Consolidation move: remove + re-insert as a new provenance-linked record."""
        moved = self.store_layers.remove(item.id)
        twin_id = self.store_layers.allocate_id()
        twin = moved.copy()
        twin.id = twin_id
        twin.layer = target
        twin.provenance_of = item.id
        self.store_layers.insert(twin)
        self._grow_matrix(twin_id)
        self._emb[twin_id] = self._emb[item.id]
        self.dynamics[twin_id] = self.dynamics.pop(item.id, _ItemDynamics(anchor_seconds=self.clock.now))
        self.rewards[twin_id] = self.rewards.pop(item.id, 0.5)
        self.priorities[twin_id] = self.priorities.pop(item.id, 0.5)
        self.copysets[twin_id] = self.copysets.pop(item.id, decay.CopySet())
        self.bm25.remove(item.id)
        self.bm25.add(twin_id, twin.content)
        self.queue.drop(item.id)
        return twin_id

    # -- reconsolidation ---------------------------------------------------------------

    def reconsolidate(self, item_id: int, incoming: str, contradicts: bool = False) -> recon.ReconEvent:
        """Gate and apply one update against a stored memory."""
        item = self.store_layers.get(item_id)
        mod = self.modulation()

        gate = None
        if self.flags.on("stability_protector"):
            def gate(pe_eff: float, memory: MemoryItem) -> bool:
                lock, rigidity = priority.lock_for_item(memory, self.clock.days)
                return priority.gate_update(pe_eff, lock, rigidity)

        def store_new(content: str) -> int:
            return self.store(content, kind="episode")

        if not self.flags.on("reconsolidation"):
            # Without mode logic an admitted update is a blind overwrite.
            pe = recon.raw_pe(item.content, incoming, contradicts)
            pe_eff = recon.effective_pe(pe, mod.learning_rate, mod.consolidation_patience)
            if gate is not None and not gate(pe_eff, item):
                event = recon.ReconEvent(item_id, pe, pe_eff, "blocked", self.clock.now,
                                         applied=False, blocked_by_gate=True)
                return self.recon_log.append(event)
            snapshot = item.copy()
            item.content = incoming
            item.embedding = _embed_from_content(incoming, self.config.embedding_dim)
            self._emb[item_id] = np.asarray(item.embedding)
            item.stability = self.config.decay.default_stability
            dyn = self.dynamics[item_id]
            dyn.g_review = 1.0
            dyn.anchor_seconds = self.clock.now
            self.bm25.add(item_id, incoming)
            self.corrupted_ids.add(item_id)
            event = recon.ReconEvent(item_id, pe, pe_eff, "overwrite", self.clock.now, snapshot=snapshot)
            return self.recon_log.append(event)

        event = recon.apply_update(
            item,
            incoming,
            now_seconds=self.clock.now,
            ne_level=mod.learning_rate,
            serotonin_level=mod.consolidation_patience,
            contradicts=contradicts,
            stability_gate=gate,
            log=self.recon_log,
            store_new_episode=store_new,
            review_growth=self.config.decay.review_growth,
            stability_cap=self.config.decay.emotional_multiplier_cap,
        )
        if event.applied and event.mode == "selective_edit":
            # Content changed in place: the embedding is content-addressed.
            fresh = _embed_from_content(item.content, self.config.embedding_dim)
            self._emb[item_id] = np.asarray(fresh)
            item.embedding = list(fresh)
            self.bm25.add(item_id, item.content)
            self.corrupted_ids.add(item_id)
        elif event.applied and event.mode == "integration":
            incoming_emb = np.asarray(_embed_from_content(incoming, self.config.embedding_dim))
            blended = 0.8 * self._emb[item_id] + 0.2 * incoming_emb
            norm = np.linalg.norm(blended)
            if norm > 0:
                blended /= norm
            self._emb[item_id] = blended
            item.embedding = [float(x) for x in blended]
            self.bm25.add(item_id, item.content)
        if event.applied and event.mode == "confirmed":
            self.dynamics[item_id].anchor_seconds = self.clock.now
        return event

    # -- bookkeeping ---------------------------------------------------------------------

    def alive_count(self) -> int:
        return len(self.store_layers)

    def retention(self) -> float:
        """Fraction of tracked initial facts still stored with intact content.

        A record whose original content was overwritten or merged away no
        longer retains the initial fact, even though the slot survives.
        """
        if not self.initial_ids:
            return 1.0
        alive = sum(
            1
            for i in self.initial_ids
            if i in self.store_layers and i not in self.corrupted_ids
        )
        return alive / len(self.initial_ids)

    def storage_tokens(self) -> int:
        return sum(len(item.content.split()) for item in self.store_layers.items())

    def mean_effective_stability(self) -> float:
        """Mean grown stability over alive non-core items (1.0 = untouched)."""
        values = []
        for item in self.store_layers.items():
            if item.is_core or item.layer is LayerKind.CORE:
                continue
            dyn = self.dynamics[item.id]
            values.append(
                item.stability
                * min(dyn.g_review, self.config.review_growth_cap)
                * min(dyn.g_sleep, self.config.sleep_growth_cap)
            )
        return sum(values) / len(values) if values else 0.0

    # -- state export ----------------------------------------------------------------------

    def export_state(self) -> dict:
        items = []
        for item in self.store_layers.items():
            dyn = self.dynamics.get(item.id)
            items.append(
                {
                    "id": item.id,
                    "content": item.content,
                    "layer": item.layer.value,
                    "embedding": [float(x) for x in item.embedding],
                    "created_at": item.created_at,
                    "last_accessed": item.last_accessed,
                    "access_count": item.access_count,
                    "stability": item.stability,
                    "valence": item.emotional_valence,
                    "confidence": item.confidence,
                    "is_core": item.is_core,
                    "related_ids": sorted(item.related_ids),
                    "provenance_of": item.provenance_of,
                    "anchor_seconds": dyn.anchor_seconds if dyn else None,
                    "g_review": dyn.g_review if dyn else 1.0,
                    "g_sleep": dyn.g_sleep if dyn else 1.0,
                }
            )
        copysets = {
            str(i): {
                "s0": cs.s0,
                "created_at_days": cs.created_at_days,
                "consolidated_days": cs.consolidated_days,
                "last_consolidated_days": cs.last_consolidated_days,
            }
            for i, cs in sorted(self.copysets.items())
        }
        return {
            "version": 1,
            "dim": self.config.embedding_dim,
            "clock_seconds": self.clock.now,
            "disabled_flags": sorted(self.flags.disabled),
            "items": items,
            "edges": self.kg.to_adjacency(),
            "copysets": copysets,
            "priorities": {str(k): v for k, v in sorted(self.priorities.items()) if k in self.store_layers},
            "rewards": {str(k): v for k, v in sorted(self.rewards.items()) if k in self.store_layers},
            "value_estimate": self.value_estimate if self.value_estimate is not None else -1.0,
            "neuro_levels": self.neuro_state.levels(),
        }

    def export_json(self) -> str:
        return json.dumps(self.export_state(), sort_keys=True)

    @classmethod
    def import_state(cls, doc: dict, config: EngineConfig | None = None) -> "MemoryEngine":
        cfg = config or EngineConfig(embedding_dim=doc["dim"])
        engine = cls(cfg, AblationFlags(frozenset(doc.get("disabled_flags", ()))))
        engine.clock = SimClock(doc["clock_seconds"])
        for rec in doc["items"]:
            item = MemoryItem(
                id=rec["id"],
                content=rec["content"],
                layer=LayerKind(rec["layer"]),
                embedding=rec["embedding"],
                created_at=rec["created_at"],
                last_accessed=rec["last_accessed"],
                access_count=rec["access_count"],
                stability=rec["stability"],
                emotional_valence=rec["valence"],
                confidence=rec["confidence"],
                is_core=rec["is_core"],
                related_ids=set(rec["related_ids"]),
                provenance_of=rec["provenance_of"],
            )
            engine.store_layers.insert(item)
            engine._grow_matrix(item.id)
            engine._emb[item.id] = np.asarray(rec["embedding"])
            engine.bm25.add(item.id, rec["content"])
            engine.dynamics[item.id] = _ItemDynamics(
                anchor_seconds=rec["anchor_seconds"] if rec["anchor_seconds"] is not None else rec["created_at"],
                g_review=rec["g_review"],
                g_sleep=rec["g_sleep"],
            )
        engine.kg = SynapticGraph.from_adjacency(doc["edges"], cfg.kg)
        for key, rec in doc["copysets"].items():
            item_id = int(key)
            if item_id in engine.store_layers:
                engine.copysets[item_id] = decay.CopySet(
                    s0=rec["s0"],
                    created_at_days=rec["created_at_days"],
                    consolidated_days=rec["consolidated_days"],
                    last_consolidated_days=rec["last_consolidated_days"],
                    tau_fast_days=cfg.decay.tau_fast_hours / 24.0,
                    tau_medium_days=cfg.decay.tau_medium_days,
                    tau_deep_days=cfg.decay.tau_deep_days,
                    medium_scale=cfg.decay.medium_scale,
                )
        engine.priorities = {int(k): v for k, v in doc["priorities"].items()}
        engine.rewards = {int(k): v for k, v in doc["rewards"].items()}
        engine.value_estimate = doc["value_estimate"] if doc["value_estimate"] >= 0 else None
        return engine

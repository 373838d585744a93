"""Seeded synthetic corpora for the benchmark suite.

All geometry is cluster-structured: unit-sphere cluster centers plus
isotropic noise, deterministic per seed via the Mulberry32 stream. Facts
carry the attributes the lifecycle couplings need (valence, reward,
saliency, goal alignment); queries carry a planted gold set (the source
fact and its nearest same-cluster neighbours).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from memcortex.harness.rng import Mulberry32


@dataclass
class FactSpec:
    index: int
    content: str
    embedding: list[float]
    cluster: int
    valence: float
    reward: float
    saliency: float
    goal: float
    is_core: bool = False


@dataclass
class QuerySpec:
    text: str
    embedding: list[float]
    source: int
    gold: set[int] = field(default_factory=set)


@dataclass
class SynthCorpus:
    facts: list[FactSpec]
    queries: list[QuerySpec]
    n_clusters: int


@dataclass
class CorpusConfig:
    n_facts: int = 300
    n_queries: int = 100
    dim: int = 32
    cluster_size: int = 8
    cluster_noise: float = 0.32
    query_noise: float = 0.18
    core_fraction: float = 0.01
    emotional_fraction: float = 0.2
    emotional_lo: float = 0.7
    emotional_hi: float = 0.95
    neutral_valence: float = 0.3
    reward_lo: float = 0.5
    reward_hi: float = 1.0
    min_tokens: int = 24
    max_tokens: int = 44

    @property
    def n_clusters(self) -> int:
        return max(1, -(-self.n_facts // self.cluster_size))


def _orthonormal_centers(rng: Mulberry32, dim: int, k: int) -> list[list[float]]:
    """k cluster centers from a seeded orthonormal basis (negated past dim).

    Quasi-orthogonal centers keep cross-cluster similarity near zero, so the
    planted clusters stay separable no matter how retrieval rescoring warps
    within-cluster ordering.
    """
    basis: list[list[float]] = []
    while len(basis) < min(k, dim):
        v = [rng.gauss() for _ in range(dim)]
        for b in basis:
            dot = sum(x * y for x, y in zip(v, b))
            v = [x - dot * y for x, y in zip(v, b)]
        norm = math.sqrt(sum(x * x for x in v))
        if norm < 1e-6:
            continue
        basis.append([x / norm for x in v])
    centers = []
    for j in range(k):
        base = basis[j % dim]
        sign = 1.0 if (j // dim) % 2 == 0 else -1.0
        centers.append([sign * x for x in base])
    return centers


def _noisy_point(center: list[float], noise: float, rng: Mulberry32) -> list[float]:
    vec = [c + noise * rng.gauss() / math.sqrt(len(center)) for c in center]
    norm = math.sqrt(sum(x * x for x in vec))
    return [x / norm for x in vec]


def _cosine(a: list[float], b: list[float]) -> float:
    return sum(x * y for x, y in zip(a, b))  # unit vectors throughout


def _fact_content(index: int, cluster: int, rng: Mulberry32, cfg: CorpusConfig) -> str:
    n_tokens = cfg.min_tokens + rng.randint(cfg.max_tokens - cfg.min_tokens + 1)
    tokens = [f"topic{cluster}", f"theme{cluster}_{index % 7}", f"fact{index}"]
    tokens += [f"tok{index}_{j}" for j in range(max(0, n_tokens - len(tokens)))]
    return " ".join(tokens)


def build_corpus(seed: int, cfg: CorpusConfig) -> SynthCorpus:
    rng = Mulberry32(seed)
    centers = _orthonormal_centers(rng, cfg.dim, cfg.n_clusters)

    n_core = round(cfg.core_fraction * cfg.n_facts)
    core_stride = cfg.n_facts // n_core if n_core else 0
    core_ids = {core_stride * k for k in range(n_core)} if n_core else set()

    facts: list[FactSpec] = []
    for i in range(cfg.n_facts):
        cluster = i % cfg.n_clusters
        embedding = _noisy_point(centers[cluster], cfg.cluster_noise, rng)
        if rng.random() < cfg.emotional_fraction:
            valence = rng.uniform(cfg.emotional_lo, cfg.emotional_hi) * (1.0 if rng.random() < 0.5 else -1.0)
        else:
            valence = rng.uniform(-cfg.neutral_valence, cfg.neutral_valence) if cfg.neutral_valence > 0 else 0.0
        facts.append(
            FactSpec(
                index=i,
                content=_fact_content(i, cluster, rng, cfg),
                embedding=embedding,
                cluster=cluster,
                valence=valence,
                reward=rng.uniform(cfg.reward_lo, cfg.reward_hi),
                saliency=rng.random(),
                goal=rng.random(),
                is_core=i in core_ids,
            )
        )

    queries: list[QuerySpec] = []
    for q in range(cfg.n_queries):
        source = rng.randint(cfg.n_facts)
        fact = facts[source]
        q_emb = _noisy_point(fact.embedding, cfg.query_noise, rng)
        gold = {f.index for f in facts if f.cluster == fact.cluster}
        queries.append(QuerySpec(text=f"query {q} topic{fact.cluster}", embedding=q_emb, source=source, gold=gold))

    return SynthCorpus(facts=facts, queries=queries, n_clusters=cfg.n_clusters)


def corpus_links(facts: list[FactSpec], per_cluster_neighbors: int = 4) -> dict[int, list[int]]:
    """Store-time wiring: chain link + previous cluster-mate + nearest mates.

    The chain keeps the co-access graph connected (a path through every
    item); cluster links build the topical structure the novelty score and
    retrieval boosts feed on.
    """
    links: dict[int, list[int]] = {}
    last_in_cluster: dict[int, int] = {}
    prev_non_core: int | None = None
    for fact in facts:
        if fact.is_core:
            # Identity facts stay outside the topical graph entirely.
            links[fact.index] = []
            continue
        out: list[int] = []
        if prev_non_core is not None:
            out.append(prev_non_core)
        prev_mate = last_in_cluster.get(fact.cluster)
        if prev_mate is not None and prev_mate not in out:
            out.append(prev_mate)
        earlier = [
            f for f in facts
            if f.cluster == fact.cluster and not f.is_core
            and f.index < fact.index and f.index not in out
        ]
        earlier.sort(key=lambda f: (-_cosine(fact.embedding, f.embedding), f.index))
        out.extend(f.index for f in earlier[:per_cluster_neighbors])
        links[fact.index] = out
        last_in_cluster[fact.cluster] = fact.index
        prev_non_core = fact.index
    return links


@dataclass
class InterferenceEvent:
    day: int
    target_slot: int          # index into the alive list at event time
    replace_fraction: float
    contradicts: bool
    salt: int


def interference_schedule(
    seed: int, horizon_days: int, events_per_day: float
) -> list[InterferenceEvent]:
    """Deterministic stream of content-update events for the aging runs."""
    from memcortex.harness.rng import derive

    rng = derive(seed, 0x5EED)
    events = []
    acc = 0.0
    minor = False
    for day in range(1, horizon_days + 1):
        acc += events_per_day
        today = int(acc)
        acc -= today
        for _ in range(today):
            minor = not minor
            if minor:
                frac = rng.uniform(0.1, 0.28)
                contradicts = False
            else:
                frac = rng.uniform(0.3, 0.75)
                contradicts = rng.random() < 0.25
            events.append(
                InterferenceEvent(
                    day=day,
                    target_slot=rng.next_uint32(),
                    replace_fraction=frac,
                    contradicts=contradicts,
                    salt=rng.next_uint32(),
                )
            )
    return events


def rewrite_content(content: str, replace_fraction: float, salt: int) -> str:
    """Replace a token suffix so the Jaccard distance lands near the fraction."""
    tokens = content.split()
    keep = max(1, round(len(tokens) * (1.0 - replace_fraction)))
    fresh = [f"alt{salt % 9973}_{j}" for j in range(len(tokens) - keep)]
    return " ".join(tokens[:keep] + fresh)

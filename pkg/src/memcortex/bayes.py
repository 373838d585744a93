"""Per-fact confidence with Bayes-rule updates over typed relations.

A single evidence update is Bayes' rule with the posterior clamped into
(eps, 1 - eps):

    P(f | e) = P(e | f) * P(f) / P(e)

Propagation over the relation graph runs synchronous (Jacobi) sweeps: each
sweep recomputes every fact's confidence from its neighbors' previous-sweep
values, so storage order can never leak into the result. The likelihood a
neighbor contributes is a linear map around the uninformative point 0.5,

    supports:    P(e|f) = 0.5 + 0.4 * strength * neighbor_conf
    contradicts: P(e|f) = 0.5 - 0.4 * strength * neighbor_conf

with P(e) = 0.5, i.e. a supporting neighbor multiplies confidence by up to
1.8x and a contradicting one by down to 0.2x per sweep. The slope 0.4 is
this module's principal free parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

CONF_EPS = 1e-6
LIKELIHOOD_SLOPE = 0.4
EVIDENCE_PROB = 0.5


@dataclass
class FactNode:
    id: int
    confidence: float
    n_obs: int = 0

    def ci95(self) -> tuple[float, float]:
        """Wald interval around the current confidence estimate."""
        if self.n_obs <= 0:
            return (max(CONF_EPS, 0.0), min(1.0 - CONF_EPS, 1.0))
        half = 1.96 * math.sqrt(self.confidence * (1.0 - self.confidence) / self.n_obs)
        return (max(0.0, self.confidence - half), min(1.0, self.confidence + half))


@dataclass
class Relation:
    src: int
    dst: int
    kind: str                  # "supports" | "contradicts"
    strength: float = 1.0

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError("self-relations are not allowed")
        if self.kind not in ("supports", "contradicts"):
            raise ValueError(f"unknown relation kind {self.kind!r}")
        if not 0.0 < self.strength <= 1.0:
            raise ValueError(f"strength out of (0,1]: {self.strength}")


def bayes_update(prior: float, likelihood: float, evidence_prob: float) -> float:
    """One clamped Bayes-rule update."""
    if evidence_prob <= 0:
        raise ValueError("evidence probability must be positive")
    if not 0.0 < prior <= 1.0 or not 0.0 < likelihood <= 1.0:
        raise ValueError("prior and likelihood must lie in (0, 1]")
    posterior = likelihood * prior / evidence_prob
    return min(1.0 - CONF_EPS, max(CONF_EPS, posterior))


@dataclass
class ConfidenceGraph:
    facts: dict[int, FactNode] = field(default_factory=dict)
    relations: list[Relation] = field(default_factory=list)

    def add_fact(self, fact_id: int, confidence: float) -> FactNode:
        node = FactNode(id=fact_id, confidence=min(1 - CONF_EPS, max(CONF_EPS, confidence)))
        self.facts[fact_id] = node
        return node

    def relate(self, src: int, dst: int, kind: str, strength: float = 1.0) -> Relation:
        if src not in self.facts or dst not in self.facts:
            raise KeyError("both endpoints must exist")
        rel = Relation(src, dst, kind, strength)
        self.relations.append(rel)
        return rel

    def neighbors(self, fact_id: int) -> list[tuple[int, str, float]]:
        """Undirected incident relations as (other_id, kind, strength)."""
        out = []
        for rel in self.relations:
            if rel.src == fact_id:
                out.append((rel.dst, rel.kind, rel.strength))
            elif rel.dst == fact_id:
                out.append((rel.src, rel.kind, rel.strength))
        return out


def propagate(graph: ConfidenceGraph, iterations: int = 3) -> dict[int, float]:
    """Synchronous confidence sweeps; returns the updated confidences.

    Each incident relation applies one Bayes update against the neighbor's
    previous-sweep confidence; isolated facts never move.
    """
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    for _ in range(iterations):
        previous = {fid: node.confidence for fid, node in graph.facts.items()}
        for fid in sorted(graph.facts):
            node = graph.facts[fid]
            conf = previous[fid]
            touched = False
            for other, kind, strength in graph.neighbors(fid):
                neighbor_conf = previous[other]
                if kind == "supports":
                    likelihood = 0.5 + LIKELIHOOD_SLOPE * strength * neighbor_conf
                else:
                    likelihood = 0.5 - LIKELIHOOD_SLOPE * strength * neighbor_conf
                likelihood = min(1.0, max(CONF_EPS, likelihood))
                conf = bayes_update(conf, likelihood, EVIDENCE_PROB)
                touched = True
            if touched:
                node.confidence = conf
                node.n_obs += 1
    return {fid: graph.facts[fid].confidence for fid in sorted(graph.facts)}


def pairwise_auc(confidences: list[float], truth_labels: list[bool]) -> float:
    """Probability a true fact outranks a false one by confidence; ties 0.5."""
    if len(confidences) != len(truth_labels):
        raise ValueError("confidences and labels differ in length")
    true_vals = [c for c, t in zip(confidences, truth_labels) if t]
    false_vals = [c for c, t in zip(confidences, truth_labels) if not t]
    if not true_vals or not false_vals:
        raise ValueError("need at least one true and one false label")
    wins = 0.0
    for tv in true_vals:
        for fv in false_vals:
            if tv > fv:
                wins += 1.0
            elif tv == fv:
                wins += 0.5
    return wins / (len(true_vals) * len(false_vals))

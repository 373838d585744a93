"""Synaptic knowledge graph with two-factor edges.

Each edge carries a weight w and a consolidation variance sigma^2. Repeated
co-activation strengthens w and shrinks sigma^2 (synaptic maturation):

    w      <- clip(w + eta * tag * amp)
    sigma2 <- max(sigma2_min, sigma2 * (1 - beta * n(k))),  n(k) = 1/(1 + 0.1k)

Importance I = 1/sigma^2 acts as a Fisher-information proxy: it scales the
quadratic penalty on proposed weight changes,

    penalty = (lambda/2) * sum_ij I_ij * dw_ij^2

and gates temporal decay, with mature edges decaying at r / (1 + 0.1 * I).
Edges whose weight falls below the prune threshold are removed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

SIGMA2_MIN = 0.01
IMPORTANCE_BOOST_ALPHA = 0.2


@dataclass
class KgConfig:
    eta: float = 0.1            # weight learning rate
    beta: float = 0.15          # variance maturation rate
    lambda_ewc: float = 0.5     # quadratic-penalty coefficient
    w_min: float = 0.0
    w_max: float = 5.0
    prune_eps: float = 0.05
    sigma2_min: float = SIGMA2_MIN
    initial_w: float = 1.0      # weight assigned by store-time edge creation
    initial_sigma2: float = 1.0

    def validate(self) -> None:
        if min(self.eta, self.beta, self.lambda_ewc, self.prune_eps) < 0:
            raise ValueError("rates must be non-negative")
        if self.w_min >= self.w_max:
            raise ValueError("w_min must be < w_max")


@dataclass
class SynapticEdge:
    src: int
    dst: int
    w: float
    sigma2: float
    k: int = 0

    @property
    def importance(self) -> float:
        return 1.0 / self.sigma2


def _canon(a: int, b: int) -> tuple[int, int]:
    # Undirected storage: src < dst.
    if a == b:
        raise ValueError("self-loop edges are not allowed")
    return (a, b) if a < b else (b, a)


class SynapticGraph:
    """Undirected weighted graph keyed by canonical (src, dst) pairs."""

    def __init__(self, config: KgConfig | None = None):
        self.config = config or KgConfig()
        self.config.validate()
        self._edges: dict[tuple[int, int], SynapticEdge] = {}
        self._adjacent: dict[int, set[int]] = {}

    def __len__(self) -> int:
        return len(self._edges)

    def edge(self, a: int, b: int) -> SynapticEdge | None:
        return self._edges.get(_canon(a, b))

    def edges(self) -> list[SynapticEdge]:
        return [self._edges[key] for key in sorted(self._edges)]

    def neighbors(self, node: int) -> list[int]:
        return sorted(self._adjacent.get(node, ()))

    def degree(self, node: int) -> int:
        return len(self._adjacent.get(node, ()))

    def nodes(self) -> list[int]:
        return sorted(self._adjacent)

    def ensure_edge(self, a: int, b: int, w: float | None = None) -> SynapticEdge:
        key = _canon(a, b)
        found = self._edges.get(key)
        if found is None:
            cfg = self.config
            found = SynapticEdge(
                src=key[0],
                dst=key[1],
                w=cfg.initial_w if w is None else w,
                sigma2=cfg.initial_sigma2,
            )
            self._edges[key] = found
            self._adjacent.setdefault(key[0], set()).add(key[1])
            self._adjacent.setdefault(key[1], set()).add(key[0])
        return found

    def remove_edge(self, a: int, b: int) -> None:
        key = _canon(a, b)
        if key in self._edges:
            del self._edges[key]
            self._adjacent[key[0]].discard(key[1])
            self._adjacent[key[1]].discard(key[0])

    def drop_node(self, node: int) -> None:
        for other in list(self._adjacent.get(node, ())):
            self.remove_edge(node, other)
        self._adjacent.pop(node, None)

    # -- two-factor dynamics ------------------------------------------------

    def coactivate(self, edge: SynapticEdge, tag_score: float, amplitude: float) -> SynapticEdge:
        """One co-activation event: Hebbian weight bump + variance maturation."""
        if not 0.0 <= tag_score <= 1.0:
            raise ValueError(f"tag_score out of [0,1]: {tag_score}")
        if not 0.0 <= amplitude <= 1.0:
            raise ValueError(f"amplitude out of [0,1]: {amplitude}")
        cfg = self.config
        edge.w = _clip(edge.w + cfg.eta * tag_score * amplitude, cfg.w_min, cfg.w_max)
        n = 1.0 / (1.0 + 0.1 * edge.k)
        edge.sigma2 = max(cfg.sigma2_min, edge.sigma2 * (1.0 - cfg.beta * n))
        edge.k += 1
        return edge

    def scale_weight(self, edge: SynapticEdge, delta: float) -> None:
        """Additive LTP/LTD adjustment, clipped to the weight bounds."""
        cfg = self.config
        edge.w = _clip(edge.w + delta, cfg.w_min, cfg.w_max)

    def ewc_penalty(self, proposed_deltas: dict[tuple[int, int], float]) -> float:
        """Quadratic importance-weighted cost of a batch of weight changes."""
        total = 0.0
        for (a, b), dw in sorted(proposed_deltas.items()):
            edge = self._edges.get(_canon(a, b))
            if edge is None:
                raise KeyError(f"no edge ({a}, {b})")
            total += edge.importance * dw * dw
        return 0.5 * self.config.lambda_ewc * total

    def decay_edges(self, base_rate: float, dt_days: float, gated: bool = True) -> int:
        """Importance-gated exponential decay; prunes sub-threshold edges.

        Effective per-day rate is base_rate / (1 + 0.1 * I), so a fully
        mature edge (sigma2 = 0.01, I = 100) decays ~10x slower than a
        fresh one (I = 1). `gated=False` applies the raw rate to every edge
        (the two-factor mechanism ablated).
        """
        if base_rate < 0:
            raise ValueError("base_rate must be >= 0")
        pruned = 0
        for key in list(sorted(self._edges)):
            edge = self._edges[key]
            r_eff = base_rate / (1.0 + 0.1 * edge.importance) if gated else base_rate
            edge.w *= math.exp(-r_eff * dt_days)
            if edge.w < self.config.prune_eps:
                self.remove_edge(edge.src, edge.dst)
                pruned += 1
        return pruned

    def importance_boost(self, raw_score: float, edge: SynapticEdge | None) -> float:
        """Retrieval-score lift from a mature, heavy edge: x(1 + 0.2*w*I^0.1)."""
        if edge is None:
            return raw_score
        return raw_score * (1.0 + IMPORTANCE_BOOST_ALPHA * edge.w * edge.importance ** 0.1)

    def strongest_edge(self, node: int) -> SynapticEdge | None:
        best: SynapticEdge | None = None
        for other in self.neighbors(node):
            edge = self._edges[_canon(node, other)]
            if best is None or edge.w > best.w:
                best = edge
        return best

    def mean_incident_importance(self, node: int) -> float:
        """Mean importance of incident edges; 1.0 for isolated nodes."""
        neighbors = self._adjacent.get(node)
        if not neighbors:
            return 1.0
        total = 0.0
        for other in neighbors:
            total += self._edges[_canon(node, other)].importance
        return total / len(neighbors)

    # -- export --------------------------------------------------------------

    def to_adjacency(self) -> dict:
        """Adjacency document for spectral analysis and checkpointing."""
        return {
            "nodes": self.nodes(),
            "edges": [
                {"src": e.src, "dst": e.dst, "w": e.w, "sigma2": e.sigma2, "k": e.k}
                for e in self.edges()
            ],
        }

    @classmethod
    def from_adjacency(cls, doc: dict, config: KgConfig | None = None) -> "SynapticGraph":
        graph = cls(config)
        for node in doc.get("nodes", []):
            graph._adjacent.setdefault(node, set())
        for rec in doc.get("edges", []):
            edge = graph.ensure_edge(rec["src"], rec["dst"], w=rec["w"])
            edge.sigma2 = rec["sigma2"]
            edge.k = rec["k"]
        return graph


def _clip(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x

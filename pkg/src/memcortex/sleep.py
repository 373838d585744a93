"""Offline simulation-selection consolidation loop.

Stage 1 (simulation): assemble a replay-candidate pool from real episodes
plus counterfactual variants of failed ones. Stage 2 (selection): score each
candidate

    TAG(e) = alpha * |td_error| + beta * reward + gamma * novelty
    novelty = min(1, 0.2 * related_count)

with alpha, beta, gamma = 0.4, 0.35, 0.25, then strengthen (LTP, +0.10 on
the episode's incident edges) when TAG >= theta_v and weaken (LTD, -0.05)
when TAG < theta_v. The two branches are exhaustive: every candidate lands
in exactly one of them. Edges below the prune threshold are removed at the
end of the cycle, and admitted counterfactuals wire new associative edges
from their failed source episode to the nearest salient episode.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from memcortex.kg import SynapticGraph


@dataclass
class SleepConfig:
    alpha: float = 0.4
    beta: float = 0.35
    gamma: float = 0.25
    theta_v: float = 0.5
    ltp_step: float = 0.10
    ltd_step: float = 0.05
    prune_tau: float = 0.05
    failure_reward: float = 0.5    # episodes below this count as failed
    salient_reward: float = 0.8    # link targets for counterfactuals

    def validate(self) -> None:
        if abs(self.alpha + self.beta + self.gamma - 1.0) > 1e-9:
            raise ValueError("TAG weights must sum to 1")


@dataclass
class ReplayCandidate:
    episode_id: int
    td_error: float
    reward: float
    related_count: int
    is_counterfactual: bool = False
    link_target: int | None = None   # salient episode a counterfactual attaches to

    def __post_init__(self):
        if not 0.0 <= self.reward <= 1.0:
            raise ValueError(f"reward out of [0,1]: {self.reward}")
        self.td_error = abs(self.td_error)
        if self.related_count < 0:
            raise ValueError("related_count must be >= 0")


@dataclass
class EpisodeView:
    """Minimal episode facts the sleep loop needs; adapted from stored items."""

    id: int
    reward: float
    embedding: list[float]
    related_count: int = 0
    td_error: float = 0.0


@dataclass
class SleepReport:
    strengthened: int = 0
    weakened: int = 0
    pruned: int = 0
    new_associations: int = 0
    strengthened_ids: list[int] = field(default_factory=list)
    weakened_ids: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "strengthened": self.strengthened,
            "weakened": self.weakened,
            "pruned": self.pruned,
            "new_associations": self.new_associations,
        }


def novelty(related_count: int) -> float:
    """min(1, 0.2 * related_count); saturates at five relations."""
    if related_count < 0:
        raise ValueError("related_count must be >= 0")
    return min(1.0, 0.2 * related_count)


def tag_score(candidate: ReplayCandidate, config: SleepConfig | None = None) -> float:
    cfg = config or SleepConfig()
    return (
        cfg.alpha * abs(candidate.td_error)
        + cfg.beta * candidate.reward
        + cfg.gamma * novelty(candidate.related_count)
    )


def _cosine(a: list[float], b: list[float]) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    na = sum(x * x for x in a) ** 0.5
    nb = sum(y * y for y in b) ** 0.5
    if na < 1e-12 or nb < 1e-12:
        return 0.0
    return dot / (na * nb)


def counterfactual_candidates(
    episodes: list[EpisodeView],
    rng,
    config: SleepConfig | None = None,
    exclude_links: set[tuple[int, int]] | None = None,
) -> list[ReplayCandidate]:
    """One success-resampled counterfactual per failed episode.

    The clone keeps the failure's identity but draws reward ~ U(0.7, 1.0)
    from the seeded stream, and links to the nearest salient episode
    (reward >= salient threshold) by embedding cosine. `exclude_links`
    skips already-wired pairs so repeated cycles keep finding fresh targets.
    """
    cfg = config or SleepConfig()
    salient = [e for e in episodes if e.reward >= cfg.salient_reward]
    out: list[ReplayCandidate] = []
    for episode in episodes:
        if episode.reward >= cfg.failure_reward:
            continue
        resampled = rng.uniform(0.7, 1.0)
        target: int | None = None
        best = -2.0
        for cand in salient:
            if cand.id == episode.id:
                continue
            if exclude_links and _pair(episode.id, cand.id) in exclude_links:
                continue
            sim = _cosine(episode.embedding, cand.embedding)
            if sim > best:
                best = sim
                target = cand.id
        out.append(
            ReplayCandidate(
                episode_id=episode.id,
                td_error=episode.td_error,
                reward=resampled,
                related_count=episode.related_count,
                is_counterfactual=True,
                link_target=target,
            )
        )
    return out


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def sleep_cycle(
    candidates: list[ReplayCandidate],
    kg: SynapticGraph,
    config: SleepConfig | None = None,
    ltp_scale: float = 1.0,
    ltd_scale: float = 1.0,
) -> SleepReport:
    """Selection stage over an assembled candidate pool.

    LTP/LTD act on the knowledge-graph edges incident to each candidate's
    episode node; counterfactual candidates with a link target create the
    new associative edge when admitted. Scale factors let neuromodulation
    damp or amplify plasticity (0 disables it).
    """
    cfg = config or SleepConfig()
    cfg.validate()
    report = SleepReport()
    ranked = sorted(
        candidates,
        key=lambda c: (-tag_score(c, cfg), c.episode_id, c.is_counterfactual),
    )
    for candidate in ranked:
        score = tag_score(candidate, cfg)
        if candidate.is_counterfactual and candidate.link_target is not None:
            if score >= cfg.theta_v:
                edge = kg.edge(candidate.episode_id, candidate.link_target)
                if edge is None:
                    kg.ensure_edge(candidate.episode_id, candidate.link_target, w=cfg.ltp_step * 2)
                    report.new_associations += 1
        if score >= cfg.theta_v:
            report.strengthened += 1
            report.strengthened_ids.append(candidate.episode_id)
            delta = cfg.ltp_step * ltp_scale
        else:
            report.weakened += 1
            report.weakened_ids.append(candidate.episode_id)
            delta = -cfg.ltd_step * ltd_scale
        if delta:
            for other in kg.neighbors(candidate.episode_id):
                edge = kg.edge(candidate.episode_id, other)
                if edge is not None:
                    kg.scale_weight(edge, delta)
    # Homeostatic cleanup: drop edges that fell below the prune threshold.
    for edge in kg.edges():
        if edge.w < cfg.prune_tau:
            kg.remove_edge(edge.src, edge.dst)
            report.pruned += 1
    return report

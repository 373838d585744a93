"""The seven experiment drivers.

Each driver is a pure function of (seed list, config), running one engine
per seed on generated corpora and aggregating metrics. Experiments:

    retention    mean memory strength over 30 days for four strategies
    sleep        7-day ingestion with/without nightly consolidation
    hebbian_kg   two-factor edge dynamics on a clustered co-activation feed
    bayes        confidence propagation over typed support/contradiction links
    ablation     one-at-a-time algorithm removal under difficulty conditions
    cascade      long-horizon integration: full vs foundational-only vs bare
    long_horizon archetype aging: full engine vs simple decay vs static store

Seeds default to the canonical ten. Everything is deterministic given the
spec; workers may run seeds in parallel (results are collected in seed
order regardless).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from memcortex import bayes as bayes_mod
from memcortex import neuro, priority, recon
from memcortex.coordinator import (
    AblationFlags,
    EngineConfig,
    MemoryEngine,
    MODELED_ALGORITHMS,
    NOOP_ALGORITHMS,
)
from memcortex.harness import metrics as metrics_mod
from memcortex.harness import stats as stats_mod
from memcortex.harness.generators import (
    CorpusConfig,
    SynthCorpus,
    build_corpus,
    corpus_links,
    interference_schedule,
    rewrite_content,
)
from memcortex.harness.results import ExperimentResult, aggregate_metric, paired_stats
from memcortex.harness.rng import DEFAULT_SEEDS, Mulberry32, derive
from memcortex.harness.spectral import fiedler_of_graph
from memcortex.kg import KgConfig, SynapticGraph

# Difficulty conditions: (facts, queries, horizon days, decay rate per day).
CONDITIONS = {
    "moderate": (300, 100, 45, 0.15),
    "challenging": (400, 120, 50, 0.20),
    "stress": (500, 150, 60, 0.25),
}

EXPERIMENT_KINDS = (
    "retention",
    "sleep",
    "hebbian_kg",
    "bayes",
    "ablation",
    "cascade",
    "long_horizon",
    "pma",
)


def _map_seeds(fn, seeds):
    """Run per-seed work, optionally in parallel; results stay in seed order."""
    workers = int(os.environ.get("MEMCORTEX_THREADS", "1") or "1")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, seeds))
    return [fn(seed) for seed in seeds]


# -- aging loop (shared by ablation / cascade / long_horizon) -------------------


@dataclass
class AgingSetup:
    n_facts: int
    n_queries: int
    horizon_days: int
    decay_rate: float
    corpus: CorpusConfig = field(default_factory=CorpusConfig)
    review_budget: int = 20
    sleep_capacity: int = 600
    interference_per_day: float = 1.0
    measure_days: tuple[int, ...] = ()
    strict_p5: bool = False          # count dead gold items as misses

    def engine_config(self) -> EngineConfig:
        cfg = EngineConfig()
        cfg.decay_rate_per_day = self.decay_rate
        cfg.review_budget_per_day = self.review_budget
        cfg.sleep_capacity = self.sleep_capacity
        cfg.review_cutoff = 0.0      # synthetic corpora are all review-worthy
        cfg.embedding_dim = self.corpus.dim
        return cfg


def _ingest(engine: MemoryEngine, corpus: SynthCorpus) -> None:
    links = corpus_links(corpus.facts)
    for fact in corpus.facts:
        engine.store(
            fact.content,
            kind="identity" if fact.is_core else "episode",
            valence=fact.valence,
            embedding=fact.embedding,
            attributes=priority.PriorityInput(
                saliency=fact.saliency,
                valence=fact.valence,
                reward=fact.reward,
                goal=fact.goal,
            ),
            link_to=links[fact.index],
            reward=fact.reward,
            track_initial=True,
        )


def _measure_queries(engine: MemoryEngine, corpus: SynthCorpus, strict: bool) -> dict:
    p5s, ndcgs, mrrs = [], [], []
    for query in corpus.queries:
        gold = set(query.gold)
        if not strict:
            gold = {
                g for g in gold
                if g in engine.store_layers and g not in engine.corrupted_ids
            }
            if not gold:
                continue
        ranked = [
            r.item_id
            for r in engine.recall(embedding=query.embedding, k=5, qtype="general", touch=False)
        ]
        p5s.append(metrics_mod.precision_at_k(ranked, gold, 5))
        ndcgs.append(metrics_mod.ndcg_at_k(ranked, gold, 5))
        mrrs.append(metrics_mod.mrr(ranked, gold))
    if not p5s:
        return {"p5": 0.0, "ndcg5": 0.0, "mrr": 0.0, "queries_scored": 0}
    return {
        "p5": stats_mod.mean(p5s),
        "ndcg5": stats_mod.mean(ndcgs),
        "mrr": stats_mod.mean(mrrs),
        "queries_scored": len(p5s),
    }


def _emotional_split_retention(engine: MemoryEngine, corpus: SynthCorpus) -> tuple[float, float]:
    emo = [f.index for f in corpus.facts if abs(f.valence) > 0.6 and not f.is_core]
    neu = [f.index for f in corpus.facts if abs(f.valence) <= 0.6 and not f.is_core]
    emo_ret = sum(1 for i in emo if i in engine.store_layers) / len(emo) if emo else 0.0
    neu_ret = sum(1 for i in neu if i in engine.store_layers) / len(neu) if neu else 0.0
    return emo_ret, neu_ret


def run_aging(
    seed: int,
    setup: AgingSetup,
    flags: AblationFlags,
    fiedler_day: int | None = None,
) -> dict:
    """One seeded aging run; returns final metrics plus optional timelines."""
    corpus = build_corpus(seed, setup.corpus)
    engine = MemoryEngine(setup.engine_config(), flags)
    _ingest(engine, corpus)
    events = interference_schedule(seed, setup.horizon_days, setup.interference_per_day)
    by_day: dict[int, list] = {}
    for ev in events:
        by_day.setdefault(ev.day, []).append(ev)

    timeline = []
    fiedler_before = fiedler_after = None
    for day in range(1, setup.horizon_days + 1):
        engine.clock.advance_days(1)
        neuro.tick(engine.neuro_state, 86400.0)
        engine.review_pass()
        for ev in by_day.get(day, ()):
            alive = [
                i.id
                for i in engine.store_layers.items()
                if not i.is_core
            ]
            if not alive:
                continue
            target = alive[ev.target_slot % len(alive)]
            item = engine.store_layers.get(target)
            item.last_accessed = engine.clock.now  # retrieval precedes update
            incoming = rewrite_content(item.content, ev.replace_fraction, ev.salt)
            engine.reconsolidate(target, incoming, contradicts=ev.contradicts)
            neuro.fire_event(
                engine.neuro_state, "contradiction" if ev.contradicts else "novelty"
            )
        if fiedler_day is not None and day == fiedler_day and len(engine.kg) > 0:
            fiedler_before = fiedler_of_graph(engine.kg)
        engine.sleep_pass()
        if fiedler_day is not None and day == fiedler_day and fiedler_before is not None:
            fiedler_after = fiedler_of_graph(engine.kg)
        engine.decay_pass()
        if day in setup.measure_days:
            emo_ret, neu_ret = _emotional_split_retention(engine, corpus)
            snap = {"day": day, "retention": engine.retention(),
                    "retention_emotional": emo_ret, "retention_neutral": neu_ret}
            snap.update(_measure_queries(engine, corpus, setup.strict_p5))
            timeline.append(snap)

    final = {"retention": engine.retention()}
    final.update(_measure_queries(engine, corpus, setup.strict_p5))
    final["q"] = final["retention"] * final["p5"]
    if timeline:
        final["timeline"] = timeline
    if fiedler_before is not None:
        final["fiedler_before"] = fiedler_before
        final["fiedler_after"] = fiedler_after
    return final


# -- ablation --------------------------------------------------------------------


def ablation_setup(condition: str) -> AgingSetup:
    n_facts, n_queries, horizon, rate = CONDITIONS[condition]
    return AgingSetup(
        n_facts=n_facts,
        n_queries=n_queries,
        horizon_days=horizon,
        decay_rate=rate,
        corpus=CorpusConfig(n_facts=n_facts, n_queries=n_queries, emotional_fraction=0.0),
        interference_per_day=n_facts / 600.0,
    )


def run_ablation(
    seeds=DEFAULT_SEEDS,
    condition: str = "moderate",
    algorithms: tuple[str, ...] | None = None,
) -> ExperimentResult:
    """Quality drop from removing each algorithm one at a time."""
    setup = ablation_setup(condition)
    targets = tuple(algorithms) if algorithms else MODELED_ALGORITHMS

    def one_seed(seed: int) -> dict:
        row: dict = {"seed": seed}
        full = run_aging(seed, setup, AblationFlags())
        row["full"] = full
        for name in targets:
            row[name] = run_aging(seed, setup, AblationFlags.disable(name))
        row["bare"] = run_aging(seed, setup, AblationFlags.bare())
        return row

    per_seed = _map_seeds(one_seed, seeds)

    full_q = [r["full"]["q"] for r in per_seed]
    rows: dict[str, dict] = {"full": {"q": aggregate_metric(full_q)}}
    for name in targets:
        qs = [r[name]["q"] for r in per_seed]
        deltas = [
            100.0 * (q - fq) / fq if fq > 0 else 0.0 for q, fq in zip(qs, full_q)
        ]
        rows[name] = {
            "q": aggregate_metric(qs),
            "retention": aggregate_metric([r[name]["retention"] for r in per_seed]),
            "p5": aggregate_metric([r[name]["p5"] for r in per_seed]),
            "delta_q_pct": aggregate_metric(deltas),
            "stats": paired_stats(qs, full_q),
        }
    bare_q = [r["bare"]["q"] for r in per_seed]
    rows["bare"] = {
        "q": aggregate_metric(bare_q),
        "retention": aggregate_metric([r["bare"]["retention"] for r in per_seed]),
        "delta_q_pct": aggregate_metric(
            [100.0 * (q - fq) / fq if fq > 0 else 0.0 for q, fq in zip(bare_q, full_q)]
        ),
        "stats": paired_stats(bare_q, full_q),
    }
    for name in NOOP_ALGORITHMS:
        rows[name] = {"status": "not modeled"}
    rows["full"]["retention"] = aggregate_metric([r["full"]["retention"] for r in per_seed])
    rows["full"]["p5"] = aggregate_metric([r["full"]["p5"] for r in per_seed])
    return ExperimentResult(
        experiment="ablation",
        config={"condition": condition, "seeds": list(seeds)},
        per_seed=per_seed,
        aggregate=rows,
    )


# -- cascade ----------------------------------------------------------------------

PMA_ALGORITHMS = (
    "neuromodulator",
    "reconsolidation",
    "triple_copy",
    "priority_map",
    "stability_protector",
    "metacog_monitor",
)

CASCADE_MEASURE_DAYS = (1, 7, 14, 30, 45, 60)


def cascade_setup() -> AgingSetup:
    # Leaner review budget: the cascade isolates the offline consolidation
    # path, so the online rehearsal channel runs at half capacity.
    return AgingSetup(
        n_facts=300,
        n_queries=100,
        horizon_days=60,
        decay_rate=0.30,
        corpus=CorpusConfig(n_facts=300, n_queries=100, emotional_lo=0.62, emotional_hi=0.72),
        review_budget=12,
        interference_per_day=0.5,
        measure_days=CASCADE_MEASURE_DAYS,
    )


def run_cascade(seeds=DEFAULT_SEEDS) -> ExperimentResult:
    setup = cascade_setup()

    def one_seed(seed: int) -> dict:
        full = run_aging(seed, setup, AblationFlags(), fiedler_day=7)
        foundational = run_aging(seed, setup, AblationFlags.disable(*PMA_ALGORITHMS))
        bare = run_aging(seed, setup, AblationFlags.bare())
        no_sleep = run_aging(seed, setup, AblationFlags.disable("sleep"))
        gap = [
            snap["retention_emotional"] - snap["retention_neutral"]
            for snap in full["timeline"]
        ]
        foundational_day30 = next(
            (s["retention"] for s in foundational["timeline"] if s["day"] == 30), None
        )
        return {
            "seed": seed,
            "full": full,
            "foundational": foundational,
            "bare": bare,
            "no_sleep": no_sleep,
            "emotional_gap_timeline": gap,
            "foundational_retention_day30": foundational_day30,
        }

    per_seed = _map_seeds(one_seed, seeds)
    full_ret = [r["full"]["retention"] for r in per_seed]
    bare_ret = [r["bare"]["retention"] for r in per_seed]
    nosleep_ret = [r["no_sleep"]["retention"] for r in per_seed]
    ratio = [f / b if b > 0 else math.inf for f, b in zip(full_ret, bare_ret)]
    sleep_multiplier = [
        f / n if n > 0 else math.inf for f, n in zip(full_ret, nosleep_ret)
    ]
    fiedler_delta = [
        r["full"]["fiedler_after"] - r["full"]["fiedler_before"] for r in per_seed
    ]
    return ExperimentResult(
        experiment="cascade",
        config={"seeds": list(seeds), "decay_rate": setup.decay_rate, "horizon_days": 60},
        per_seed=per_seed,
        aggregate={
            "full_retention": aggregate_metric(full_ret),
            "bare_retention": aggregate_metric(bare_ret),
            "full_bare_ratio": aggregate_metric(
                [r for r in ratio if math.isfinite(r)] or [0.0]
            ),
            "foundational_retention_day30": aggregate_metric(
                [r["foundational_retention_day30"] for r in per_seed]
            ),
            "foundational_retention_day60": aggregate_metric(
                [r["foundational"]["retention"] for r in per_seed]
            ),
            "sleep_multiplier": aggregate_metric(
                [s for s in sleep_multiplier if math.isfinite(s)] or [0.0]
            ),
            "fiedler_delta": aggregate_metric(fiedler_delta),
        },
        stats=paired_stats(full_ret, bare_ret),
    )


# -- long horizon -------------------------------------------------------------------

LONG_HORIZON_DAYS = (1, 7, 14, 30, 45, 60)


def long_horizon_setup(decay_rate: float = 0.15) -> AgingSetup:
    return AgingSetup(
        n_facts=100,
        n_queries=50,
        horizon_days=60,
        decay_rate=decay_rate,
        corpus=CorpusConfig(
            n_facts=100,
            n_queries=50,
            core_fraction=0.0,
            emotional_fraction=0.0,
        ),
        interference_per_day=0.0,
        measure_days=LONG_HORIZON_DAYS,
        strict_p5=True,
    )


def run_long_horizon(seeds=DEFAULT_SEEDS) -> ExperimentResult:
    setup = long_horizon_setup()
    static_setup = replace(setup, decay_rate=0.0)

    def one_seed(seed: int) -> dict:
        full = run_aging(seed, setup, AblationFlags())
        simple = run_aging(seed, setup, AblationFlags.bare())
        static = run_aging(seed, static_setup, AblationFlags.bare())
        return {"seed": seed, "full": full, "simple": simple, "static": static}

    per_seed = _map_seeds(one_seed, seeds)

    def series(arm: str) -> dict[int, list[float]]:
        out: dict[int, list[float]] = {}
        for row in per_seed:
            for snap in row[arm]["timeline"]:
                out.setdefault(snap["day"], []).append(snap["p5"])
        return out

    agg = {}
    for arm in ("full", "simple", "static"):
        agg[arm] = {
            str(day): aggregate_metric(vals) for day, vals in sorted(series(arm).items())
        }
    full_day1 = [r["full"]["timeline"][0]["p5"] for r in per_seed]
    full_day60 = [r["full"]["timeline"][-1]["p5"] for r in per_seed]
    agg["full_day60_over_day1"] = aggregate_metric(
        [d60 / d1 if d1 > 0 else 0.0 for d1, d60 in zip(full_day1, full_day60)]
    )
    return ExperimentResult(
        experiment="long_horizon",
        config={"seeds": list(seeds), "decay_rate": setup.decay_rate},
        per_seed=per_seed,
        aggregate=agg,
    )


# -- retention ------------------------------------------------------------------------

RETENTION_CHECKPOINT_HOURS = (1, 6, 24, 72, 168, 336, 720)

RETENTION_STRATEGIES = {
    "no_decay": {"flags": AblationFlags.bare(), "rate": 0.0},
    "ebbinghaus": {"flags": AblationFlags.bare(), "rate": 1.0},
    "fsrs_only": {
        "flags": AblationFlags(
            frozenset(a for a in MODELED_ALGORITHMS + NOOP_ALGORITHMS
                      if a not in ("vmpfc_fsrs", "neuromodulator"))
        ),
        "rate": 1.0,
    },
    "full": {"flags": AblationFlags(), "rate": 1.0},
}


def run_retention(seeds=DEFAULT_SEEDS, n_facts: int = 1000) -> ExperimentResult:
    """Mean strength at checkpoints for the four decay strategies.

    Items are never removed here: the strategies are compared on raw
    strength curves, reviews run hourly on whatever is due, sleep nightly.
    """
    corpus_cfg = CorpusConfig(
        n_facts=n_facts, n_queries=0, core_fraction=0.0, emotional_fraction=0.0
    )

    def one_seed(seed: int) -> dict:
        corpus = build_corpus(seed, corpus_cfg)
        out: dict = {"seed": seed}
        for name, strat in RETENTION_STRATEGIES.items():
            cfg = EngineConfig()
            cfg.decay_rate_per_day = strat["rate"]
            cfg.review_cutoff = 0.0
            cfg.review_budget_per_day = n_facts  # uncapped
            cfg.sleep_capacity = n_facts + 10
            engine = MemoryEngine(cfg, strat["flags"])
            _ingest(engine, corpus)
            curve = []
            checkpoints = [h / 24.0 for h in RETENTION_CHECKPOINT_HOURS]
            next_night = 1.0
            now = 0.0
            for target in checkpoints:
                while now < target:
                    step = min(1.0 / 24.0, target - now)
                    engine.clock.advance_days(step)
                    now += step
                    engine.review_pass(budget=n_facts)
                    if now >= next_night:
                        engine.sleep_pass()
                        next_night += 1.0
                strength = [
                    engine.effective_strength(i)
                    for i in engine.initial_ids
                    if i in engine.store_layers
                ]
                curve.append(stats_mod.mean(strength) if strength else 0.0)
            out[name] = curve
        return out

    per_seed = _map_seeds(one_seed, seeds)
    agg = {}
    for name in RETENTION_STRATEGIES:
        agg[name] = {
            str(h): aggregate_metric([r[name][i] for r in per_seed])
            for i, h in enumerate(RETENTION_CHECKPOINT_HOURS)
        }
    return ExperimentResult(
        experiment="retention",
        config={"seeds": list(seeds), "n_facts": n_facts,
                "checkpoints_hours": list(RETENTION_CHECKPOINT_HOURS)},
        per_seed=per_seed,
        aggregate=agg,
    )


# -- sleep ------------------------------------------------------------------------------


def run_sleep(seeds=DEFAULT_SEEDS, days: int = 7, facts_per_day: int = 50) -> ExperimentResult:
    """Nightly consolidation impact on a rolling 7-day ingestion."""
    # Neutral-valence corpus with full reward spread so failures exist for
    # counterfactual generation; triple-copy and reviews are off in both
    # arms so the contrast isolates the sleep loop.
    base_flags = ("triple_copy", "vmpfc_fsrs")

    def one_seed(seed: int) -> dict:
        cfg = CorpusConfig(
            n_facts=days * facts_per_day,
            n_queries=0,
            core_fraction=0.0,
            emotional_fraction=0.0,
            neutral_valence=0.0,
            reward_lo=0.0,
            reward_hi=1.0,
        )
        corpus = build_corpus(seed, cfg)
        links = corpus_links(corpus.facts, per_cluster_neighbors=0)
        arms: dict = {}
        for arm, disabled in (
            ("with_sleep", base_flags),
            ("without_sleep", base_flags + ("sleep",)),
        ):
            engine_cfg = EngineConfig()
            engine_cfg.decay_rate_per_day = 0.15
            engine_cfg.sleep_capacity = len(corpus.facts) + 10
            engine = MemoryEngine(engine_cfg, AblationFlags.disable(*disabled))
            ltp_total = ltd_total = assoc_total = pruned_total = 0
            cycles = 0
            preferential: list[tuple[float, float]] = []
            cursor = 0
            for day in range(1, days + 1):
                for fact in corpus.facts[cursor : cursor + facts_per_day]:
                    engine.store(
                        fact.content,
                        kind="episode",
                        valence=fact.valence,
                        embedding=fact.embedding,
                        link_to=[l for l in links[fact.index] if l in engine.store_layers],
                        reward=fact.reward,
                        track_initial=True,
                    )
                cursor += facts_per_day
                engine.clock.advance_days(1)
                pre = {
                    i.id: engine.effective_strength(i.id)
                    for i in engine.store_layers.items()
                }
                pre_stab = {
                    i.id: engine.dynamics[i.id].g_sleep for i in engine.store_layers.items()
                }
                report = engine.sleep_pass()
                if engine.flags.on("sleep"):
                    cycles += 1
                    ltp_total += report.strengthened
                    ltd_total += report.weakened
                    assoc_total += report.new_associations
                    pruned_total += report.pruned
                    for item_id in report.strengthened_ids:
                        if item_id in engine.store_layers and item_id in pre:
                            rel = engine.dynamics[item_id].g_sleep / pre_stab[item_id]
                            preferential.append((pre[item_id], rel))
                engine.decay_pass()
            arms[arm] = {
                "mean_stability": engine.mean_effective_stability(),
                "storage_tokens": engine.storage_tokens(),
                "alive": engine.alive_count(),
                "ltp": ltp_total,
                "ltd": ltd_total,
                "new_associations": assoc_total,
                "pruned_edges": pruned_total,
                "cycles": cycles,
                "assoc_per_cycle": assoc_total / cycles if cycles else 0.0,
            }
            if arm == "with_sleep" and len(preferential) >= 2:
                arms[arm]["preferential_rank_corr"] = stats_mod.spearman(
                    [p[0] for p in preferential], [p[1] for p in preferential]
                )
        arms["seed"] = seed
        arms["storage_reduction"] = 1.0 - (
            arms["with_sleep"]["storage_tokens"] / arms["without_sleep"]["storage_tokens"]
        )
        return arms

    per_seed = _map_seeds(one_seed, seeds)
    with_stab = [r["with_sleep"]["mean_stability"] for r in per_seed]
    without_stab = [r["without_sleep"]["mean_stability"] for r in per_seed]
    return ExperimentResult(
        experiment="sleep",
        config={"seeds": list(seeds), "days": days, "facts_per_day": facts_per_day},
        per_seed=per_seed,
        aggregate={
            "stability_with": aggregate_metric(with_stab),
            "stability_without": aggregate_metric(without_stab),
            "storage_reduction": aggregate_metric(
                [r["storage_reduction"] for r in per_seed]
            ),
            "ltp": aggregate_metric([float(r["with_sleep"]["ltp"]) for r in per_seed]),
            "ltd": aggregate_metric([float(r["with_sleep"]["ltd"]) for r in per_seed]),
            "assoc_per_cycle": aggregate_metric(
                [r["with_sleep"]["assoc_per_cycle"] for r in per_seed]
            ),
            "preferential_rank_corr": aggregate_metric(
                [r["with_sleep"].get("preferential_rank_corr", 0.0) for r in per_seed]
            ),
        },
        stats=paired_stats(with_stab, without_stab),
    )


# -- hebbian KG --------------------------------------------------------------------------


@dataclass
class HebbianConfig:
    n_entities: int = 50
    n_clusters: int = 5
    n_events: int = 200
    intra_fraction: float = 0.8
    cluster_noise: float = 0.45
    decay_rate: float = 0.1
    decay_days: float = 1.0
    dim: int = 32


def _entity_embeddings(seed: int, cfg: HebbianConfig) -> list[list[float]]:
    rng = Mulberry32(seed)
    centers = [rng.unit_vector(cfg.dim) for _ in range(cfg.n_clusters)]
    out = []
    for i in range(cfg.n_entities):
        center = centers[i % cfg.n_clusters]
        vec = [c + cfg.cluster_noise * rng.gauss() / math.sqrt(cfg.dim) for c in center]
        norm = math.sqrt(sum(x * x for x in vec))
        out.append([x / norm for x in vec])
    return out


def _kg_rank(graph: SynapticGraph, query: int, n: int, weighted: bool) -> list[int]:
    """Entities ranked by edge evidence from `query`.

    Weighted mode scores direct edges by their importance-boosted weight and
    falls back to the best two-hop bottleneck (0.5 * min of the two legs).
    Uniform mode treats every pair as equally connected, so the ranking
    degenerates to id order — the no-edge-information baseline.
    """
    if not weighted:
        return [(query + 1 + j) % n for j in range(n - 1)]
    direct: dict[int, float] = {}
    for other in graph.neighbors(query):
        edge = graph.edge(query, other)
        direct[other] = graph.importance_boost(edge.w, edge)
    scores: dict[int, float] = dict(direct)
    for mid, w_mid in direct.items():
        for far in graph.neighbors(mid):
            if far == query or far in direct:
                continue
            edge = graph.edge(mid, far)
            via = 0.5 * min(w_mid, graph.importance_boost(edge.w, edge))
            if via > scores.get(far, 0.0):
                scores[far] = via
    ranked = [e for e in range(n) if e != query]
    ranked.sort(key=lambda e: (-scores.get(e, 0.0), e))
    return ranked


def run_hebbian(seeds=DEFAULT_SEEDS, cfg: HebbianConfig | None = None) -> ExperimentResult:
    cfg = cfg or HebbianConfig()

    def one_seed(seed: int) -> dict:
        rng = derive(seed, 0x2F2F)
        embeddings = _entity_embeddings(seed, cfg)
        graph = SynapticGraph(KgConfig(initial_w=0.0, prune_eps=0.005))
        members = {
            c: [i for i in range(cfg.n_entities) if i % cfg.n_clusters == c]
            for c in range(cfg.n_clusters)
        }
        touched: set[tuple[int, int]] = set()
        for _ in range(cfg.n_events):
            if rng.random() < cfg.intra_fraction:
                cluster = rng.randint(cfg.n_clusters)
                group = members[cluster]
                ia, ib = rng.sample_pair(len(group))
                a, b = group[ia], group[ib]
            else:
                a, b = rng.sample_pair(cfg.n_entities)
            amp = max(0.0, sum(x * y for x, y in zip(embeddings[a], embeddings[b])))
            edge = graph.ensure_edge(a, b)
            graph.coactivate(edge, 1.0, min(1.0, amp))
            touched.add((min(a, b), max(a, b)))
        graph.decay_edges(cfg.decay_rate, cfg.decay_days)

        intra_w, inter_w = [], []
        for a, b in sorted(touched):
            edge = graph.edge(a, b)
            w = edge.w if edge is not None else 0.0
            if a % cfg.n_clusters == b % cfg.n_clusters:
                intra_w.append(w)
            else:
                inter_w.append(w)
        ratio = (
            stats_mod.mean(intra_w) / stats_mod.mean(inter_w)
            if inter_w and stats_mod.mean(inter_w) > 0
            else math.inf
        )

        uni_p5, wei_p5 = [], []
        for q in range(cfg.n_entities):
            gold = {m for m in members[q % cfg.n_clusters] if m != q}
            uni_p5.append(
                metrics_mod.precision_at_k(_kg_rank(graph, q, cfg.n_entities, False), gold, 5)
            )
            wei_p5.append(
                metrics_mod.precision_at_k(_kg_rank(graph, q, cfg.n_entities, True), gold, 5)
            )
        return {
            "seed": seed,
            "uniform_p5": stats_mod.mean(uni_p5),
            "weighted_p5": stats_mod.mean(wei_p5),
            "intra_inter_ratio": ratio if math.isfinite(ratio) else 1e9,
            "edges": len(graph),
        }

    per_seed = _map_seeds(one_seed, seeds)
    weighted = [r["weighted_p5"] for r in per_seed]
    uniform = [r["uniform_p5"] for r in per_seed]
    return ExperimentResult(
        experiment="hebbian_kg",
        config={"seeds": list(seeds), "n_entities": cfg.n_entities, "n_events": cfg.n_events},
        per_seed=per_seed,
        aggregate={
            "weighted_p5": aggregate_metric(weighted),
            "uniform_p5": aggregate_metric(uniform),
            "intra_inter_ratio": aggregate_metric(
                [r["intra_inter_ratio"] for r in per_seed]
            ),
        },
        stats=paired_stats(weighted, uniform),
    )


# -- bayes ------------------------------------------------------------------------------


@dataclass
class BayesConfig:
    n_facts: int = 30
    n_true: int = 18
    n_relations: int = 40
    n_supports: int = 24
    sweeps: int = 3
    conf_lo: float = 0.35
    conf_hi: float = 0.65
    support_strength: tuple[float, float] = (0.25, 0.55)
    contradict_strength: tuple[float, float] = (0.6, 1.0)


def run_bayes(seeds=DEFAULT_SEEDS, cfg: BayesConfig | None = None) -> ExperimentResult:
    cfg = cfg or BayesConfig()

    def one_seed(seed: int) -> dict:
        rng = derive(seed, 0xBA7E5)
        graph = bayes_mod.ConfidenceGraph()
        labels = [i < cfg.n_true for i in range(cfg.n_facts)]
        for i in range(cfg.n_facts):
            graph.add_fact(i, rng.uniform(cfg.conf_lo, cfg.conf_hi))
        true_ids = list(range(cfg.n_true))
        false_ids = list(range(cfg.n_true, cfg.n_facts))
        seen: set[tuple[int, int, str]] = set()
        placed = 0
        while placed < cfg.n_supports:
            ia, ib = rng.sample_pair(len(true_ids))
            key = (min(ia, ib), max(ia, ib), "s")
            if key in seen:
                continue
            seen.add(key)
            graph.relate(true_ids[ia], true_ids[ib], "supports",
                         rng.uniform(*cfg.support_strength))
            placed += 1
        n_contra = cfg.n_relations - cfg.n_supports
        for j in range(n_contra):
            src = false_ids[j % len(false_ids)]
            dst = true_ids[rng.randint(len(true_ids))]
            graph.relate(src, dst, "contradicts", rng.uniform(*cfg.contradict_strength))

        before = [graph.facts[i].confidence for i in range(cfg.n_facts)]
        auc_before = bayes_mod.pairwise_auc(before, labels)
        bayes_mod.propagate(graph, cfg.sweeps)
        after = [graph.facts[i].confidence for i in range(cfg.n_facts)]
        auc_after = bayes_mod.pairwise_auc(after, labels)
        true_delta = stats_mod.mean([after[i] - before[i] for i in true_ids])
        false_delta = stats_mod.mean([after[i] - before[i] for i in false_ids])
        return {
            "seed": seed,
            "auc_before": auc_before,
            "auc_after": auc_after,
            "auc_lift": auc_after - auc_before,
            "true_delta": true_delta,
            "false_delta": false_delta,
        }

    per_seed = _map_seeds(one_seed, seeds)
    after = [r["auc_after"] for r in per_seed]
    before = [r["auc_before"] for r in per_seed]
    return ExperimentResult(
        experiment="bayes",
        config={"seeds": list(seeds), "n_facts": cfg.n_facts, "n_relations": cfg.n_relations},
        per_seed=per_seed,
        aggregate={
            "auc_before": aggregate_metric(before),
            "auc_after": aggregate_metric(after),
            "auc_lift": aggregate_metric([r["auc_lift"] for r in per_seed]),
            "true_delta": aggregate_metric([r["true_delta"] for r in per_seed]),
            "false_delta": aggregate_metric([r["false_delta"] for r in per_seed]),
        },
        stats=paired_stats(after, before),
    )


# -- PMA micro-benchmarks -------------------------------------------------------------------


def _pma_neuromod(seed: int, n_events: int = 1000) -> dict:
    rng = derive(seed, 0x0E0E)
    state = neuro.NeuroState()
    kinds = sorted(neuro.EVENT_TABLE)
    da_series, ht_series, all_levels = [], [], []
    for _ in range(n_events):
        neuro.tick(state, 120.0)
        neuro.fire_event(state, kinds[rng.randint(len(kinds))])
        levels = state.levels()
        da_series.append(levels["da"])
        ht_series.append(levels["serotonin"])
        all_levels.extend(levels[c] for c in neuro.CHANNELS)
    mean_level = stats_mod.mean(all_levels)
    return {
        "mean_level": mean_level,
        "tonic_drift": abs(mean_level - neuro.BASELINE) / neuro.BASELINE,
        "da_5ht_corr": stats_mod.pearson(da_series, ht_series),
    }


def _pma_recon_modes(seed: int, n_pairs: int = 100) -> dict:
    rng = derive(seed, 0x4EC0)
    base_tokens = 20
    # Replacement counts planted safely inside each mode's effective-PE band
    # (neuromodulators at baseline multiply raw PE by 1.05).
    plan = {
        "confirmed": (0, 0),
        "selective_edit": (2, 3),
        "integration": (6, 9),
        "new_episode": (15, 19),
    }
    correct = 0
    modes = sorted(plan)
    for i in range(n_pairs):
        target = modes[i % len(modes)]
        lo, hi = plan[target]
        k = lo + (rng.randint(hi - lo + 1) if hi > lo else 0)
        existing = " ".join(f"w{i}_{j}" for j in range(base_tokens))
        tokens = existing.split()
        for j in range(k):
            tokens[j] = f"sub{i}_{j}"
        incoming = " ".join(tokens)
        pe_eff = recon.effective_pe(recon.raw_pe(existing, incoming), 0.5, 0.5)
        if recon.classify_mode(pe_eff) == target:
            correct += 1
    return {"mode_accuracy": correct / n_pairs}


def _pma_priority(seed: int, n_items: int = 50) -> dict:
    rng = derive(seed, 0x9A11)
    gains: dict[int, float] = {}
    scores: list[tuple[int, float]] = []
    for i in range(n_items):
        importance = rng.random()
        def noisy() -> float:
            return min(1.0, max(0.0, importance + 0.12 * rng.gauss()))
        inp = priority.PriorityInput(
            saliency=noisy(),
            valence=noisy() * (1.0 if rng.random() < 0.5 else -1.0),
            reward=noisy(),
            goal=noisy(),
        )
        gains[i] = importance
        scores.append((i, priority.priority(inp)))
    ranked = [i for i, _ in sorted(scores, key=lambda t: (-t[1], t[0]))]
    chronological = list(range(n_items))
    return {
        "priority_ndcg10": metrics_mod.graded_ndcg_at_k(ranked, gains, 10),
        "chronological_ndcg10": metrics_mod.graded_ndcg_at_k(chronological, gains, 10),
    }


def _pma_stability(seed: int, n_draws: int = 1000) -> dict:
    rng = derive(seed, 0x57AB)
    blocked = 0
    for _ in range(n_draws):
        pe = rng.uniform(0.7, 1.0)
        inp = priority.LockInput(
            access_count=rng.randint(11),
            confidence=rng.random(),
            age_days=rng.uniform(0.0, 365.0),
            is_core=rng.random() < 0.1,
        )
        lock, rigidity = priority.lock_score(inp)
        if not priority.gate_update(pe, lock, rigidity):
            blocked += 1
    return {"high_pe_block_rate": blocked / n_draws}


def _pma_bias(seed: int, n_scenarios: int = 50, n_events: int = 120) -> dict:
    rng = derive(seed, 0xB1A5)
    tp = fp = fn = tn = 0
    for s in range(n_scenarios):
        biased = s % 2 == 0
        p_pos = 0.5 + (rng.uniform(0.35, 0.7) / 2.0 if biased else 0.0)
        ledger = priority.BiasLedger()
        t = 0.0
        for _ in range(n_events):
            t += 60.0
            polarity = 1 if rng.random() < p_pos else -1
            priority.record_outcome(ledger, "evidence_accept", polarity, t)
        flagged = ledger.confirmation_bias() > ledger.bias_threshold
        if biased and flagged:
            tp += 1
        elif biased:
            fn += 1
        elif flagged:
            fp += 1
        else:
            tn += 1
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    return {"bias_precision": precision, "bias_recall": recall}


def run_pma(seeds=DEFAULT_SEEDS) -> ExperimentResult:
    def one_seed(seed: int) -> dict:
        row = {"seed": seed}
        row.update(_pma_neuromod(seed))
        row.update(_pma_recon_modes(seed))
        row.update(_pma_priority(seed))
        row.update(_pma_stability(seed))
        row.update(_pma_bias(seed))
        return row

    per_seed = _map_seeds(one_seed, seeds)
    keys = [k for k in per_seed[0] if k != "seed"]
    return ExperimentResult(
        experiment="pma",
        config={"seeds": list(seeds)},
        per_seed=per_seed,
        aggregate={k: aggregate_metric([r[k] for r in per_seed]) for k in keys},
    )


# -- dispatch -----------------------------------------------------------------------------


def run_experiment(kind: str, seeds=DEFAULT_SEEDS, condition: str = "moderate") -> ExperimentResult:
    if kind == "retention":
        return run_retention(seeds)
    if kind == "sleep":
        return run_sleep(seeds)
    if kind == "hebbian_kg":
        return run_hebbian(seeds)
    if kind == "bayes":
        return run_bayes(seeds)
    if kind == "ablation":
        return run_ablation(seeds, condition)
    if kind == "cascade":
        return run_cascade(seeds)
    if kind == "long_horizon":
        return run_long_horizon(seeds)
    if kind == "pma":
        return run_pma(seeds)
    raise ValueError(f"unknown experiment kind {kind!r}")

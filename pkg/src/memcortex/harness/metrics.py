"""Ranking metrics: P@k, R@k, MRR, NDCG@k, F1.

Binary relevance against a gold id set; NDCG uses log2 position discounts
and supports graded gains for importance-ranking benchmarks.
"""

from __future__ import annotations

import math


def precision_at_k(ranked: list[int], gold: set[int], k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    if not gold:
        raise ValueError("gold set must be non-empty")
    top = ranked[:k]
    return sum(1 for r in top if r in gold) / k


def recall_at_k(ranked: list[int], gold: set[int], k: int) -> float:
    if not gold:
        raise ValueError("gold set must be non-empty")
    top = ranked[:k]
    return sum(1 for r in top if r in gold) / len(gold)


def mrr(ranked: list[int], gold: set[int]) -> float:
    if not gold:
        raise ValueError("gold set must be non-empty")
    for pos, item in enumerate(ranked, start=1):
        if item in gold:
            return 1.0 / pos
    return 0.0


def ndcg_at_k(ranked: list[int], gold: set[int], k: int) -> float:
    """Binary-gain NDCG with log2 discount; ideal has all gold up front."""
    if not gold:
        raise ValueError("gold set must be non-empty")
    dcg = 0.0
    for pos, item in enumerate(ranked[:k], start=1):
        if item in gold:
            dcg += 1.0 / math.log2(pos + 1)
    ideal = sum(1.0 / math.log2(pos + 1) for pos in range(1, min(k, len(gold)) + 1))
    return dcg / ideal if ideal > 0 else 0.0


def graded_ndcg_at_k(ranked: list[int], gains: dict[int, float], k: int) -> float:
    """NDCG with real-valued gains (importance-ranking benchmarks)."""
    dcg = 0.0
    for pos, item in enumerate(ranked[:k], start=1):
        dcg += gains.get(item, 0.0) / math.log2(pos + 1)
    ideal_gains = sorted(gains.values(), reverse=True)[:k]
    idcg = sum(g / math.log2(pos + 1) for pos, g in enumerate(ideal_gains, start=1))
    return dcg / idcg if idcg > 0 else 0.0


def f1_at_k(ranked: list[int], gold: set[int], k: int) -> float:
    p = precision_at_k(ranked, gold, k)
    r = recall_at_k(ranked, gold, k)
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


def metrics(ranked: list[int], gold: set[int], k: int) -> dict[str, float]:
    return {
        "p_at_k": precision_at_k(ranked, gold, k),
        "r_at_k": recall_at_k(ranked, gold, k),
        "mrr": mrr(ranked, gold),
        "ndcg_at_k": ndcg_at_k(ranked, gold, k),
        "f1_at_k": f1_at_k(ranked, gold, k),
    }

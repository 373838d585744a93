"""Statistical apparatus: Wilcoxon signed-rank, bootstrap CI, Cohen's d.

The Wilcoxon test is exact for n <= 25 nonzero pairs: the two-sided p-value
is computed from the full null distribution of the positive-rank sum
(midranks doubled to keep arithmetic integral), so ten uniformly positive
differences yield p = 2/2^10 exactly. Larger samples use the normal
approximation with tie correction.
"""

from __future__ import annotations

import math

EXACT_WILCOXON_MAX_N = 25


def _midranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for t in range(i, j + 1):
            ranks[order[t]] = avg
        i = j + 1
    return ranks


def wilcoxon_signed_rank(a: list[float], b: list[float]) -> tuple[float, float]:
    """Two-sided paired test; returns (W_plus, p).

    Zero differences are dropped; fewer than five surviving pairs (or none)
    is an error because the test is meaningless there.
    """
    if len(a) != len(b):
        raise ValueError("paired samples must have equal length")
    diffs = [x - y for x, y in zip(a, b) if x != y]
    if len(diffs) < 5:
        raise ValueError("need at least five nonzero paired differences")
    abs_diffs = [abs(d) for d in diffs]
    ranks = _midranks(abs_diffs)
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)
    n = len(diffs)
    if n <= EXACT_WILCOXON_MAX_N:
        p = _exact_two_sided_p(ranks, w_plus)
    else:
        p = _normal_two_sided_p(ranks, w_plus, n)
    return w_plus, p


def _exact_two_sided_p(ranks: list[float], w_obs: float) -> float:
    # Work with doubled ranks so every value is an integer.
    doubled = [round(2 * r) for r in ranks]
    total = sum(doubled)
    # counts[w] = number of sign assignments with doubled rank-sum w.
    counts = [0] * (total + 1)
    counts[0] = 1
    for r in doubled:
        for w in range(total, r - 1, -1):
            if counts[w - r]:
                counts[w] += counts[w - r]
    n_assignments = 2 ** len(ranks)
    w2 = round(2 * w_obs)
    mean2 = total / 2
    dev = abs(w2 - mean2)
    tail = sum(c for w, c in enumerate(counts) if abs(w - mean2) >= dev - 1e-9)
    return min(1.0, tail / n_assignments)


def _normal_two_sided_p(ranks: list[float], w_plus: float, n: int) -> float:
    mean = n * (n + 1) / 4
    var = n * (n + 1) * (2 * n + 1) / 24
    # Tie correction: subtract sum(t^3 - t)/48 over tie groups.
    seen: dict[float, int] = {}
    for r in ranks:
        seen[r] = seen.get(r, 0) + 1
    var -= sum(t**3 - t for t in seen.values() if t > 1) / 48
    if var <= 0:
        return 1.0
    z = (w_plus - mean) / math.sqrt(var)
    return 2.0 * (1.0 - _phi(abs(z)))


def _phi(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def bootstrap_ci(samples: list[float], rng, n_boot: int = 1000, level: float = 0.95) -> tuple[float, float]:
    """Percentile CI of the mean under seeded resampling."""
    if not samples:
        raise ValueError("samples must be non-empty")
    n = len(samples)
    means = []
    for _ in range(n_boot):
        total = 0.0
        for _ in range(n):
            total += samples[rng.randint(n)]
        means.append(total / n)
    means.sort()
    alpha = (1.0 - level) / 2.0
    lo_idx = min(n_boot - 1, max(0, int(math.floor(alpha * n_boot))))
    hi_idx = min(n_boot - 1, max(0, int(math.ceil((1.0 - alpha) * n_boot)) - 1))
    return means[lo_idx], means[hi_idx]


def cohens_d(a: list[float], b: list[float]) -> float:
    """Mean difference over pooled SD; signed infinity when variance degenerates."""
    if len(a) < 2 or len(b) < 2:
        raise ValueError("each sample needs at least two points")
    mean_a = sum(a) / len(a)
    mean_b = sum(b) / len(b)
    var_a = sum((x - mean_a) ** 2 for x in a) / (len(a) - 1)
    var_b = sum((x - mean_b) ** 2 for x in b) / (len(b) - 1)
    pooled = ((len(a) - 1) * var_a + (len(b) - 1) * var_b) / (len(a) + len(b) - 2)
    diff = mean_a - mean_b
    if pooled <= 0:
        # Near-deterministic floor values produce degenerate variance.
        if diff == 0:
            return 0.0
        return math.inf if diff > 0 else -math.inf
    return diff / math.sqrt(pooled)


def mean(xs: list[float]) -> float:
    return sum(xs) / len(xs)


def stdev(xs: list[float]) -> float:
    if len(xs) < 2:
        return 0.0
    m = mean(xs)
    return math.sqrt(sum((x - m) ** 2 for x in xs) / (len(xs) - 1))


def spearman(xs: list[float], ys: list[float]) -> float:
    """Spearman rank correlation (midranks for ties)."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need two equal-length samples of size >= 2")
    rx = _midranks(list(xs))
    ry = _midranks(list(ys))
    mx, my = mean(rx), mean(ry)
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if vx == 0 or vy == 0:
        return 0.0
    return cov / math.sqrt(vx * vy)


def pearson(xs: list[float], ys: list[float]) -> float:
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need two equal-length samples of size >= 2")
    mx, my = mean(xs), mean(ys)
    cov = sum((a - mx) * (b - my) for a, b in zip(xs, ys))
    vx = sum((a - mx) ** 2 for a in xs)
    vy = sum((b - my) ** 2 for b in ys)
    if vx == 0 or vy == 0:
        return 0.0
    return cov / math.sqrt(vx * vy)

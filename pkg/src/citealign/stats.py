"""Rank statistics: correlation coefficients, rank-based ROC-AUC, and NDCG.

All kernels are pure functions of their inputs. Degenerate statistics (zero
variance, all-tied ranks) return None rather than a silent 0 so that reports
can render them as explicitly undefined.

Tie handling is exact: average ranks for Spearman and AUC, integer
concordance counting for Kendall. The Kendall result is bit-identical to the
textbook pair-enumeration formula because both reduce to the same integer
counts before the single floating-point division.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


def _check_vector(values: Sequence[float], name: str) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{name} contains a non-finite value: {v!r}")


def _check_pair(x: Sequence[float], y: Sequence[float]) -> None:
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError(f"need at least 2 points (got {len(x)})")
    _check_vector(x, "x")
    _check_vector(y, "y")


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks with ties assigned the mean rank of their group."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1  # ranks i+1 .. j+1 averaged
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


@dataclass(frozen=True)
class RankVector:
    """Average ranks of a score vector; sum of ranks is always n(n+1)/2."""

    ranks: tuple[float, ...]

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "RankVector":
        return cls(ranks=tuple(average_ranks(values)))


def pearson(x: Sequence[float], y: Sequence[float]) -> float | None:
    """Sample Pearson correlation; None when either input has zero variance."""
    _check_pair(x, y)
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sxx = syy = 0.0
    for xi, yi in zip(x, y):
        dx = xi - mx
        dy = yi - my
        sxy += dx * dy
        sxx += dx * dx
        syy += dy * dy
    if sxx == 0.0 or syy == 0.0:
        return None
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def spearman(x: Sequence[float], y: Sequence[float]) -> float | None:
    """Pearson correlation of the average-rank vectors (tie-aware)."""
    _check_pair(x, y)
    return pearson(RankVector.from_values(x).ranks, RankVector.from_values(y).ranks)


def _tie_pair_count(sorted_values: list) -> int:
    # Number of pairs (i < j) with equal values, given a sorted list.
    total = 0
    run = 1
    for a, b in zip(sorted_values, sorted_values[1:]):
        if a == b:
            run += 1
        else:
            total += run * (run - 1) // 2
            run = 1
    total += run * (run - 1) // 2
    return total


def _count_inversions(values: list[float]) -> int:
    # Merge-sort count of pairs (i < j) with values[i] > values[j].
    n = len(values)
    if n < 2:
        return 0
    work = list(values)
    buffer = [0.0] * n
    inversions = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if work[j] < work[i]:
                    inversions += mid - i
                    buffer[k] = work[j]
                    j += 1
                else:
                    buffer[k] = work[i]
                    i += 1
                k += 1
            buffer[k:hi] = work[i:mid] if i < mid else work[j:hi]
            work[lo:hi] = buffer[lo:hi]
        width *= 2
    return inversions


def _kendall_counts(x: Sequence[float], y: Sequence[float]):
    """Integer pair counts for Kendall: (C - D, pairs untied in x, untied in y, total)."""
    n = len(x)
    order = sorted(range(n), key=lambda i: (x[i], y[i]))
    xs = [x[i] for i in order]
    ys = [y[i] for i in order]
    n0 = n * (n - 1) // 2
    tied_x = _tie_pair_count(xs)
    tied_both = _tie_pair_count([(x[i], y[i]) for i in order])
    tied_y = _tie_pair_count(sorted(ys))
    discordant = _count_inversions(ys)
    concordant = n0 - tied_x - tied_y + tied_both - discordant
    return concordant - discordant, n0 - tied_x, n0 - tied_y, n0


def kendall_tau_b(x: Sequence[float], y: Sequence[float]) -> float | None:
    """Tie-corrected Kendall tau-b.

    Equals (C - D) / sqrt((C + D + Tx) * (C + D + Ty)) where C and D count
    concordant and discordant pairs and Tx, Ty count pairs tied only in x or
    only in y. None when either side is entirely tied.
    """
    _check_pair(x, y)
    c_minus_d, untied_x, untied_y, _ = _kendall_counts(x, y)
    # untied_x = C + D + Ty and untied_y = C + D + Tx.
    if untied_x == 0 or untied_y == 0:
        return None
    return c_minus_d / math.sqrt(untied_y * untied_x)


def kendall_tau_a(x: Sequence[float], y: Sequence[float]) -> float | None:
    """Kendall tau-a: (C - D) over all n(n-1)/2 pairs, with no tie correction."""
    _check_pair(x, y)
    c_minus_d, _, _, n0 = _kendall_counts(x, y)
    if n0 == 0:
        return None
    return c_minus_d / n0


def roc_auc(positive_scores: Sequence[float], negative_scores: Sequence[float]) -> float:
    """Mann-Whitney ROC-AUC with ties counted as half.

    Computed from average ranks in O(m log m); exactly equals the fraction of
    positive-negative pairs where the positive outscores the negative, with
    0.5 credit for ties.
    """
    if not positive_scores:
        raise ValueError("positive class is empty")
    if not negative_scores:
        raise ValueError("negative class is empty")
    _check_vector(positive_scores, "positive_scores")
    _check_vector(negative_scores, "negative_scores")
    m = len(positive_scores)
    n = len(negative_scores)
    ranks = average_ranks(list(positive_scores) + list(negative_scores))
    rank_sum = sum(ranks[:m])
    u = rank_sum - m * (m + 1) / 2
    return u / (m * n)


_VALID_LABELS = (0, 1, 2)


def _gain(label: int, gain: str) -> float:
    if gain == "exponential":
        return float(2**label - 1)
    if gain == "linear":
        return float(label)
    raise ValueError(f"unknown gain {gain!r}; expected 'exponential' or 'linear'")


def dcg_at_n(ranking: Sequence[int], n: int, gain: str = "exponential") -> float:
    """Discounted cumulative gain over the first n ranks (discount 1/log2(rank+1))."""
    return sum(
        _gain(label, gain) / math.log2(i + 2)
        for i, label in enumerate(ranking[:n])
    )


def ndcg_at_n(ranking: Sequence[int], n: int, gain: str = "exponential") -> float:
    """NDCG@n over graded relevance labels {0, 1, 2}.

    The ideal DCG uses the same label multiset sorted descending; rankings
    with no relevant item (ideal DCG 0) score 0 by convention.
    """
    if n < 1:
        raise ValueError(f"cutoff must be >= 1 (got {n})")
    if not ranking:
        raise ValueError("ranking is empty")
    for label in ranking:
        if label not in _VALID_LABELS:
            raise ValueError(f"invalid relevance label {label!r}; expected 0, 1, or 2")
    ideal = dcg_at_n(sorted(ranking, reverse=True), n, gain)
    if ideal == 0.0:
        return 0.0
    return dcg_at_n(ranking, n, gain) / ideal

"""Wilcoxon signed-rank test for paired samples.

W is the smaller of the positive and negative rank sums. The two-sided
p-value is exact (distribution of the rank sum over all 2^n sign
assignments, computed by subset-sum counting) when n_effective <= 25 and
the nonzero |differences| are untied; otherwise a normal approximation
with tie and continuity corrections is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InputError

EXACT_LIMIT = 25


@dataclass(frozen=True)
class WilcoxonResult:
    w_statistic: float
    n_effective: int
    p_value: float
    method: str              # "exact" or "normal_approximation"
    alternative: str = "two_sided"
    degenerate: bool = False  # all differences were zero


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Ranks 1..n with tied values receiving their average rank."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=float)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _exact_p_two_sided(w: float, n: int) -> float:
    # counts[s] = number of subsets of ranks {1..n} with sum s
    total = n * (n + 1) // 2
    counts = np.zeros(total + 1, dtype=object)
    counts[0] = 1
    for rank in range(1, n + 1):
        counts[rank:] = counts[rank:] + counts[:-rank].copy()
    w_int = int(w)
    low = int(sum(counts[: w_int + 1]))
    high = int(sum(counts[total - w_int :]))
    return min(1.0, (low + high) / float(2**n))


def wilcoxon_signed_rank(xs, ys) -> WilcoxonResult:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise InputError(f"paired samples must be equal-length vectors, got {xs.shape} vs {ys.shape}")
    if len(xs) < 1:
        raise InputError("need at least one pair")

    diffs = xs - ys
    diffs = diffs[diffs != 0.0]
    n = len(diffs)
    if n == 0:
        return WilcoxonResult(0.0, 0, 1.0, "exact", degenerate=True)

    abs_d = np.abs(diffs)
    ranks = _average_ranks(abs_d)
    w_plus = float(ranks[diffs > 0].sum())
    w_minus = float(ranks[diffs < 0].sum())
    w = min(w_plus, w_minus)

    has_ties = len(np.unique(abs_d)) < n
    if n <= EXACT_LIMIT and not has_ties:
        return WilcoxonResult(w, n, _exact_p_two_sided(w, n), "exact")

    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, tie_counts = np.unique(abs_d, return_counts=True)
    var -= float(((tie_counts**3 - tie_counts) / 48.0).sum())
    if var <= 0:
        return WilcoxonResult(w, n, 1.0, "normal_approximation")
    z = (w - mean + 0.5) / math.sqrt(var)  # continuity correction toward the mean
    p = min(1.0, 2.0 * 0.5 * math.erfc(-z / math.sqrt(2.0)))
    return WilcoxonResult(w, n, p, "normal_approximation")

"""Score-vector correlation and paired significance tests.

The Wilcoxon null distribution is enumerated exactly (signed-rank sums over
all sign assignments) up to 20 usable pairs; larger samples use the normal
approximation with tie correction and continuity correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from scipy.special import stdtr

from .errors import ContractViolation, DegenerateInputError, InsufficientDataError

EXACT_WILCOXON_LIMIT = 20


@dataclass(frozen=True)
class PairedSeries:
    """Two aligned measurement series (e.g. Q at k = 2..k_max for two runs)."""

    labels: tuple
    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self):
        if not (len(self.labels) == len(self.a) == len(self.b)):
            raise ContractViolation("labels, a and b must have equal length")
        if len(self.a) < 2:
            raise ContractViolation("paired series needs at least 2 observations")

    @staticmethod
    def of(a: Sequence[float], b: Sequence[float], labels: Sequence | None = None) -> "PairedSeries":
        labels = tuple(labels) if labels is not None else tuple(range(len(a)))
        return PairedSeries(labels=labels, a=tuple(a), b=tuple(b))


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    n_pairs: int
    method: str


def pearson(a: Sequence[float], b: Sequence[float]) -> float:
    """Plain Pearson correlation; rejects degenerate (constant) input."""
    if len(a) != len(b):
        raise ContractViolation(f"length mismatch: {len(a)} vs {len(b)}")
    if len(a) < 2:
        raise ContractViolation("need at least 2 observations")
    n = len(a)
    mean_a = sum(a) / n
    mean_b = sum(b) / n
    var_a = sum((x - mean_a) ** 2 for x in a)
    var_b = sum((y - mean_b) ** 2 for y in b)
    if var_a == 0.0 or var_b == 0.0:
        raise DegenerateInputError("zero variance input")
    cov = sum((x - mean_a) * (y - mean_b) for x, y in zip(a, b))
    r = cov / math.sqrt(var_a * var_b)
    return max(-1.0, min(1.0, r))


def pearson_excluding_nonfinite(a: Sequence[float], b: Sequence[float]) -> tuple[float, int]:
    """Pearson r over the pairs where both values are finite.

    Returns (r, number of excluded pairs); lets callers correlate vectors
    that may carry the infinite edge-clustering sentinel.
    """
    kept = [(x, y) for x, y in zip(a, b) if math.isfinite(x) and math.isfinite(y)]
    excluded = len(a) - len(kept)
    return pearson([x for x, _ in kept], [y for _, y in kept]), excluded


def paired_t_test(s: PairedSeries) -> TestResult:
    """Two-sided paired t-test on a - b."""
    diffs = [x - y for x, y in zip(s.a, s.b)]
    n = len(diffs)
    mean = sum(diffs) / n
    var = sum((d - mean) ** 2 for d in diffs) / (n - 1)
    if var == 0.0:
        if all(d == 0.0 for d in diffs):
            raise DegenerateInputError("all differences are zero")
        raise DegenerateInputError("differences have zero variance")
    t = mean / math.sqrt(var / n)
    # stdtr is the t CDF (continued-fraction incomplete beta under the hood)
    p = 2.0 * float(stdtr(n - 1, -abs(t)))
    return TestResult(statistic=t, p_value=min(1.0, p), n_pairs=n, method="t-paired")


def _signed_ranks(diffs: Sequence[float]) -> tuple[list[float], list[int]]:
    """Average ranks of |d| and the signs, zeros already removed."""
    order = sorted(range(len(diffs)), key=lambda i: abs(diffs[i]))
    ranks = [0.0] * len(diffs)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and abs(diffs[order[j + 1]]) == abs(diffs[order[i]]):
            j += 1
        avg = (i + j) / 2 + 1
        for idx in order[i : j + 1]:
            ranks[idx] = avg
        i = j + 1
    signs = [1 if d > 0 else -1 for d in diffs]
    return ranks, signs


def wilcoxon_exact_p(ranks: Sequence[float], w_plus: float) -> float:
    """Exact two-sided p for the signed-rank sum, enumerating all sign choices.

    Works on doubled ranks so tied (half-integer) ranks stay integral.
    """
    doubled = [round(2 * r) for r in ranks]
    total = sum(doubled)
    counts = [0] * (total + 1)
    counts[0] = 1
    for d in doubled:
        for s in range(total, d - 1, -1):
            counts[s] += counts[s - d]
    w2 = round(2 * w_plus)
    n_assignments = 2 ** len(doubled)
    p_low = sum(counts[: w2 + 1]) / n_assignments
    p_high = sum(counts[w2:]) / n_assignments
    return min(1.0, 2.0 * min(p_low, p_high))


def wilcoxon_signed_rank(s: PairedSeries) -> TestResult:
    """Two-sided Wilcoxon signed-rank test on a - b.

    Zero differences are dropped; ties get average ranks. Needs at least 5
    usable pairs.
    """
    diffs = [x - y for x, y in zip(s.a, s.b) if x != y]
    n = len(diffs)
    if n < 5:
        raise InsufficientDataError(
            f"only {n} nonzero difference(s); need at least 5"
        )
    ranks, signs = _signed_ranks(diffs)
    w_plus = sum(r for r, sign in zip(ranks, signs) if sign > 0)
    w_minus = sum(ranks) - w_plus
    statistic = min(w_plus, w_minus)
    if n <= EXACT_WILCOXON_LIMIT:
        p = wilcoxon_exact_p(ranks, w_plus)
    else:
        mu = n * (n + 1) / 4
        tie_term = 0.0
        seen: dict[float, int] = {}
        for r in ranks:
            seen[r] = seen.get(r, 0) + 1
        for count in seen.values():
            if count > 1:
                tie_term += (count**3 - count) / 48
        sigma = math.sqrt(n * (n + 1) * (2 * n + 1) / 24 - tie_term)
        z = (abs(w_plus - mu) - 0.5) / sigma  # continuity-corrected
        p = min(1.0, math.erfc(z / math.sqrt(2)))
    return TestResult(statistic=statistic, p_value=p, n_pairs=n, method="wilcoxon-signed-rank")

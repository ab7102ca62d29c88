import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hiercut import (
    ContractViolation,
    DegenerateInputError,
    InsufficientDataError,
    PairedSeries,
    paired_t_test,
    pearson,
    pearson_excluding_nonfinite,
    wilcoxon_signed_rank,
)
from hiercut.stattests import wilcoxon_exact_p, _signed_ranks

from .oracles import oracle_wilcoxon_two_sided


# --------------------------------------------------------------------------
# pearson
# --------------------------------------------------------------------------

def test_pearson_identical():
    assert pearson([1, 2, 3, 4], [1, 2, 3, 4]) == pytest.approx(1.0)


def test_pearson_negated():
    assert pearson([1, 2, 3, 4], [-1, -2, -3, -4]) == pytest.approx(-1.0)


def test_pearson_zero_variance():
    with pytest.raises(DegenerateInputError):
        pearson([1, 1, 1], [1, 2, 3])


def test_pearson_length_mismatch():
    with pytest.raises(ContractViolation):
        pearson([1, 2], [1, 2, 3])


def test_pearson_symmetry_and_bounds():
    rng = random.Random(1)
    a = [rng.random() for _ in range(50)]
    b = [rng.random() for _ in range(50)]
    r = pearson(a, b)
    assert r == pytest.approx(pearson(b, a))
    assert -1.0 <= r <= 1.0


@given(
    c=st.floats(min_value=-100, max_value=100).filter(lambda x: abs(x) > 1e-6),
    d=st.floats(min_value=-100, max_value=100),
)
@settings(max_examples=100, deadline=None)
def test_pearson_affine_invariance(c, d):
    rng = random.Random(7)
    a = [rng.random() for _ in range(20)]
    b = [rng.random() for _ in range(20)]
    base = pearson(a, b)
    scaled = pearson(a, [c * y + d for y in b])
    assert scaled == pytest.approx(math.copysign(1.0, c) * base, abs=1e-6)


def test_pearson_excluding_nonfinite():
    a = [1.0, 2.0, math.inf, 3.0]
    b = [1.0, 2.0, 5.0, 3.0]
    r, excluded = pearson_excluding_nonfinite(a, b)
    assert r == pytest.approx(1.0)
    assert excluded == 1


# --------------------------------------------------------------------------
# paired t-test
# --------------------------------------------------------------------------

def test_t_test_dominant_differences():
    rng = random.Random(3)
    a = [10 + 0.01 * rng.random() for _ in range(12)]
    b = [idx * 0.0 for idx in range(12)]
    result = paired_t_test(PairedSeries.of(a, b))
    assert result.p_value < 1e-9
    assert result.method == "t-paired"


def test_t_test_shuffled_pairing_is_unsuspicious():
    rng = random.Random(11)
    values = [rng.gauss(0, 1) for _ in range(40)]
    shuffled = values[:]
    rng.shuffle(shuffled)
    result = paired_t_test(PairedSeries.of(values, shuffled))
    assert result.p_value > 0.01


def test_t_test_textbook_pair():
    # Student's sleep data (1908): classic paired example, published
    # t = -4.0621, df = 9, two-sided p = 0.002833
    a = [0.7, -1.6, -0.2, -1.2, -0.1, 3.4, 3.7, 0.8, 0.0, 2.0]
    b = [1.9, 0.8, 1.1, 0.1, -0.1, 4.4, 5.5, 1.6, 4.6, 3.4]
    result = paired_t_test(PairedSeries.of(a, b))
    assert result.statistic == pytest.approx(-4.062128, abs=1e-6)
    assert result.p_value == pytest.approx(0.00283289, abs=1e-6)
    assert result.n_pairs == 10


def test_t_test_all_zero_differences():
    with pytest.raises(DegenerateInputError):
        paired_t_test(PairedSeries.of([1, 2, 3], [1, 2, 3]))


def test_t_test_constant_nonzero_differences():
    with pytest.raises(DegenerateInputError):
        paired_t_test(PairedSeries.of([2, 3, 4], [1, 2, 3]))


def test_t_test_invariant_under_shared_shift():
    rng = random.Random(5)
    a = [rng.random() for _ in range(9)]
    b = [rng.random() for _ in range(9)]
    base = paired_t_test(PairedSeries.of(a, b))
    shifted = paired_t_test(PairedSeries.of([x + 17.5 for x in a], [y + 17.5 for y in b]))
    assert shifted.p_value == pytest.approx(base.p_value, abs=1e-9)


# --------------------------------------------------------------------------
# wilcoxon signed-rank
# --------------------------------------------------------------------------

def test_wilcoxon_all_positive_n14():
    a = [float(i + 2) for i in range(14)]
    b = [0.0] * 14
    result = wilcoxon_signed_rank(PairedSeries.of(a, b))
    assert result.p_value == pytest.approx(2 / 2**14)
    assert result.statistic == 0.0  # W- is empty


def test_wilcoxon_symmetric_alternation_is_null():
    a = [1.0, -1.0] * 4
    b = [0.0] * 8
    result = wilcoxon_signed_rank(PairedSeries.of(a, b))
    assert result.p_value == pytest.approx(1.0)


def test_wilcoxon_drops_zero_differences():
    a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]
    b = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    result = wilcoxon_signed_rank(PairedSeries.of(a, b))
    assert result.n_pairs == 6


def test_wilcoxon_insufficient_data():
    with pytest.raises(InsufficientDataError):
        wilcoxon_signed_rank(PairedSeries.of([1, 2, 3, 4, 5], [1, 2, 3, 4, 4]))


@pytest.mark.parametrize("seed", range(15))
def test_wilcoxon_exact_matches_brute_force(seed):
    rng = random.Random(700 + seed)
    n = rng.randint(5, 12)
    # half the runs use coarse values so ties and shared magnitudes occur
    coarse = rng.random() < 0.5
    diffs = []
    while len([d for d in diffs if d != 0]) < 5:
        diffs = [
            (rng.randint(-4, 4) if coarse else rng.gauss(0, 1)) for _ in range(n)
        ]
    a = [float(d) for d in diffs]
    b = [0.0] * n
    result = wilcoxon_signed_rank(PairedSeries.of(a, b))
    assert result.p_value == pytest.approx(oracle_wilcoxon_two_sided(diffs), abs=1e-12)


def test_wilcoxon_exact_close_to_normal_at_n15():
    rng = random.Random(42)
    diffs = [rng.gauss(0.4, 1.0) for _ in range(15)]
    while any(d == 0 for d in diffs):
        diffs = [rng.gauss(0.4, 1.0) for _ in range(15)]
    ranks, signs = _signed_ranks(diffs)
    w_plus = sum(r for r, s in zip(ranks, signs) if s > 0)
    exact = wilcoxon_exact_p(ranks, w_plus)
    n = len(diffs)
    mu = n * (n + 1) / 4
    sigma = math.sqrt(n * (n + 1) * (2 * n + 1) / 24)
    normal = min(1.0, math.erfc(((abs(w_plus - mu) - 0.5) / sigma) / math.sqrt(2)))
    assert abs(exact - normal) < 0.01


def test_wilcoxon_normal_branch_above_limit():
    rng = random.Random(9)
    a = [rng.gauss(1.0, 1.0) for _ in range(30)]
    b = [rng.gauss(0.0, 1.0) for _ in range(30)]
    result = wilcoxon_signed_rank(PairedSeries.of(a, b))
    assert 0.0 <= result.p_value <= 1.0
    assert result.n_pairs == 30


def test_paired_series_validation():
    with pytest.raises(ContractViolation):
        PairedSeries.of([1.0], [2.0])
    with pytest.raises(ContractViolation):
        PairedSeries(labels=(1, 2), a=(1.0,), b=(2.0, 3.0))

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from signlab.errors import InputError
from signlab.experiments import wilcoxon_signed_rank


def brute_force_two_sided_p(diffs):
    """Oracle: enumerate all 2^n sign assignments of the ranks explicitly."""
    abs_d = np.abs(diffs)
    order = np.argsort(abs_d)
    ranks = np.empty(len(diffs))
    ranks[order] = np.arange(1, len(diffs) + 1)
    n = len(diffs)
    total = n * (n + 1) // 2
    w_plus_obs = ranks[np.asarray(diffs) > 0].sum()
    w_obs = min(w_plus_obs, total - w_plus_obs)
    low = high = 0
    for signs in itertools.product((0, 1), repeat=n):
        w_plus = sum(r for r, s in zip(ranks, signs) if s)
        if w_plus <= w_obs:
            low += 1
        if w_plus >= total - w_obs:
            high += 1
    return min(1.0, (low + high) / 2.0**n)


def distinct_nonzero_diffs(rng, n):
    """Random differences with distinct nonzero magnitudes."""
    while True:
        d = rng.integers(-50, 51, size=n)
        d = d[d != 0]
        if len(d) == n and len(np.unique(np.abs(d))) == n:
            return d.astype(float)


def test_known_value_all_positive_n5():
    xs = [1.0, 2.0, 3.0, 4.0, 5.0]
    ys = [0.9, 1.7, 2.4, 3.0, 3.5]  # strictly positive, distinct |differences|
    result = wilcoxon_signed_rank(xs, ys)
    assert result.w_statistic == 0.0
    assert result.n_effective == 5
    assert result.method == "exact"
    assert result.p_value == pytest.approx(0.0625, abs=1e-15)


def test_exact_matches_brute_force_oracle():
    rng = np.random.default_rng(42)
    for _ in range(200):
        n = int(rng.integers(1, 13))
        diffs = distinct_nonzero_diffs(rng, n)
        ys = rng.normal(size=n)
        xs = ys + diffs
        result = wilcoxon_signed_rank(xs, ys)
        assert result.method == "exact"
        expected = brute_force_two_sided_p(diffs)
        assert abs(result.p_value - expected) <= 1e-12
        # p-floor
        assert result.p_value >= 2.0 / 2.0**n - 1e-15


def test_antisymmetry():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(2, 15))
        xs = rng.normal(size=n)
        ys = rng.normal(size=n)
        a = wilcoxon_signed_rank(xs, ys)
        b = wilcoxon_signed_rank(ys, xs)
        assert a.w_statistic == b.w_statistic
        assert a.p_value == b.p_value


def test_identical_samples_degenerate():
    xs = [0.3, 0.5, 0.9]
    result = wilcoxon_signed_rank(xs, xs)
    assert result.degenerate
    assert result.p_value == 1.0
    assert result.n_effective == 0


def test_length_mismatch():
    with pytest.raises(InputError):
        wilcoxon_signed_rank([1.0, 2.0], [1.0])


def test_shift_decreases_p_to_floor():
    rng = np.random.default_rng(3)
    n = 8
    ys = rng.normal(size=n)
    noise = rng.normal(scale=0.1, size=n)
    last_p = None
    for c in (0.0, 0.5, 1.0, 2.0, 5.0):
        xs = ys + noise + c
        p = wilcoxon_signed_rank(xs, ys).p_value
        if last_p is not None:
            assert p <= last_p + 1e-15
        last_p = p
    assert last_p == pytest.approx(2.0 / 2.0**n)


def test_normal_approximation_on_large_or_tied():
    # ties in |d| force the approximation
    xs = [1.0, 2.0, 3.0, 4.0]
    ys = [0.0, 1.0, 2.0, 5.0]
    result = wilcoxon_signed_rank(xs, ys)
    assert result.method == "normal_approximation"
    assert 0.0 <= result.p_value <= 1.0

    rng = np.random.default_rng(1)
    xs = rng.normal(size=40)
    ys = rng.normal(size=40)
    result = wilcoxon_signed_rank(xs, ys)
    assert result.method == "normal_approximation"
    assert 0.0 <= result.p_value <= 1.0


def test_normal_approximation_matches_exact_loosely():
    # at n=25 (exact limit) the corrected normal approximation should be close
    rng = np.random.default_rng(5)
    ys = rng.normal(size=25)
    xs = ys + distinct_nonzero_diffs(rng, 25) * 0.01
    exact = wilcoxon_signed_rank(xs, ys)
    assert exact.method == "exact"
    mean = 25 * 26 / 4.0
    var = 25 * 26 * 51 / 24.0
    z = (exact.w_statistic - mean + 0.5) / math.sqrt(var)
    approx = math.erfc(-z / math.sqrt(2.0))
    assert exact.p_value == pytest.approx(approx, abs=0.02)


@given(
    st.lists(st.floats(min_value=-100, max_value=100, allow_nan=False), min_size=1, max_size=30),
    st.lists(st.floats(min_value=-100, max_value=100, allow_nan=False), min_size=1, max_size=30),
)
@settings(max_examples=200, deadline=None)
def test_result_contracts_hold_for_any_input(xs, ys):
    n = min(len(xs), len(ys))
    xs, ys = xs[:n], ys[:n]
    result = wilcoxon_signed_rank(xs, ys)
    assert 0.0 <= result.p_value <= 1.0
    assert result.w_statistic >= 0.0
    assert result.w_statistic <= result.n_effective * (result.n_effective + 1) / 2
    mirrored = wilcoxon_signed_rank(ys, xs)
    assert mirrored.w_statistic == result.w_statistic
    assert mirrored.p_value == result.p_value

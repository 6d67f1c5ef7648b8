"""
Tests for the Monte Carlo h_k estimator.
"""

import numpy as np
import pytest

from symineq import mc
from symineq.sympoly import DomainError, complete_hom


def test_exponential_from_uniform():
    """Test the inverse-CDF transform at fixed points."""
    assert mc.exponential_from_uniform(0.0) == 0.0
    assert mc.exponential_from_uniform(1 - np.exp(-2.0)) == pytest.approx(2.0, rel=1e-14)


def test_sample_exponential_moments():
    """Test that samples have mean and variance near 1."""
    xi = mc.sample_exponential(np.random.default_rng(0), 200_000)
    assert xi.min() >= 0
    assert xi.mean() == pytest.approx(1.0, abs=0.01)
    assert xi.var() == pytest.approx(1.0, abs=0.03)


def test_merge_moments_matches_direct():
    """Test that merged block moments equal the moments of the concatenation."""
    rng = np.random.default_rng(3)
    a, b, c = rng.random(100), rng.random(37), rng.random(1)
    merged = mc.merge_moments(mc.merge_moments(mc.Moments.of(a), mc.Moments.of(b)), mc.Moments.of(c))
    full = np.concatenate([a, b, c])
    assert merged.count == full.size
    assert merged.mean == pytest.approx(full.mean(), rel=1e-14)
    assert merged.m2 == pytest.approx(np.sum((full - full.mean()) ** 2), rel=1e-12)


def test_degree_zero_is_exact():
    """Test that h_0 = 1 with zero standard error."""
    estimate = mc.estimate_hk([1.0, 2.0], 0, 100, 0)
    assert estimate.mean == 1.0
    assert estimate.std_error == 0.0
    assert estimate.z_score(1.0) == 0.0


def test_estimate_agrees_with_recurrence():
    """Test the estimate lies within 5 standard errors of h_3(1, 2, 3) = 90."""
    estimate = mc.estimate_hk([1.0, 2.0, 3.0], 3, 200_000, 0)
    exact = complete_hom([1.0, 2.0, 3.0], 3)
    assert exact == 90.0
    assert abs(estimate.z_score(exact)) <= 5.0
    assert estimate.samples == 200_000


def test_estimate_is_exactly_homogeneous():
    """Test that doubling x scales a same-seed estimate by exactly 2^k."""
    base = mc.estimate_hk([0.5, 1.5, 2.0], 3, 10_000, 4)
    doubled = mc.estimate_hk([1.0, 3.0, 4.0], 3, 10_000, 4)
    assert doubled.mean == 8.0 * base.mean
    assert doubled.std_error == pytest.approx(8.0 * base.std_error, rel=1e-12)


def test_estimate_homogeneous_for_general_scale():
    """Test homogeneity for a non-power-of-two factor up to roundoff."""
    base = mc.estimate_hk([0.5, 1.5], 2, 10_000, 4)
    scaled = mc.estimate_hk([1.5, 4.5], 2, 10_000, 4)
    assert scaled.mean == pytest.approx(9.0 * base.mean, rel=1e-12)


def test_estimate_is_independent_of_thread_count():
    """Test that block seeding makes the estimate thread-count invariant."""
    samples = 2 * mc.MC_BLOCK_SIZE + 123
    single = mc.estimate_hk([1.0, 2.0], 2, samples, 9, threads=1)
    pooled = mc.estimate_hk([1.0, 2.0], 2, samples, 9, threads=3)
    assert single == pooled


def test_overflow_is_reported():
    """Test that overflowing samples raise EstimateOverflowError."""
    with pytest.raises(mc.EstimateOverflowError):
        mc.estimate_hk([1e300, 1e300], 3, 100, 0)


@pytest.mark.parametrize("k,samples", [(-1, 100), (2, 1), (1.5, 100)])
def test_invalid_arguments(k, samples):
    """Test the k and sample-count preconditions."""
    with pytest.raises(DomainError):
        mc.estimate_hk([1.0, 2.0], k, samples, 0)


def test_estimate_within_five_errors_for_most_seeds():
    """Test that at least 19 of 20 seeds land within 5 standard errors of h_3(1, 2, 3)."""
    exact = complete_hom([1.0, 2.0, 3.0], 3)
    hits = sum(abs(mc.estimate_hk([1.0, 2.0, 3.0], 3, 20_000, seed).z_score(exact)) <= 5.0 for seed in range(20))
    assert hits >= 19


def test_block_moments_match_sequential_welford():
    """Test that block moments merged pairwise agree with one-sample-at-a-time accumulation."""
    values = np.random.default_rng(5).exponential(size=10_000) ** 3
    count, mean, m2 = 0, 0.0, 0.0
    for v in values:
        count += 1
        delta = v - mean
        mean += delta / count
        m2 += delta * (v - mean)
    merged = mc.Moments(0, 0.0, 0.0)
    for block in np.array_split(values, 7):
        merged = mc.merge_moments(merged, mc.Moments.of(block))
    assert merged.count == count
    assert merged.mean == pytest.approx(mean, rel=1e-12)
    assert merged.m2 == pytest.approx(m2, rel=1e-10)

"""
Tests for the symmetric polynomial kernels.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symineq.sympoly import (
    DomainError,
    EnumerationLimitError,
    LogValue,
    PositiveVector,
    brute_complete_hom,
    brute_elem_sym,
    complete_hom,
    complete_hom_all,
    complete_hom_log,
    complete_hom_raw,
    elem_sym,
    elem_sym_all,
    elem_sym_log,
    elem_sym_raw,
    newton_residual,
    power_vec,
)
from tests.strategies import vectors


def test_elem_sym_worked_example(sample_vector):
    """Test e_k(1, 2, 3) for every k."""
    assert list(elem_sym_all(sample_vector, 3)) == [1.0, 6.0, 11.0, 6.0]
    assert elem_sym(sample_vector, 2) == 11.0


def test_elem_sym_zero_degree_is_one():
    """Test that e_0 = 1 for any vector."""
    assert elem_sym([5.0, 7.0], 0) == 1.0


@pytest.mark.parametrize("k", [-1, 4, 2.5])
def test_elem_sym_rejects_bad_k(sample_vector, k):
    """Test that k outside 0..n (or non-integer) is a DomainError."""
    with pytest.raises(DomainError):
        elem_sym(sample_vector, k)


@pytest.mark.parametrize("values", [[], [1.0, -1.0], [1.0, math.nan], [math.inf]])
def test_vector_validation(values):
    """Test that empty, negative and non-finite vectors are rejected."""
    with pytest.raises(DomainError):
        PositiveVector.of(values)


def test_complete_hom_worked_examples():
    """Test h_2(1, 2) = 7 and h_3(1, 2, 3) = 90."""
    assert complete_hom([1.0, 2.0], 2) == 7.0
    assert complete_hom([1.0, 2.0, 3.0], 3) == 90.0
    assert complete_hom([2.0], 5) == 32.0


def test_complete_hom_allows_k_above_n():
    """Test that h_k has no upper bound on k."""
    assert list(complete_hom_all([1.0], 4)) == [1.0] * 5


@settings(max_examples=60, deadline=None)
@given(vectors(max_size=8), st.data())
def test_elem_sym_matches_subset_enumeration(x, data):
    """Test the recurrence against explicit subset enumeration."""
    k = data.draw(st.integers(min_value=0, max_value=len(x)))
    assert elem_sym(x, k) == pytest.approx(brute_elem_sym(x, k), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(vectors(max_size=5), st.integers(min_value=0, max_value=5))
def test_complete_hom_matches_multiset_enumeration(x, k):
    """Test the recurrence against multiset enumeration."""
    assert complete_hom(x, k) == pytest.approx(brute_complete_hom(x, k), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(vectors(max_size=8), st.data())
def test_log_domain_agrees_with_raw(x, data):
    """Test that the log-domain kernels exponentiate back to the raw values."""
    k = data.draw(st.integers(min_value=0, max_value=len(x)))
    assert elem_sym_log(x, k).value() == pytest.approx(elem_sym(x, k), rel=1e-12)
    assert complete_hom_log(x, k).value() == pytest.approx(complete_hom(x, k), rel=1e-12)


def test_log_domain_survives_overflow():
    """Test that e_k of huge entries overflows raw but not in the log domain."""
    x = [1e200] * 4
    assert math.isinf(elem_sym(x, 2))
    expected = math.log(6) + 400 * math.log(10)
    assert elem_sym_log(x, 2).log == pytest.approx(expected, rel=1e-14)
    assert complete_hom_log(x, 2).log == pytest.approx(math.log(10) + 400 * math.log(10), rel=1e-14)


def test_zero_entries_give_zero_flag():
    """Test that e_k with too few nonzero entries is an exact zero."""
    value = elem_sym_log([0.0, 0.0, 3.0], 2)
    assert value.zero_flag
    assert value.value() == 0.0


@settings(max_examples=60, deadline=None)
@given(vectors(min_size=1, max_size=6), st.data())
def test_newton_identity(x, data):
    """Test sum (-1)^i e_i h_{k-i} = 0 for 1 <= k <= n."""
    k = data.draw(st.integers(min_value=1, max_value=len(x)))
    residual, largest = newton_residual(x, k)
    assert abs(residual) <= 1e-12 * (k + 1) * largest


def test_power_vec():
    """Test elementwise powers and the zero-entry restriction."""
    assert power_vec([4.0, 9.0], 0.5).entries == (2.0, 3.0)
    assert power_vec([0.0, 2.0], 2.0).entries == (0.0, 4.0)
    with pytest.raises(DomainError):
        power_vec([0.0, 2.0], -0.5)


def test_brute_force_limits():
    """Test that oversized enumerations are refused."""
    with pytest.raises(EnumerationLimitError):
        brute_elem_sym([1.0] * 17, 2)
    with pytest.raises(EnumerationLimitError):
        brute_complete_hom([1.0] * 20, 10)


def test_log_value_arithmetic():
    """Test LogValue products, sums and the zero flag."""
    a, b = LogValue.from_value(2.0), LogValue.from_value(3.0)
    zero = LogValue.from_value(0.0)
    assert (a * b).value() == pytest.approx(6.0, rel=1e-14)
    assert (a + b).value() == pytest.approx(5.0, rel=1e-14)
    assert (a + zero).value() == pytest.approx(2.0, rel=1e-14)
    assert (a * zero).zero_flag
    assert LogValue.from_log(1000.0).value() == math.inf


def test_vector_helpers():
    """Test drop, add and scale on PositiveVector."""
    x = PositiveVector.of([1.0, 2.0, 3.0])
    assert x.drop(1).entries == (1.0, 3.0)
    assert (x + x).entries == (2.0, 4.0, 6.0)
    assert x.scale(0.5).entries == (0.5, 1.0, 1.5)
    with pytest.raises(DomainError):
        x + PositiveVector.of([1.0])


@settings(max_examples=60, deadline=None)
@given(vectors(max_size=8), st.randoms(use_true_random=False), st.data())
def test_kernels_are_permutation_invariant(x, rnd, data):
    """Test that reordering the entries leaves e_k and h_k unchanged."""
    k = data.draw(st.integers(min_value=0, max_value=len(x)))
    shuffled = list(x)
    rnd.shuffle(shuffled)
    assert elem_sym(shuffled, k) == pytest.approx(elem_sym(x, k), rel=1e-13)
    assert complete_hom(shuffled, k) == pytest.approx(complete_hom(x, k), rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(vectors(max_size=8), st.floats(min_value=0.1, max_value=10.0), st.data())
def test_kernels_are_homogeneous_of_degree_k(x, t, data):
    """Test e_k(t x) = t^k e_k(x) and h_k(t x) = t^k h_k(x)."""
    k = data.draw(st.integers(min_value=0, max_value=len(x)))
    tx = [t * v for v in x]
    assert elem_sym(tx, k) == pytest.approx(t**k * elem_sym(x, k), rel=1e-12)
    assert complete_hom(tx, k) == pytest.approx(t**k * complete_hom(x, k), rel=1e-12)


def test_unchecked_kernels_match_validated_ones(sample_vector):
    """Test that the unvalidated recurrences give the same values bit for bit."""
    assert elem_sym_raw(sample_vector, 3) == list(elem_sym_all(sample_vector, 3))
    assert complete_hom_raw(sample_vector, 4) == list(complete_hom_all(sample_vector, 4))
    assert elem_sym_raw([], 0) == [1.0]

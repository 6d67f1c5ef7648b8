"""
Tests for the verification engine.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symineq import funcs, parsum, verify
from symineq.sympoly import DomainError
from symineq.verify import (
    Checker,
    ConfigError,
    DresherForm,
    EntryDistribution,
    Family,
    IndexPolicy,
    PolicyMode,
    SearchRegion,
    TrialConfig,
)
from tests.strategies import vector_pairs, vectors


def test_derive_seed_is_deterministic():
    """Test that seeds depend only on (seed, key, index)."""
    assert verify.derive_seed(0, "ml-new", 5) == verify.derive_seed(0, "ml-new", 5)
    assert verify.derive_seed(0, "ml-new", 5) != verify.derive_seed(0, "ml-new", 6)
    assert verify.derive_seed(0, "ml-new", 5) != verify.derive_seed(0, "hk-root", 5)
    assert verify.derive_seed(0, "ml-new", 5) != verify.derive_seed(1, "ml-new", 5)
    assert 0 <= verify.derive_seed(2**64 - 1, "x", 10**9) < 2**64


def test_make_report_tolerance_scaling():
    """Test pass iff margin >= -tol * max(1, |lhs|, |rhs|)."""
    assert verify.make_report("c", {}, 1.0, 1.0, -1e-10, 1e-9).passed
    assert not verify.make_report("c", {}, 1.0, 1.0, -1e-8, 1e-9).passed
    assert verify.make_report("c", {}, 1e6, 1e6, -1e-4, 1e-9).passed
    assert not verify.make_report("c", {}, 1.0, 1.0, float("nan"), 1e-9).passed


def test_superadditive_and_subadditive_orientation():
    """Test margins of a sum (equality) and of max (strictly subadditive)."""
    same = verify.check_superadditive(sum, [1.0, 2.0], [3.0, 4.0])
    assert same.passed and same.margin == 0.0
    failing = verify.check_superadditive(max, [1.0, 0.0], [0.0, 1.0])
    assert not failing.passed
    assert failing.margin == -1.0
    assert verify.check_subadditive(max, [1.0, 0.0], [0.0, 1.0]).passed


def test_length_mismatch_is_domain_error():
    """Test that x and y must have equal length."""
    with pytest.raises(DomainError):
        verify.check_superadditive(sum, [1.0], [1.0, 2.0])


def test_recip_concave_equal_inputs_margin_is_exactly_zero():
    """Test that x = y gives margin 0 exactly because H(a, a) = a."""
    report = verify.check_recip_concave([1.0, 2.0, 3.0], [1.0, 2.0, 3.0], 2, -0.5)
    assert report.margin == 0.0
    assert report.passed


@settings(max_examples=60, deadline=None)
@given(vector_pairs(max_size=6), st.floats(min_value=-0.95, max_value=-0.05), st.data())
def test_recip_concave_holds_when_k_times_p_at_most_one(pair, p, data):
    """Test e_k(((x+y)/2)^p) <= H(e_k(x^p), e_k(y^p)) for p in (-1, 0) and k|p| <= 1."""
    x, y = pair
    ks = [k for k in range(1, len(x) + 1) if funcs.recip_proven(k, p)]
    k = data.draw(st.sampled_from(ks))
    assert verify.check_recip_concave(x, y, k, p).passed


def test_recip_concave_fails_along_a_ray():
    """Test that k|p| > 1 breaks the bound: 1/e_2(x^-0.9) has degree 1.8 and is convex along rays."""
    report = verify.check_recip_concave([1.0, 1.0], [3.0, 3.0], 2, -0.9)
    assert not report.passed
    assert report.lhs == pytest.approx(2.0**-1.8, rel=1e-14)
    assert report.margin == pytest.approx(-0.0440, abs=1e-3)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=2, max_size=2),
    st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=2, max_size=2),
    st.floats(min_value=-1.0, max_value=3.0).filter(lambda p: abs(p) > 0.05),
)
def test_p_par_sum_is_midpoint_concave(u, v, p):
    """Test midpoint concavity of (x, y) -> x :_p y for p >= -1."""
    report = verify.check_midpoint_concave(lambda w: parsum.p_par_sum(w[0], w[1], p), u, v)
    assert report.passed


def test_dresher_equal_inputs_is_tight():
    """Test that a = b = c = d gives equality in both forms."""
    for form in DresherForm:
        report = verify.check_dresher_scalar(1.0, 1.0, 1.0, 1.0, 2, 1.0, form=form)
        assert report.lhs == pytest.approx(2.0, rel=1e-15)
        assert report.margin == pytest.approx(0.0, abs=1e-15)


def test_dresher_zero_pair_contributes_zero():
    """Test that an all-zero pair is dropped instead of dividing by zero."""
    report = verify.check_dresher_scalar(0.0, 1.0, 0.0, 2.0, 2, 1.5)
    assert report.passed


def test_dresher_domain():
    """Test the k >= 2 and not-all-zero requirements."""
    with pytest.raises(DomainError):
        verify.check_dresher_scalar(1.0, 1.0, 1.0, 1.0, 1, 1.0)
    with pytest.raises(DomainError):
        verify.check_dresher_scalar(0.0, 0.0, 0.0, 0.0, 2, 1.0)


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.floats(min_value=1e-2, max_value=1e2), min_size=4, max_size=4),
    st.integers(min_value=2, max_value=6),
    st.floats(min_value=1.0, max_value=3.0),
)
def test_dresher_holds_for_p_at_least_one(values, k, p):
    """Test both power-ratio forms on random scalars."""
    for form in DresherForm:
        assert verify.check_dresher_scalar(*values, k, p, form=form).passed


def test_mixed_minkowski_worked_examples():
    """Test the mixed-norm Minkowski inequality on tight cases."""
    assert verify.check_mixed_minkowski([[3.0]], [[0.0]], 1, 1.0).margin == 0.0
    ones = [[1.0, 1.0], [1.0, 1.0]]
    report = verify.check_mixed_minkowski(ones, ones, 1, 1.0)
    assert report.lhs == 8.0 and report.rhs == 8.0


def test_index_policies():
    """Test fixed, cycling and random index choice."""
    rng = np.random.default_rng(0)
    assert IndexPolicy.fixed(2).choose([1, 2, 3], rng, 7) == 2
    cycle = IndexPolicy(PolicyMode.ALL_VALID)
    assert [cycle.choose([1, 2, 3], rng, i) for i in range(4)] == [1, 2, 3, 1]
    assert IndexPolicy().choose([1, 2, 3], rng, 0) in (1, 2, 3)
    with pytest.raises(ConfigError):
        IndexPolicy.fixed(5).choose([1, 2, 3], rng, 0)


def test_distribution_parsing():
    """Test the LO:HI distribution syntax and its validation."""
    dist = EntryDistribution.parse("log-uniform:0.5:2")
    assert dist.lo == 0.5 and dist.hi == 2.0
    sample = dist.sample(np.random.default_rng(0), 1000)
    assert sample.min() >= 0.5 and sample.max() <= 2.0
    with pytest.raises(ConfigError):
        EntryDistribution.parse("log-uniform:0:2")
    with pytest.raises(ConfigError):
        EntryDistribution.parse("gaussian:1:2")


def test_headline_grid_mapping():
    """Test that --headline reads h_k grids as q = 1/p."""
    config = TrialConfig(p_grid=(0.5, 1.0), headline=True)
    assert config.grid_for(verify.get_checker("hk-root")) == (2.0, 1.0)
    assert config.grid_for(verify.get_checker("ml-new")) == (0.5, 1.0)


def test_full_vector_suite_passes():
    """Test that every vector checker passes on its default grid."""
    config = TrialConfig(seed=0, trials=15, n_range=(2, 5))
    summary = verify.run_suite(config, verify.VECTOR_SUITE)
    assert summary.violation_count == 0
    assert set(summary.checkers) == set(verify.VECTOR_SUITE)
    for stats in summary.checkers.values():
        assert stats.passes == stats.trials


def test_suite_is_independent_of_thread_count():
    """Test that results are identical for 1 and 4 threads."""
    config = TrialConfig(seed=7, trials=25, n_range=(2, 6))
    ids = ["ml-new", "hk-ratio", "recip-ek"]
    single = verify.run_suite(config, ids, threads=1)
    pooled = verify.run_suite(config, ids, threads=4)
    assert single.to_dict() == pooled.to_dict()


def test_suite_records_violations(monkeypatch):
    """Test that failing trials are counted and kept in full."""
    def evaluate(inputs, tol):
        return verify.make_report("always-fails", inputs, 1.0, 2.0, -1.0, tol)

    checker = Checker(
        "always-fails", "test double", Family.ELEM, (1.0,), lambda p: True,
        lambda n: range(1, n + 1), verify._vector_sampler, evaluate,
    )
    monkeypatch.setitem(verify.CHECKERS, "always-fails", checker)
    summary = verify.run_suite(TrialConfig(trials=5, n_range=(2, 3)), ["always-fails"])
    assert summary.violation_count == 5
    assert summary.checkers["always-fails"].worst_margin == -1.0
    assert summary.checkers["always-fails"].worst_trial_index == 0
    assert [v.trial_index for v in summary.violations] == [0, 1, 2, 3, 4]


@pytest.mark.parametrize(
    "config,ids",
    [
        (TrialConfig(trials=0), ["ml-new"]),
        (TrialConfig(n_range=(0, 3)), ["ml-new"]),
        (TrialConfig(n_range=(2, 65)), ["ml-new"]),
        (TrialConfig(p_grid=(2.0,)), ["ml-new"]),
        (TrialConfig(p_grid=(0.5,)), ["hk-root"]),
        (TrialConfig(k_policy=IndexPolicy.fixed(3), n_range=(2, 4)), ["ml-new"]),
        (TrialConfig(k_policy=IndexPolicy.fixed(2), n_range=(2, 4)), ["recip-ek"]),
        (TrialConfig(), ["no-such-checker"]),
    ],
)
def test_invalid_configs(config, ids):
    """Test that inconsistent runs are rejected before any trial."""
    with pytest.raises(ConfigError):
        verify.run_suite(config, ids)


def test_search_finds_counterexample_outside_range():
    """Test that [e_1(x^2)]^(1/2), the Euclidean norm, is not superadditive."""
    found = verify.search_counterexample("ek-root", SearchRegion(p=2.0, n=2, k=1), 1000, 0)
    assert found is not None
    assert found.margin < -1e-2
    assert not found.passed
    assert max(max(found.inputs["x"]), max(found.inputs["y"])) == 1.0


def test_search_replays_bit_for_bit():
    """Test that a recorded counterexample re-evaluates identically."""
    found = verify.search_counterexample("ek-root", SearchRegion(p=2.0, n=3, k=1), 500, 3)
    assert found is not None
    again = verify.replay(found)
    assert again.margin == found.margin
    assert again.lhs == found.lhs and again.rhs == found.rhs


def test_search_refuses_proven_range():
    """Test that searching inside the proven range is a domain error."""
    with pytest.raises(DomainError):
        verify.search_counterexample("ek-root", SearchRegion(p=0.5, n=2, k=1), 100, 0)


def test_search_zero_budget_finds_nothing():
    """Test that an empty budget returns None."""
    assert verify.search_counterexample("ek-root", SearchRegion(p=2.0, n=2, k=1), 0, 0) is None


def test_suite_draws_reciprocal_k_inside_proven_range(monkeypatch):
    """Test that trials of a k|p| <= 1 checker never draw k above 1/|p|."""
    def evaluate(inputs, tol):
        return verify.make_report("recip-double", inputs, 1.0, 2.0, -1.0, tol)

    checker = Checker(
        "recip-double", "test double", Family.RECIP, (-0.9, -0.5, -0.3), lambda p: -1.0 < p < 0.0,
        lambda n: range(1, n + 1), verify._vector_sampler, evaluate, proven_k=funcs.recip_proven,
    )
    monkeypatch.setitem(verify.CHECKERS, "recip-double", checker)
    config = TrialConfig(trials=30, n_range=(2, 6), k_policy=IndexPolicy(PolicyMode.ALL_VALID))
    summary = verify.run_suite(config, ["recip-double"])
    drawn = {(v.inputs["k"], v.inputs["p"]) for v in summary.violations}
    assert all(k * abs(p) <= 1.0 + 1e-12 for k, p in drawn)
    assert (3, -0.3) in drawn and (2, -0.5) in drawn


def test_search_finds_reciprocal_counterexample_beyond_one_over_k():
    """Test that recip-ek at p = -0.9 is searchable for k = 2 and yields a violation."""
    found = verify.search_counterexample("recip-ek", SearchRegion(p=-0.9, n=2), 2000, 0)
    assert found is not None
    assert found.inputs["k"] == 2
    assert not found.passed
    assert verify.replay(found).margin == found.margin


@pytest.mark.parametrize(
    "checker_id,region",
    [
        ("recip-ek", SearchRegion(p=-0.9, n=2, k=1)),
        ("recip-ek", SearchRegion(p=-0.3, n=3)),
        ("ml-orig", SearchRegion(p=0.5, n=3, k=2)),
        ("hk-mcleod", SearchRegion(p=2.0, n=3, k=2)),
    ],
)
def test_search_refuses_every_proven_functional(checker_id, region):
    """Test that the guard follows the functional actually evaluated, including its k."""
    with pytest.raises(DomainError):
        verify.search_counterexample(checker_id, region, 10, 0)


def test_ml_orig_search_allowed_above_one():
    """Test that ml-orig remains searchable where phi is unproven."""
    assert verify.search_counterexample("ml-orig", SearchRegion(p=2.0, n=3, k=2), 0, 0) is None


def _degree_one_inputs(checker_id, x, y):
    return {"n": len(x), "k": 2, "l": 1, "p": 2.0 if checker_id.startswith("hk") else 0.5, "x": x, "y": y}


DEGREE_ONE_CHECKERS = ["ml-orig", "ml-new", "ek-root", "big-phi", "multi-ppsum", "hk-mcleod", "hk-root", "hk-ratio"]


@pytest.mark.parametrize("checker_id", DEGREE_ONE_CHECKERS + ["recip-ek"])
@settings(max_examples=25, deadline=None)
@given(pair=vector_pairs(min_size=3, max_size=6))
def test_margin_symmetric_in_x_and_y(checker_id, pair):
    """Test that swapping x and y leaves the margin unchanged bit for bit."""
    x, y = pair
    checker = verify.get_checker(checker_id)
    inputs = _degree_one_inputs(checker_id, x, y)
    if checker_id == "recip-ek":
        inputs.update(k=2, p=-0.5)
    forward = checker.evaluate(inputs, 1e-9)
    backward = checker.evaluate({**inputs, "x": y, "y": x}, 1e-9)
    assert forward.margin == backward.margin


@pytest.mark.parametrize("checker_id", DEGREE_ONE_CHECKERS + ["recip-ek"])
@settings(max_examples=25, deadline=None)
@given(pair=vector_pairs(min_size=3, max_size=6), t=st.sampled_from([1e-3, 1e3]))
def test_rescaling_keeps_the_verdict(checker_id, pair, t):
    """Test that multiplying both inputs by 1e-3 or 1e3 does not change pass/fail."""
    x, y = pair
    checker = verify.get_checker(checker_id)
    inputs = _degree_one_inputs(checker_id, x, y)
    if checker_id == "recip-ek":
        inputs.update(k=2, p=-0.5)
    scaled = {**inputs, "x": [t * v for v in x], "y": [t * v for v in y]}
    assert checker.evaluate(scaled, 1e-9).passed == checker.evaluate(inputs, 1e-9).passed


@pytest.mark.parametrize("checker_id", DEGREE_ONE_CHECKERS)
@settings(max_examples=25, deadline=None)
@given(x=vectors(min_size=3, max_size=6))
def test_equal_inputs_are_tight_for_degree_one_checkers(checker_id, x):
    """Test that x = y gives a margin within 1e-12 of the report scale."""
    checker = verify.get_checker(checker_id)
    report = checker.evaluate(_degree_one_inputs(checker_id, x, x), 1e-9)
    assert abs(report.margin) <= 1e-12 * report.scale

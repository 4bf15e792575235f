"""Tests for the increasing-cycle moment estimator.

The trace formula is checked against exhaustive tuple enumeration, the
k = 1 path against the plain trace, and the scale handling against the
exact homogeneity of degree 2k in the samples.
"""

import math

import numpy as np
import pytest

from specest.linalg import gram
from specest.moments import (
    MomentEstimate,
    ResourceLimitError,
    binomial,
    brute_force_increasing,
    empirical_moment,
    estimate_moment,
    estimate_moments,
    monte_carlo_variance,
    trial_seed,
)
from specest.synth import CovarianceModel, factor, sample


class TestHelpers:
    def test_binomial_exact(self):
        assert binomial(10, 3) == 120.0
        assert binomial(52, 5) == float(math.comb(52, 5))

    def test_trial_seed_is_xor(self):
        assert trial_seed(12, 10) == 6
        assert trial_seed(0, 7) == 7

    def test_trial_seeds_distinct_within_run(self):
        seeds = {trial_seed(982347, i) for i in range(1000)}
        assert len(seeds) == 1000


class TestMomentEstimate:
    def test_k_max(self):
        est = MomentEstimate(values=[1.0, 0.5], n=4, d=3)
        assert est.k_max == 2

    def test_rejects_k_max_above_n(self):
        with pytest.raises(ValueError, match="exceeds sample count"):
            MomentEstimate(values=[1.0, 0.5, 0.2], n=2, d=3)

    def test_rejects_bad_scale(self):
        with pytest.raises(ValueError, match="scale"):
            MomentEstimate(values=[1.0], n=2, d=3, scale=0.0)


class TestEstimateMoment:
    def test_orthogonal_rows_give_zero_higher_moments(self):
        # diagonal gram: no off-diagonal entries, so no cycle of length >= 2
        y = np.sqrt(8.0) * np.eye(8)
        assert estimate_moment(y, 1) == pytest.approx(1.0, abs=1e-15)
        for k in range(2, 9):
            assert estimate_moment(y, k) == 0.0

    def test_single_cycle_when_n_equals_k(self):
        rng = np.random.default_rng(30)
        y = rng.standard_normal((3, 5))
        a = gram(y)
        expected = a[0, 1] * a[1, 2] * a[2, 0] / 5.0
        assert estimate_moment(y, 3) == pytest.approx(expected, rel=1e-12)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            n = int(rng.integers(4, 11))
            d = int(rng.integers(2, 8))
            y = rng.standard_normal((n, d))
            a = gram(y)
            for k in range(1, min(n, 5) + 1):
                fast = estimate_moment(y, k)
                ref = brute_force_increasing(a, k) / d
                scale = max(abs(ref), 1e-12)
                assert abs(fast - ref) / scale < 1e-10

    def test_k1_identical_to_empirical(self):
        rng = np.random.default_rng(32)
        for _ in range(10):
            y = rng.standard_normal((7, 13))
            assert estimate_moment(y, 1) == empirical_moment(y, 1)

    def test_homogeneous_of_degree_2k(self):
        rng = np.random.default_rng(33)
        y = rng.standard_normal((6, 4))
        for k in (1, 2, 3):
            lhs = estimate_moment(2.0 * y, k)
            rhs = 4.0**k * estimate_moment(y, k)
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_rejects_k_out_of_range(self):
        y = np.ones((3, 3))
        with pytest.raises(ValueError):
            estimate_moment(y, 0)
        with pytest.raises(ValueError):
            estimate_moment(y, 4)

    def test_unbiased_on_identity_model(self):
        # all true moments are 1; check the Monte-Carlo mean lands there
        model = CovarianceModel("identity", 6)
        s = factor(model)
        trials = 2000
        for k in (2, 3):
            vals = np.array(
                [
                    estimate_moment(sample(s, 12, "gaussian", trial_seed(100, i)), k)
                    for i in range(trials)
                ]
            )
            se = vals.std(ddof=1) / math.sqrt(trials)
            assert abs(vals.mean() - 1.0) < 4.0 * se


class TestEstimateMoments:
    def test_matches_per_k_calls(self):
        rng = np.random.default_rng(34)
        y = rng.standard_normal((9, 5))
        est = estimate_moments(y, 4)
        for k in range(1, 5):
            assert est.values[k - 1] == pytest.approx(
                estimate_moment(y, k), rel=1e-14
            )

    def test_scale_divides_kth_moment_by_bk(self):
        rng = np.random.default_rng(35)
        y = rng.standard_normal((8, 6))
        base = estimate_moments(y, 5)
        scaled = estimate_moments(y, 5, b=4.0)
        for k in range(1, 6):
            assert scaled.values[k - 1] == pytest.approx(
                base.values[k - 1] / 4.0**k, rel=1e-12
            )

    def test_scale_equivalent_to_scaling_samples(self):
        rng = np.random.default_rng(36)
        y = rng.standard_normal((8, 6))
        b = 2.7
        scaled = estimate_moments(y, 4, b=b)
        direct = estimate_moments(y / math.sqrt(b), 4)
        np.testing.assert_allclose(scaled.values, direct.values, rtol=1e-12)

    def test_records_context(self):
        y = np.ones((5, 3))
        est = estimate_moments(y, 2, b=2.0)
        assert (est.n, est.d, est.scale) == (5, 3, 2.0)

    def test_rejects_nonpositive_scale(self):
        with pytest.raises(ValueError, match="positive"):
            estimate_moments(np.ones((4, 2)), 2, b=0.0)


class TestEmpiricalMoment:
    def test_matches_dense_power_trace(self):
        rng = np.random.default_rng(37)
        for n, d in [(6, 10), (10, 6), (8, 8)]:
            y = rng.standard_normal((n, d))
            cov = y.T @ y / n
            for k in (1, 2, 3):
                direct = np.trace(np.linalg.matrix_power(cov, k)) / d
                assert empirical_moment(y, k) == pytest.approx(direct, rel=1e-10)

    def test_biased_upward_at_small_n(self):
        # classic failure of the plug-in estimate: k = 2, identity model
        model = CovarianceModel("identity", 40)
        s = factor(model)
        vals = [
            empirical_moment(sample(s, 10, "gaussian", trial_seed(200, i)), 2)
            for i in range(50)
        ]
        assert np.mean(vals) > 2.0  # true value is 1


class TestBruteForce:
    def test_k1_is_mean_diagonal(self):
        a = np.diag([1.0, 2.0, 3.0])
        assert brute_force_increasing(a, 1) == pytest.approx(2.0)

    def test_k2_literal(self):
        a = np.array([[0.0, 2.0], [2.0, 0.0]])
        # single pair (0, 1): product 2 * 2 = 4
        assert brute_force_increasing(a, 2) == pytest.approx(4.0)

    def test_resource_guard(self):
        a = np.eye(60)
        with pytest.raises(ResourceLimitError):
            brute_force_increasing(a, 8)


class TestMonteCarloVariance:
    def test_requires_enough_trials(self):
        model = CovarianceModel("identity", 4)
        with pytest.raises(ValueError, match="100"):
            monte_carlo_variance(model, 8, 2, trials=10, seed=0)

    def test_variance_decreases_with_n(self):
        model = CovarianceModel("identity", 30)
        lo = monte_carlo_variance(model, 10, 2, trials=150, seed=1)
        hi = monte_carlo_variance(model, 40, 2, trials=150, seed=1)
        assert hi.variance < lo.variance

    def test_mean_near_truth(self):
        model = CovarianceModel("identity", 20)
        stats = monte_carlo_variance(model, 30, 2, trials=400, seed=2)
        se = math.sqrt(stats.variance / 400)
        assert abs(stats.mean - 1.0) < 5 * se

    def test_deterministic(self):
        model = CovarianceModel("two_spike", 12)
        a = monte_carlo_variance(model, 10, 2, trials=100, seed=3)
        b = monte_carlo_variance(model, 10, 2, trials=100, seed=3)
        assert (a.mean, a.variance) == (b.mean, b.variance)

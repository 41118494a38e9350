import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logsym.errors import DegenerateVariance, DomainError, SampleTooSmall
from logsym.jel import (INFEASIBLE, el_lambda, el_residual, jackknife_variance,
                        jel_log_ratio, jel_test, normal_test, pseudo_values)
from logsym.distributions import LogNormal, RngState, sample
from logsym.ustat import KernelConfig, leave_one_out, ustat_fast, validate_sample

from conftest import positive_samples
from oracles import bisect_lambda, simplex_grid_stat

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False, allow_subnormal=False)


class TestPseudoValues:
    @pytest.mark.parametrize("beta", [1, 2, 3])
    def test_mean_is_statistic(self, rng, beta):
        for x in positive_samples(rng, 30, beta + 2, 80):
            pv = pseudo_values(x, KernelConfig(beta))
            assert abs(pv.values.mean() - ustat_fast(x, KernelConfig(beta)).delta_hat) <= 1e-10

    def test_example(self):
        x = [1, 2, 4, 8]
        pv = pseudo_values(x)
        d = ustat_fast(x).delta_hat
        assert pv.delta_hat == d
        assert pv.values[3] == pytest.approx(4 * d - 3 * 1.25, abs=1e-13)

    def test_reciprocal_closed(self):
        pv = pseudo_values([0.25, 0.5, 1, 2, 4])
        assert abs(pv.values.mean()) <= 1e-10

    def test_too_small(self):
        with pytest.raises(SampleTooSmall):
            pseudo_values([1, 2, 3], KernelConfig(2))


class TestLambda:
    def test_balanced_root_is_zero(self):
        assert el_lambda([-1, 0.5, 0.5]) == 0.0

    @pytest.mark.parametrize("nu", [[1, 2, 3], [-1, -2, -0.5], [0, 1, 2], [0, -1]])
    def test_infeasible(self, nu):
        assert el_lambda(nu) is INFEASIBLE

    def test_all_zero(self):
        assert el_lambda([0.0, 0.0, 0.0]) == 0.0

    def test_three_point_example(self):
        lam = el_lambda([-1, 1, 2])
        assert -0.5 < lam < 1
        assert abs(-1 / (1 - lam) + 1 / (1 + lam) + 2 / (1 + 2 * lam)) < 1e-10
        assert lam == pytest.approx(bisect_lambda([-1, 1, 2]), abs=1e-12)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            el_lambda([])
        with pytest.raises(ValueError):
            el_lambda([1.0, math.nan])

    def test_against_bisection(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 300))
            nu = rng.standard_t(3, n) + rng.normal(0, 0.5)
            if nu.min() >= 0 or nu.max() <= 0:
                continue
            lam = el_lambda(nu)
            assert lam == pytest.approx(bisect_lambda(nu), rel=1e-8, abs=1e-12)

    def test_extreme_scale(self):
        nu = np.array([1e300, -1.0, -2.0, -0.5])
        lam = el_lambda(nu)
        assert np.all(1 + lam * nu > 0)
        assert abs(el_residual(lam, nu)) <= 1e-10 * (1 + 1e300)

    def test_underflowing_ratio_counts_as_zero(self):
        assert el_lambda([1.0, -5e-324]) is INFEASIBLE

    @settings(max_examples=200)
    @given(st.lists(finite, min_size=2, max_size=50))
    def test_trichotomy(self, nu):
        nu = np.array(nu)
        lam = el_lambda(nu)
        if (nu.min() >= 0 or nu.max() <= 0) and np.any(nu != 0):
            assert lam is INFEASIBLE
        else:
            assert lam is not INFEASIBLE
            assert np.all(1 + lam * nu > 0)
            assert abs(el_residual(lam, nu)) <= 1e-10 * (1 + np.abs(nu).max())


class TestLogRatio:
    def test_unconstrained(self):
        sol = jel_log_ratio([-1, 0.5, 0.5])
        assert sol.feasible and sol.stat == 0 and sol.log_ratio == 0
        np.testing.assert_allclose(sol.weights, 1 / 3)

    def test_infeasible(self):
        sol = jel_log_ratio([1, 2, 3])
        assert not sol.feasible
        assert sol.stat == math.inf and sol.log_ratio == -math.inf
        assert sol.weights.size == 0

    def test_three_point_against_simplex(self):
        sol = jel_log_ratio([-1, 1, 2])
        lam = sol.lam
        assert sol.stat == pytest.approx(2 * sum(math.log(1 + lam * v) for v in (-1, 1, 2)),
                                         rel=1e-12)
        assert sol.stat == pytest.approx(simplex_grid_stat([-1, 1, 2]), abs=1e-4)

    def test_weights(self, rng):
        nu = rng.normal(0.3, 1, 200)
        sol = jel_log_ratio(nu)
        p = sol.weights
        assert np.all((p > 0) & (p < 1))
        assert abs(p.sum() - 1) <= 1e-10
        assert abs(p @ nu) <= 1e-8 * np.abs(nu).max()
        assert sol.stat >= 0


class TestJelTest:
    def test_threshold(self, rng):
        res = jel_test(np.exp(rng.normal(size=30)))
        assert res.threshold == pytest.approx(3.8415, abs=1e-4)
        assert res.reject == (res.statistic > res.threshold)
        assert res.method == "jel"

    def test_infeasible_rejects(self):
        res = jel_test([2.0, 3.0, 4.0, 5.0, 6.0])
        assert res.statistic == math.inf and res.reject

    def test_alpha_domain(self):
        with pytest.raises(DomainError):
            jel_test([1, 2, 3, 4], alpha=1.0)

    def test_scale_coherence(self, rng):
        x = np.exp(rng.normal(0, 1, 60))
        c = 7.3
        a_cfg, b_cfg = KernelConfig(2, 1.0), KernelConfig(2, c)
        assert np.allclose(leave_one_out(x, a_cfg), leave_one_out(c * x, b_cfg),
                           rtol=1e-10, atol=1e-10)
        pa, pb = pseudo_values(x, a_cfg), pseudo_values(c * x, b_cfg)
        np.testing.assert_allclose(pa.values, pb.values, rtol=1e-10, atol=1e-10)
        ra, rb = jel_test(x, a_cfg), jel_test(c * x, b_cfg)
        assert ra.lam == pytest.approx(rb.lam, rel=1e-10, abs=1e-10)
        assert ra.statistic == pytest.approx(rb.statistic, rel=1e-10, abs=1e-10)
        assert ra.reject == rb.reject


class TestVarianceAndNormal:
    def test_constant(self):
        assert jackknife_variance(np.full(5, 2.5)).sigma2_hat == 0

    def test_two_points(self):
        assert jackknife_variance([0.0, 2.0]).sigma2_hat == pytest.approx(2.0)

    def test_normal_reciprocal_closed(self):
        res = normal_test([0.25, 0.5, 1, 2, 4])
        assert res.statistic == pytest.approx(0, abs=1e-12) and not res.reject

    def test_normal_threshold(self, rng):
        res = normal_test(np.exp(rng.normal(size=40)))
        assert res.threshold == pytest.approx(1.959964, abs=1e-6)
        assert res.method == "normal"

    def test_constant_sample_degenerate(self):
        with pytest.raises(DegenerateVariance):
            normal_test([3.0] * 10)

    @pytest.mark.slow
    def test_variance_consistency(self):
        spec, n, reps = LogNormal(), 500, 10_000
        deltas = np.empty(reps)
        s2 = np.empty(reps)
        for k in range(reps):
            x = validate_sample(sample(spec, n, RngState(7, k)))
            pv = pseudo_values(x)
            deltas[k] = pv.delta_hat
            s2[k] = jackknife_variance(pv).sigma2_hat
        ratio = (s2.mean() / n) / deltas.var(ddof=1)
        assert 0.8 <= ratio <= 1.25

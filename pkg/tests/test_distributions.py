import math

import numpy as np
import pytest
from scipy import stats

from logsym.distributions import (FAMILIES, BirnbaumSaunders, Gamma, HalfNormal,
                                  LogCauchy, LogLaplace, LogLogistic, LogNormal,
                                  LogNormalFit, Pareto, RngState, Weibull,
                                  fit_lognormal, make_spec, sample,
                                  transform_unit_symmetry)
from logsym.errors import DegenerateSample, InvalidParameter

ALL_SPECS = [LogNormal(0.3, 0.8), LogLogistic(2.0, 3.0), LogLaplace(0.0, 0.5),
             LogCauchy(0.0, 1.0), BirnbaumSaunders(0.5, 2.0), Weibull(0.5, 1.0),
             Gamma(0.4, 1.0), Gamma(2.0, 1.0), Pareto(2.0, 3.0), HalfNormal(2.0)]


def test_nine_families():
    assert len(FAMILIES) == 9
    null = {k for k, c in FAMILIES.items() if c.log_symmetric}
    assert null == {"lognormal", "loglogistic", "loglaplace", "logcauchy", "birnbaumsaunders"}


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.name)
def test_support_and_determinism(spec):
    a = sample(spec, 2000, RngState(11, 3))
    b = sample(spec, 2000, RngState(11, 3))
    c = sample(spec, 2000, RngState(11, 4))
    assert a.tobytes() == b.tobytes()
    assert a.tobytes() != c.tobytes()
    assert np.all(a > 0) and np.all(np.isfinite(a))


def test_pareto_support_and_mean():
    x = sample(Pareto(2.0, 1.0), 100_000, RngState(1))
    assert x.min() >= 1.0
    assert x.mean() == pytest.approx(2.0, rel=0.05)
    assert sample(Pareto(2.0, 3.0), 1000, RngState(2)).min() >= 3.0


def test_lognormal_median():
    x = sample(LogNormal(), 100_000, RngState(2))
    assert np.median(x) == pytest.approx(1.0, abs=0.02)


def test_logcauchy_reciprocal_symmetry():
    x = sample(LogCauchy(), 5000, RngState(3))
    y = sample(LogCauchy(), 5000, RngState(4))
    assert stats.ks_2samp(x, 1 / y).statistic < 0.05


@pytest.mark.parametrize("spec", [LogNormal(), LogLogistic(), LogLaplace(), BirnbaumSaunders()],
                         ids=lambda s: s.name)
def test_null_log_skewness(spec):
    logs = np.log(sample(spec, 100_000, RngState(5)))
    assert abs(stats.skew(logs)) < 0.1
    assert np.median(logs) == pytest.approx(0.0, abs=0.03)


@pytest.mark.parametrize("spec, ref", [
    (Weibull(0.5, 1.0), stats.weibull_min(0.5, scale=1.0)),
    (Weibull(2.0, 3.0), stats.weibull_min(2.0, scale=3.0)),
    (Gamma(0.4, 1.0), stats.gamma(0.4, scale=1.0)),
    (Gamma(2.0, 1.0), stats.gamma(2.0, scale=1.0)),
    (Pareto(2.0, 1.0), stats.pareto(2.0, scale=1.0)),
    (HalfNormal(2.0), stats.halfnorm(scale=2.0)),
    (LogNormal(1.0, 0.5), stats.lognorm(0.5, scale=math.e)),
    (LogLogistic(2.0, 3.0), stats.fisk(3.0, scale=2.0)),
    (BirnbaumSaunders(0.5, 2.0), stats.fatiguelife(0.5, scale=2.0)),
    (LogLaplace(0.0, 0.5), stats.loglaplace(2.0)),
], ids=lambda v: getattr(v, "name", ""))
def test_against_scipy_law(spec, ref):
    x = sample(spec, 20_000, RngState(9))
    assert stats.kstest(x, ref.cdf).pvalue > 1e-3


@pytest.mark.parametrize("spec", [Weibull(0.5, 1.0), Weibull(2.0, 0.3), Pareto(1.0, 0.5),
                                  Pareto(3.0, 2.0), HalfNormal(1.0), HalfNormal(2.0)],
                         ids=lambda s: s.name)
def test_quantile_round_trip(spec):
    u = np.linspace(1e-6, 1 - 1e-6, 401)
    np.testing.assert_allclose(spec.cdf(spec.quantile(u)), u, atol=1e-10, rtol=0)


def test_pareto_cdf_increasing():
    p = Pareto(2.0, 1.0)
    x = np.linspace(0.5, 10, 50)
    assert np.all(np.diff(p.cdf(x)) >= 0)
    assert p.cdf(0.9) == 0.0


@pytest.mark.parametrize("bad", [lambda: LogNormal(0, 0), lambda: Weibull(-1, 1),
                                 lambda: Pareto(1, math.inf), lambda: LogNormal(math.nan, 1),
                                 lambda: HalfNormal(0)])
def test_invalid_parameters(bad):
    with pytest.raises(InvalidParameter):
        bad()


def test_make_spec():
    assert make_spec("Birnbaum-Saunders", alpha=1, scale=1) == BirnbaumSaunders(1.0, 1.0)
    with pytest.raises(InvalidParameter):
        make_spec("frechet")
    with pytest.raises(InvalidParameter):
        make_spec("pareto", mu=1)
    with pytest.raises(InvalidParameter):
        sample(LogNormal(), 0)


class TestFit:
    def test_two_points(self):
        fit = fit_lognormal([math.exp(-1), math.exp(1)])
        assert fit.mu_hat == pytest.approx(0, abs=1e-15)
        assert fit.sigma_hat == pytest.approx(1, rel=1e-15)

    def test_degenerate(self):
        with pytest.raises(DegenerateSample):
            fit_lognormal([2.0] * 5)

    def test_consistency(self):
        fit = fit_lognormal(sample(LogNormal(2.0, 1.0), 10_000, RngState(8)))
        assert abs(fit.mu_hat - 2.0) < 0.05

    def test_transform_maps_center_to_one(self):
        fit = LogNormalFit(0.7, 2.0)
        y = transform_unit_symmetry([math.exp(0.7), 5.0], fit)
        assert 1.0 in y.values or np.isclose(y.values, 1.0, rtol=0, atol=1e-15).any()

    def test_transform_idempotent(self):
        x = sample(LogNormal(1.5, 0.6), 300, RngState(10))
        y = transform_unit_symmetry(x)
        refit = fit_lognormal(y)
        assert refit.mu_hat == pytest.approx(0, abs=1e-10)
        assert refit.sigma_hat == pytest.approx(1, abs=1e-10)
        assert np.all(np.diff(y.values) >= 0)

    def test_transform_bad_fit(self):
        with pytest.raises(DegenerateSample):
            transform_unit_symmetry([1.0, 2.0], LogNormalFit(0.0, 0.0))

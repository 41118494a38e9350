"""
Jackknife empirical likelihood (JEL) test of log-symmetry.

The departure statistic is a U-statistic of degree ``beta + 1``, so its
constraint is not linear in the data.  The jackknife turns it into n
approximately independent pseudo-values

    V_k = n * D - (n - 1) * D_(-k)

whose mean equals D.  Empirical likelihood for the mean of the pseudo-values
being zero then reduces to a one-dimensional root search for the Lagrange
multiplier ``lam`` in

    (1/n) * sum(v_i / (1 + lam * v_i)) = 0,

and ``-2 log R = 2 * sum(log(1 + lam * v_i))`` is compared with a chi-square
quantile on one degree of freedom.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateVariance, DomainError, SampleTooSmall
from .special import chi2_quantile, inverse_normal_cdf
from .ustat import KernelConfig, SampleLike, _fast, _leave_one_out, as_sample

__all__ = [
    "PseudoValues",
    "ElSolution",
    "TestResult",
    "SigmaEstimate",
    "Infeasible",
    "pseudo_values",
    "el_lambda",
    "el_residual",
    "jel_log_ratio",
    "jel_test",
    "jackknife_variance",
    "normal_test",
    "chi2_quantile",
]


class Infeasible:
    """Zero is not interior to the convex hull of the constraint values."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infeasible"

    def __bool__(self):
        return False


INFEASIBLE = Infeasible()


@dataclass(frozen=True)
class PseudoValues:
    values: np.ndarray
    delta_hat: float
    loo: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class ElSolution:
    lam: float
    log_ratio: float
    stat: float
    feasible: bool
    weights: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class TestResult:
    statistic: float
    threshold: float
    alpha: float
    reject: bool
    method: str
    delta_hat: float = math.nan
    n: int = 0
    beta: int = 1
    theta: float = 1.0
    lam: float = math.nan

    __test__ = False  # not a pytest class

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "n": self.n,
            "beta": self.beta,
            "theta": self.theta,
            "delta_hat": self.delta_hat,
            "lambda": self.lam,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "alpha": self.alpha,
            "reject": self.reject,
        }


@dataclass(frozen=True)
class SigmaEstimate:
    sigma2_hat: float


def _pseudo(x: np.ndarray, beta: int, theta: float):
    n = x.size
    d = _fast(x, beta, theta)
    loo = _leave_one_out(x, beta, theta)
    return n * d - (n - 1) * loo, d, loo


def pseudo_values(sample: SampleLike, config: KernelConfig = KernelConfig()) -> PseudoValues:
    s = as_sample(sample)
    if s.n < config.beta + 2:
        raise SampleTooSmall(
            f"jackknife needs n >= beta + 2 = {config.beta + 2}, got n = {s.n}")
    v, d, loo = _pseudo(s.values, config.beta, config.theta)
    return PseudoValues(v, d, loo)


def el_residual(lam: float, nu) -> float:
    nu = np.asarray(nu, dtype=float)
    return float(np.mean(nu / (1.0 + lam * nu)))


def _solve_lambda(nu: np.ndarray):
    scale = float(np.abs(nu).max())
    if scale == 0:
        return 0.0
    # work with nu / scale so extreme pseudo-values cannot overflow r**2;
    # ratios that underflow are exact zeros as far as the solver can tell
    u = nu / scale
    u[np.abs(u) < np.finfo(float).tiny] = 0.0
    umax = u.max()
    umin = u.min()
    if umax <= 0 or umin >= 0:
        return INFEASIBLE

    lo = -1.0 / umax
    hi = -1.0 / umin
    margin = 1e-12 * (hi - lo)
    lo += margin
    hi -= margin
    tol = 1e-10 * (1.0 + scale) / scale
    n = u.size

    lam = 0.0
    for _ in range(5000):
        r = u / (1.0 + lam * u)
        g = r.sum() / n
        if g == 0:
            break
        # g is strictly decreasing in lam
        if g > 0:
            lo = lam
        else:
            hi = lam
        dg = -(r * r).sum() / n
        step = g / dg if dg < 0 else math.inf
        if abs(g) <= tol and abs(step) <= 1e-14 * max(1.0, abs(lam)):
            break
        if hi - lo <= 1e-15 * max(1.0, abs(lam)):
            break
        nxt = lam - step
        lam = nxt if lo < nxt < hi else 0.5 * (lo + hi)
    return float(lam / scale)


def el_lambda(nu):
    """
    Lagrange multiplier of the one-constraint empirical likelihood problem.

    Returns :data:`INFEASIBLE` when every value has the same sign (with at
    least one nonzero), since then no positive weights can average to zero.
    Otherwise the root is found by Newton iteration kept inside the feasible
    interval ``(-1/max(nu), -1/min(nu))`` by bisection.
    """
    nu = np.asarray(nu, dtype=float).ravel()
    if nu.size == 0:
        raise ValueError("nu must be non-empty")
    if not np.all(np.isfinite(nu)):
        raise ValueError("nu must be finite")
    return _solve_lambda(nu)


def jel_log_ratio(nu) -> ElSolution:
    nu = np.asarray(nu, dtype=float).ravel()
    lam = el_lambda(nu)
    if lam is INFEASIBLE:
        return ElSolution(math.nan, -math.inf, math.inf, False, np.empty(0))
    t = lam * nu
    log_ratio = -float(np.log1p(t).sum())
    weights = 1.0 / (nu.size * (1.0 + t))
    # log R <= 0 mathematically; clip rounding noise at the unconstrained optimum
    stat = max(0.0, -2.0 * log_ratio)
    return ElSolution(lam, min(0.0, log_ratio), stat, True, weights)


@functools.lru_cache(maxsize=64)
def _chi2_threshold(alpha: float) -> float:
    return chi2_quantile(1.0 - alpha, 1)


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")


def jel_test(sample: SampleLike, config: KernelConfig = KernelConfig(),
             alpha: float = 0.05) -> TestResult:
    """
    JEL ratio test of log-symmetry about ``config.theta``.

    Rejects when ``-2 log R`` exceeds the ``1 - alpha`` chi-square(1)
    quantile.  An infeasible EL problem gives an infinite statistic and
    therefore a rejection.
    """
    _check_alpha(alpha)
    pv = pseudo_values(sample, config)
    sol = jel_log_ratio(pv.values)
    threshold = _chi2_threshold(alpha)
    return TestResult(
        statistic=sol.stat,
        threshold=threshold,
        alpha=alpha,
        reject=bool(sol.stat > threshold),
        method="jel",
        delta_hat=pv.delta_hat,
        n=pv.n,
        beta=config.beta,
        theta=config.theta,
        lam=sol.lam,
    )


def jackknife_variance(pv) -> SigmaEstimate:
    """Sample variance of the pseudo-values, used as sigma^2 in sqrt(n) D / sigma."""
    v = pv.values if isinstance(pv, PseudoValues) else np.asarray(pv, dtype=float)
    if v.size < 2:
        raise SampleTooSmall("need at least 2 pseudo-values")
    return SigmaEstimate(float(np.var(v, ddof=1)))


def normal_test(sample: SampleLike, config: KernelConfig = KernelConfig(),
                alpha: float = 0.05) -> TestResult:
    """
    Normal-approximation test: reject when ``sqrt(n)|D| / sigma`` exceeds
    the upper ``alpha/2`` standard normal point.

    Kept for comparison with :func:`jel_test`; sigma comes from the
    jackknife, which tends to be unstable for heavy-tailed data.
    """
    _check_alpha(alpha)
    pv = pseudo_values(sample, config)
    s2 = jackknife_variance(pv).sigma2_hat
    scale = max(1.0, float(np.abs(pv.values).max()))
    if not s2 > (1e-10 * scale) ** 2:
        raise DegenerateVariance("pseudo-values have zero variance")
    stat = math.sqrt(pv.n) * abs(pv.delta_hat) / math.sqrt(s2)
    threshold = inverse_normal_cdf(1.0 - alpha / 2.0)
    return TestResult(
        statistic=stat,
        threshold=threshold,
        alpha=alpha,
        reject=bool(stat > threshold),
        method="normal",
        delta_hat=pv.delta_hat,
        n=pv.n,
        beta=config.beta,
        theta=config.theta,
    )

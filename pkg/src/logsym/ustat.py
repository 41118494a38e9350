"""
PWM-based departure statistic for log-symmetry about a point theta.

The kernel of degree ``m = beta + 1`` is

    h(x_1, ..., x_m) = (max(x) / theta - theta / min(x)) / m

and the U-statistic averages it over every m-subset of the sample.  Because
``max`` and ``min`` of a subset only depend on the ranks involved, the
statistic collapses to a weighted sum over order statistics with binomial
weights C(i-1, beta) and C(n-i, beta), which is what :func:`ustat_fast`
evaluates.  :func:`ustat_naive` enumerates the subsets directly and is kept as
a small-sample oracle.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import (
    NonFiniteValue,
    NonPositiveValue,
    SampleTooSmall,
    TooFewObservations,
    WrongArity,
)

__all__ = [
    "Sample",
    "KernelConfig",
    "UStatResult",
    "validate_sample",
    "as_sample",
    "kernel_h",
    "ustat_naive",
    "ustat_fast",
    "leave_one_out",
    "order_weights",
    "theta_for_lognormal",
]


@dataclass(frozen=True)
class Sample:
    """Ascending-sorted, strictly positive observations (use validate_sample)."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class KernelConfig:
    """PWM order ``beta`` and symmetry point ``theta``."""

    beta: int = 1
    theta: float = 1.0

    def __post_init__(self):
        if isinstance(self.beta, bool) or int(self.beta) != self.beta or self.beta < 1:
            raise ValueError(f"beta must be an integer >= 1, got {self.beta!r}")
        if not (np.isfinite(self.theta) and self.theta > 0):
            raise ValueError(f"theta must be a finite positive real, got {self.theta!r}")
        object.__setattr__(self, "beta", int(self.beta))
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def degree(self) -> int:
        return self.beta + 1


@dataclass(frozen=True)
class UStatResult:
    delta_hat: float
    n: int
    config: KernelConfig = field(default_factory=KernelConfig)

    def __float__(self) -> float:
        return self.delta_hat


SampleLike = Union[Sample, Sequence[float], np.ndarray]


def validate_sample(raw) -> Sample:
    """
    Check and sort raw observations.

    Raises
    ------
    TooFewObservations
        Fewer than two values.
    NonFiniteValue
        NaN or infinite entries.
    NonPositiveValue
        Any value <= 0.
    """
    x = np.array(raw, dtype=float).ravel()
    if x.size < 2:
        raise TooFewObservations(f"need at least 2 observations, got {x.size}")
    bad = ~np.isfinite(x)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise NonFiniteValue(f"observation {i} is not finite: {x[i]!r}")
    bad = x <= 0
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise NonPositiveValue(
            f"observation {i} = {x[i]!r} is not strictly positive")
    x = np.sort(x, kind="stable")
    x.setflags(write=False)
    return Sample(x)


def as_sample(data: SampleLike) -> Sample:
    if isinstance(data, Sample):
        return data
    return validate_sample(data)


def _check_size(n: int, needed: int, what: str) -> None:
    if n < needed:
        raise SampleTooSmall(f"{what} needs n >= {needed}, got n = {n}")


def kernel_h(points, config: KernelConfig = KernelConfig()) -> float:
    """Symmetric kernel ``(max/theta - theta/min) / (beta + 1)``."""
    p = np.asarray(points, dtype=float).ravel()
    if p.size != config.degree:
        raise WrongArity(
            f"kernel of degree {config.degree} got {p.size} arguments")
    if not np.all(p > 0):
        raise NonPositiveValue("kernel arguments must be strictly positive")
    th = config.theta
    return (p.max() / th - th / p.min()) / config.degree


def ustat_naive(sample: SampleLike, config: KernelConfig = KernelConfig()) -> UStatResult:
    """
    Average the kernel over all C(n, beta + 1) subsets.

    Cost grows like n**(beta + 1); intended for small n only.
    """
    s = as_sample(sample)
    m = config.degree
    _check_size(s.n, m, "ustat_naive")
    vals = [kernel_h(c, config) for c in itertools.combinations(s.values, m)]
    return UStatResult(math.fsum(vals) / len(vals), s.n, config)


def order_weights(n: int, beta: int) -> np.ndarray:
    """
    Weights ``C(i-1, beta) / ((beta+1) C(n, beta+1))`` for ranks i = 1..n.

    Built as a product of ratios so no factorial is ever formed; the
    reciprocal-term weights are the same array reversed.
    """
    a = np.arange(n, dtype=float)  # i - 1
    w = np.ones(n)
    for j in range(beta):
        w *= (a - j) / (n - j)
    w /= n - beta
    return w


def _fast(x: np.ndarray, beta: int, theta: float) -> float:
    w = order_weights(x.size, beta)
    return math.fsum(w * (x / theta)) - math.fsum(w[::-1] * (theta / x))


def ustat_fast(sample: SampleLike, config: KernelConfig = KernelConfig()) -> UStatResult:
    """Order-statistic form of the U-statistic, linear in n after sorting."""
    s = as_sample(sample)
    _check_size(s.n, config.degree, "ustat_fast")
    return UStatResult(_fast(s.values, config.beta, config.theta), s.n, config)


def _leave_one_out(x: np.ndarray, beta: int, theta: float) -> np.ndarray:
    n = x.size
    w = order_weights(n - 1, beta)
    up = x / theta
    down = theta / x
    # reduced-sample rank of x[i] is i below the removed index, i - 1 above
    keep_lo = np.concatenate(([0.0], np.cumsum(w * up[:-1])))
    keep_hi = np.concatenate((np.cumsum((w * up[1:])[::-1])[::-1], [0.0]))
    wr = w[::-1]
    rec_lo = np.concatenate(([0.0], np.cumsum(wr * down[:-1])))
    rec_hi = np.concatenate((np.cumsum((wr * down[1:])[::-1])[::-1], [0.0]))
    return (keep_lo + keep_hi) - (rec_lo + rec_hi)


def leave_one_out(sample: SampleLike, config: KernelConfig = KernelConfig()) -> np.ndarray:
    """
    Statistic recomputed with each sorted observation removed in turn.

    Entry k corresponds to deleting ``sample.values[k]``.  Prefix and suffix
    sums of the re-indexed weights give all n values in O(n).
    """
    s = as_sample(sample)
    _check_size(s.n, config.beta + 2, "leave_one_out")
    return _leave_one_out(s.values, config.beta, config.theta)


def theta_for_lognormal(mu: float) -> float:
    """Symmetry point exp(mu) of a log-normal(mu, sigma) law."""
    return math.exp(mu)

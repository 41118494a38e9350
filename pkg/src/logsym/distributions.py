"""
Random variates for the null and alternative families of the power study,
plus the log-normal fit and the standardizing transform used on real data.

Every draw goes through an explicit ``numpy.random.Generator``.  Reproducible
substreams come from :class:`RngState`, which keys a PCG64 bit generator on
``(seed, stream)`` through ``SeedSequence``'s spawn key, so replication ``k``
of a study always sees the same numbers no matter which worker runs it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import ClassVar, Union

import numpy as np
from scipy import special as sc

from .errors import DegenerateSample, InvalidParameter
from .special import erf
from .ustat import Sample, SampleLike, as_sample, validate_sample

__all__ = [
    "RngState",
    "DistributionSpec",
    "LogNormal",
    "LogLogistic",
    "LogLaplace",
    "LogCauchy",
    "BirnbaumSaunders",
    "Weibull",
    "Gamma",
    "Pareto",
    "HalfNormal",
    "FAMILIES",
    "make_spec",
    "sample",
    "LogNormalFit",
    "fit_lognormal",
    "transform_unit_symmetry",
]

# exp() of anything beyond this over/underflows double precision
LOG_CLIP = 700.0


@dataclass(frozen=True)
class RngState:
    """PCG64 substream ``stream`` of master ``seed``."""

    seed: int
    stream: int = 0
    algorithm: ClassVar[str] = "PCG64"

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream),))
        return np.random.Generator(np.random.PCG64(ss))


RngLike = Union[RngState, np.random.Generator, int, None]


def _as_generator(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngState):
        return rng.generator()
    return np.random.default_rng(rng)


def _open_uniform(gen: np.random.Generator, n: int) -> np.ndarray:
    # random() lives on the grid k / 2**53, k = 0..2**53-1; shift to (0, 1)
    return gen.random(n) + 2.0 ** -54


@dataclass(frozen=True)
class DistributionSpec:
    """Base class; subclasses are the nine study families."""

    name: ClassVar[str] = ""
    log_symmetric: ClassVar[bool] = False

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name in self._real_params():
                if not np.isfinite(v):
                    raise InvalidParameter(f"{self.name}: {f.name} must be finite")
            elif not (np.isfinite(v) and v > 0):
                raise InvalidParameter(
                    f"{self.name}: {f.name} must be a positive real, got {v!r}")

    @classmethod
    def _real_params(cls) -> tuple:
        return ()

    @property
    def params(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def params_str(self) -> str:
        return ";".join(f"{k}={v:g}" for k, v in self.params.items())

    @property
    def theta(self) -> float:
        """Symmetry point of a log-symmetric family."""
        raise NotImplementedError(f"{self.name} is not log-symmetric")

    def draw(self, gen: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class LogNormal(DistributionSpec):
    mu: float = 0.0
    sigma: float = 1.0
    name: ClassVar[str] = "lognormal"
    log_symmetric: ClassVar[bool] = True

    @classmethod
    def _real_params(cls):
        return ("mu",)

    @property
    def theta(self):
        return math.exp(self.mu)

    def draw(self, gen, n):
        return np.exp(self.mu + self.sigma * gen.standard_normal(n))


@dataclass(frozen=True)
class LogLogistic(DistributionSpec):
    scale: float = 1.0
    shape: float = 1.0
    name: ClassVar[str] = "loglogistic"
    log_symmetric: ClassVar[bool] = True

    @property
    def theta(self):
        return self.scale

    def draw(self, gen, n):
        z = gen.logistic(0.0, 1.0, n) / self.shape
        return self.scale * np.exp(np.clip(z, -LOG_CLIP, LOG_CLIP))


@dataclass(frozen=True)
class LogLaplace(DistributionSpec):
    mu: float = 0.0
    b: float = 1.0
    name: ClassVar[str] = "loglaplace"
    log_symmetric: ClassVar[bool] = True

    @classmethod
    def _real_params(cls):
        return ("mu",)

    @property
    def theta(self):
        return math.exp(self.mu)

    def draw(self, gen, n):
        z = self.mu + gen.laplace(0.0, self.b, n)
        return np.exp(np.clip(z, -LOG_CLIP, LOG_CLIP))


@dataclass(frozen=True)
class LogCauchy(DistributionSpec):
    """
    exp of a Cauchy(mu, gamma) variate.

    Log-values are clipped to +-700 so the draws stay representable; this
    changes roughly 1e-3 of the probability mass per draw at gamma = 1.
    """

    mu: float = 0.0
    gamma: float = 1.0
    name: ClassVar[str] = "logcauchy"
    log_symmetric: ClassVar[bool] = True

    @classmethod
    def _real_params(cls):
        return ("mu",)

    @property
    def theta(self):
        return math.exp(self.mu)

    def draw(self, gen, n):
        z = self.mu + self.gamma * gen.standard_cauchy(n)
        return np.exp(np.clip(z, -LOG_CLIP, LOG_CLIP))


@dataclass(frozen=True)
class BirnbaumSaunders(DistributionSpec):
    alpha: float = 1.0
    scale: float = 1.0
    name: ClassVar[str] = "birnbaumsaunders"
    log_symmetric: ClassVar[bool] = True

    @property
    def theta(self):
        return self.scale

    def draw(self, gen, n):
        h = 0.5 * self.alpha * gen.standard_normal(n)
        # h + sqrt(h^2 + 1) loses everything to cancellation for h << 0
        root = np.where(h >= 0, h + np.hypot(h, 1.0), 1.0 / (np.hypot(h, 1.0) - h))
        return self.scale * root * root


@dataclass(frozen=True)
class Weibull(DistributionSpec):
    """CDF ``1 - exp(-(x/scale)**shape)``."""

    shape: float = 1.0
    scale: float = 1.0
    name: ClassVar[str] = "weibull"

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return -np.expm1(-(x / self.scale) ** self.shape)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        return self.scale * (-np.log1p(-p)) ** (1.0 / self.shape)

    def draw(self, gen, n):
        return self.quantile(_open_uniform(gen, n))


@dataclass(frozen=True)
class Gamma(DistributionSpec):
    shape: float = 1.0
    scale: float = 1.0
    name: ClassVar[str] = "gamma"

    def draw(self, gen, n):
        # numpy uses Marsaglia-Tsang squeeze rejection, boosted for shape < 1
        x = gen.gamma(self.shape, self.scale, n)
        return np.maximum(x, np.finfo(float).tiny)


@dataclass(frozen=True)
class Pareto(DistributionSpec):
    """CDF ``1 - (scale/x)**shape`` on ``x >= scale``."""

    shape: float = 1.0
    scale: float = 1.0
    name: ClassVar[str] = "pareto"

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = -np.expm1(self.shape * np.log(self.scale / np.maximum(x, self.scale)))
        return np.where(x < self.scale, 0.0, out)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        return self.scale * np.exp(-np.log1p(-p) / self.shape)

    def draw(self, gen, n):
        return self.quantile(_open_uniform(gen, n))


@dataclass(frozen=True)
class HalfNormal(DistributionSpec):
    """CDF ``erf(x / (sigma sqrt 2))``."""

    sigma: float = 1.0
    name: ClassVar[str] = "halfnormal"

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        f = np.vectorize(lambda t: erf(t / (self.sigma * math.sqrt(2.0))) if t > 0 else 0.0,
                         otypes=[float])
        return f(x)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        return self.sigma * sc.ndtri(0.5 + 0.5 * p)

    def draw(self, gen, n):
        return self.quantile(_open_uniform(gen, n))


FAMILIES = {
    cls.name: cls
    for cls in (LogNormal, LogLogistic, LogLaplace, LogCauchy, BirnbaumSaunders,
                Weibull, Gamma, Pareto, HalfNormal)
}


def make_spec(family: str, **params) -> DistributionSpec:
    """Build a spec by family name, e.g. ``make_spec("pareto", shape=2, scale=1)``."""
    key = family.lower().replace("-", "").replace("_", "")
    try:
        cls = FAMILIES[key]
    except KeyError:
        raise InvalidParameter(
            f"unknown family {family!r}; choose from {sorted(FAMILIES)}") from None
    try:
        return cls(**params)
    except TypeError as e:
        raise InvalidParameter(f"{family}: {e}") from None


def sample(spec: DistributionSpec, n: int, rng: RngLike = None) -> np.ndarray:
    """Draw ``n`` independent variates from ``spec``."""
    if int(n) != n or n < 1:
        raise InvalidParameter(f"n must be a positive integer, got {n!r}")
    return spec.draw(_as_generator(rng), int(n))


@dataclass(frozen=True)
class LogNormalFit:
    mu_hat: float
    sigma_hat: float


def fit_lognormal(data: SampleLike) -> LogNormalFit:
    """Maximum-likelihood (divisor n) log-normal fit."""
    s = as_sample(data)
    logs = np.log(s.values)
    mu = float(np.mean(logs))
    sigma = float(np.sqrt(np.mean((logs - mu) ** 2)))
    if s.values[0] == s.values[-1] or not sigma > 0:
        raise DegenerateSample("all observations are equal")
    return LogNormalFit(mu, sigma)


def transform_unit_symmetry(data: SampleLike, fit: LogNormalFit | None = None) -> Sample:
    """
    Map ``x -> exp((log x - mu) / sigma)``.

    With a log-normal fit this moves the symmetry point to 1 and the log-scale
    spread to 1.  The sample's own fit is used when ``fit`` is omitted.
    """
    s = as_sample(data)
    if fit is None:
        fit = fit_lognormal(s)
    if not fit.sigma_hat > 0:
        raise DegenerateSample("fit.sigma_hat must be positive")
    return validate_sample(np.exp((np.log(s.values) - fit.mu_hat) / fit.sigma_hat))

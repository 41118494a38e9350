"""
Monte Carlo estimates of size and power for the JEL log-symmetry test.

Replication ``k`` of every cell draws its data from substream ``k`` of the
master seed, and cells only ever reduce integer rejection counts, so a run is
bit-for-bit reproducible however the replications are split across worker
processes.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .distributions import (BirnbaumSaunders, DistributionSpec, Gamma,
                            HalfNormal, LogCauchy, LogLaplace, LogLogistic,
                            LogNormal, Pareto, RngState, Weibull,
                            transform_unit_symmetry)
from .errors import ConfigError
from .jel import _chi2_threshold, _pseudo, jel_log_ratio
from .special import inverse_normal_cdf
from .ustat import validate_sample

__all__ = [
    "ThetaPolicy",
    "SimConfig",
    "SimRow",
    "SimResult",
    "run_type1",
    "run_power",
    "replicate_statistics",
    "emit_csv",
    "read_csv",
    "power_sanity",
    "table1_configs",
    "table2_configs",
    "table3_configs",
    "REFERENCE_TABLE1",
    "REFERENCE_TABLE2",
    "REFERENCE_TABLE3",
    "compare_to_reference",
    "run_table",
    "TABLE2_COLUMNS",
    "TABLE3_COLUMNS",
    "TABLE2_UNRELIABLE",
]

CSV_HEADER = ["family", "params", "n", "beta", "reps", "alpha", "seed", "rejection_rate"]


@dataclass(frozen=True)
class ThetaPolicy:
    """How the symmetry point is chosen for each replication."""

    kind: str = "fixed"
    value: float = 1.0

    KINDS = ("fixed", "lognormal_known_mu", "transform_estimated")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConfigError(f"unknown theta policy {self.kind!r}")
        if self.kind == "fixed" and not (math.isfinite(self.value) and self.value > 0):
            raise ConfigError(f"fixed theta must be positive, got {self.value!r}")

    @classmethod
    def fixed(cls, theta: float = 1.0) -> "ThetaPolicy":
        return cls("fixed", float(theta))

    @classmethod
    def lognormal_known_mu(cls, mu: float) -> "ThetaPolicy":
        return cls("lognormal_known_mu", float(mu))

    @classmethod
    def transform_estimated(cls) -> "ThetaPolicy":
        return cls("transform_estimated", math.nan)

    @property
    def theta(self) -> float:
        if self.kind == "fixed":
            return self.value
        if self.kind == "lognormal_known_mu":
            return math.exp(self.value)
        return 1.0


@dataclass(frozen=True)
class SimConfig:
    spec: DistributionSpec
    n_values: Sequence[int] = (25, 50, 75, 100, 200, 500)
    betas: Sequence[int] = (1, 2, 3)
    reps: int = 10_000
    alpha: float = 0.05
    seed: int = 0
    theta_policy: Optional[ThetaPolicy] = None

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "betas", tuple(int(b) for b in self.betas))
        if not self.n_values or not self.betas:
            raise ConfigError("n_values and betas must be non-empty")
        if int(self.reps) != self.reps or self.reps < 1:
            raise ConfigError(f"reps must be a positive integer, got {self.reps!r}")
        if min(self.betas) < 1:
            raise ConfigError("every beta must be >= 1")
        need = max(self.betas) + 2
        if min(self.n_values) < need:
            raise ConfigError(f"every n must be >= max(betas) + 2 = {need}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class SimRow:
    family: str
    params: str
    n: int
    beta: int
    reps: int
    alpha: float
    seed: int
    rejections: int

    @property
    def rejection_rate(self) -> float:
        return self.rejections / self.reps


@dataclass
class SimResult:
    rows: List[SimRow] = field(default_factory=list)

    def __add__(self, other: "SimResult") -> "SimResult":
        return SimResult(self.rows + other.rows)

    def __len__(self):
        return len(self.rows)

    def sorted_rows(self) -> List[SimRow]:
        return sorted(self.rows, key=lambda r: (r.family, r.n, r.beta))

    def rate(self, n: int, beta: int, family: Optional[str] = None,
             params: Optional[str] = None) -> float:
        for r in self.rows:
            if (r.n, r.beta) == (n, beta) and family in (None, r.family) \
                    and params in (None, r.params):
                return r.rejection_rate
        raise KeyError((family, params, n, beta))


def _one_statistic(spec, n, beta, policy, seed, rep) -> float:
    x = validate_sample(spec.draw(RngState(seed, rep).generator(), n)).values
    if policy.kind == "transform_estimated":
        x = transform_unit_symmetry(x).values
    v, _, _ = _pseudo(x, beta, policy.theta)
    return jel_log_ratio(v).stat


def _chunk_statistics(args) -> np.ndarray:
    spec, n, beta, policy, seed, start, stop = args
    return np.array([_one_statistic(spec, n, beta, policy, seed, k)
                     for k in range(start, stop)])


def _chunks(reps: int, workers: int):
    size = max(1, math.ceil(reps / (4 * workers)))
    return [(a, min(reps, a + size)) for a in range(0, reps, size)]


def _map(func, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(func, tasks))


def _resolve_workers(workers: Optional[int]) -> int:
    if workers is None or workers == 0:
        return os.cpu_count() or 1
    return max(1, int(workers))


def replicate_statistics(spec: DistributionSpec, n: int, beta: int = 1, reps: int = 1000,
                         seed: int = 0, theta_policy: Optional[ThetaPolicy] = None,
                         workers: Optional[int] = 1) -> np.ndarray:
    """``-2 log R`` for ``reps`` independent samples, in replication order."""
    policy = theta_policy or _default_policy(spec)
    workers = _resolve_workers(workers)
    tasks = [(spec, n, beta, policy, seed, a, b) for a, b in _chunks(reps, workers)]
    return np.concatenate(_map(_chunk_statistics, tasks, workers))


def _default_policy(spec: DistributionSpec) -> ThetaPolicy:
    if isinstance(spec, LogNormal):
        return ThetaPolicy.lognormal_known_mu(spec.mu)
    if spec.log_symmetric:
        return ThetaPolicy.fixed(spec.theta)
    return ThetaPolicy.fixed(1.0)


def _run(config: SimConfig, policy: ThetaPolicy, workers) -> SimResult:
    threshold = _chi2_threshold(config.alpha)
    rows = []
    for n in config.n_values:
        for beta in config.betas:
            stats = replicate_statistics(config.spec, n, beta, config.reps, config.seed,
                                         policy, workers)
            rows.append(SimRow(config.spec.name, config.spec.params_str(), n, beta,
                               config.reps, config.alpha, int(config.seed),
                               int(np.count_nonzero(stats > threshold))))
    return SimResult(rows)


def run_type1(config: SimConfig, workers: Optional[int] = 1) -> SimResult:
    """
    Empirical size under a log-symmetric family.

    The default theta policy is the family's own symmetry point; for the
    log-normal that is exp(mu) with mu known.
    """
    spec = config.spec
    if not spec.log_symmetric:
        raise ConfigError(f"{spec.name} is not log-symmetric; use run_power")
    policy = config.theta_policy or _default_policy(spec)
    if policy.kind == "lognormal_known_mu" and not isinstance(spec, LogNormal):
        raise ConfigError("lognormal_known_mu policy needs a log-normal family")
    return _run(config, policy, workers)


def run_power(config: SimConfig, workers: Optional[int] = 1) -> SimResult:
    """Empirical power against a non-log-symmetric family, theta = 1 unless set."""
    spec = config.spec
    if spec.log_symmetric:
        raise ConfigError(f"{spec.name} is log-symmetric; use run_type1")
    policy = config.theta_policy or ThetaPolicy.fixed(1.0)
    if policy.kind == "lognormal_known_mu":
        raise ConfigError("lognormal_known_mu policy is only valid under the null")
    return _run(config, policy, workers)


def _write_csv(result: SimResult, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in result.sorted_rows():
        w.writerow([r.family, r.params, r.n, r.beta, r.reps, repr(float(r.alpha)),
                    r.seed, repr(r.rejection_rate)])


def emit_csv(result: SimResult, path) -> None:
    """
    Write one line per cell, ordered by (family, n, beta).

    ``path`` may also be an open text stream.
    """
    if hasattr(path, "write"):
        _write_csv(result, path)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        _write_csv(result, fh)


def read_csv(path) -> List[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        for k in ("n", "beta", "reps", "seed"):
            r[k] = int(r[k])
        for k in ("alpha", "rejection_rate"):
            r[k] = float(r[k])
    return rows


def power_sanity(result: SimResult, tol: float = 0.03) -> List[str]:
    """Cells where power drops by more than ``tol`` as n grows."""
    problems = []
    groups = {}
    for r in result.rows:
        groups.setdefault((r.family, r.params, r.beta), []).append(r)
    for (fam, params, beta), rows in groups.items():
        rows = sorted(rows, key=lambda r: r.n)
        best = -1.0
        for r in rows:
            if r.rejection_rate < best - tol:
                problems.append(f"{fam}({params}) beta={beta}: power {r.rejection_rate:.3f} "
                                f"at n={r.n} below {best:.3f} at a smaller n")
            best = max(best, r.rejection_rate)
    return problems


# Published cell values, keyed by (column, beta, n).
_N6 = (25, 50, 75, 100, 200, 500)
_N5 = (25, 50, 75, 100, 200)


def _table(columns, ns, blocks):
    out = {}
    for beta, block in zip((1, 2, 3), blocks):
        for n, row in zip(ns, block):
            for col, v in zip(columns, row):
                out[(col, beta, n)] = v
    return out


REFERENCE_TABLE1 = _table(
    ("mu=0", "mu=1", "mu=2", "mu=3"), _N6,
    ([(0.118, 0.104, 0.110, 0.118), (0.091, 0.092, 0.087, 0.089),
      (0.083, 0.069, 0.094, 0.086), (0.065, 0.075, 0.090, 0.082),
      (0.055, 0.057, 0.068, 0.075), (0.051, 0.050, 0.054, 0.055)],
     [(0.122, 0.124, 0.123, 0.124), (0.092, 0.096, 0.101, 0.105),
      (0.092, 0.071, 0.082, 0.079), (0.071, 0.090, 0.076, 0.067),
      (0.065, 0.075, 0.063, 0.064), (0.054, 0.054, 0.055, 0.052)],
     [(0.144, 0.139, 0.127, 0.143), (0.108, 0.116, 0.113, 0.114),
      (0.104, 0.097, 0.095, 0.098), (0.076, 0.077, 0.085, 0.077),
      (0.067, 0.059, 0.062, 0.065), (0.054, 0.051, 0.052, 0.054)]))

REFERENCE_TABLE2 = _table(
    ("loglogistic", "loglaplace", "logcauchy", "birnbaumsaunders"), _N6,
    ([(0.118, 0.100, 0.101, 0.116), (0.090, 0.0902, 0.089, 0.089),
      (0.084, 0.067, 0.093, 0.082), (0.060, 0.070, 0.091, 0.080),
      (0.054, 0.055, 0.065, 0.065), (0.050, 0.050, 0.052, 0.051)],
     [(0.120, 0.122, 0.123, 0.123), (0.090, 0.092, 0.100, 0.100),
      (0.084, 0.074, 0.080, 0.076), (0.070, 0.0740, 0.066, 0.066),
      (0.065, 0.065, 0.060, 0.061), (0.052, 0.051, 0.051, 0.052)],
     [(0.140, 0.139, 0.130, 0.140), (0.110, 0.115, 0.114, 0.111),
      (0.91, 0.087, 0.085, 0.088), (0.071, 0.070, 0.065, 0.067),
      (0.061, 0.058, 0.062, 0.065), (0.051, 0.051, 0.052, 0.050)]))

# cells whose printed value is not a plausible size estimate
TABLE2_UNRELIABLE = {("loglogistic", 3, 75), ("loglaplace", 1, 50), ("loglaplace", 2, 100)}

REFERENCE_TABLE3 = _table(
    ("gamma(1,0.5)", "gamma(2,1)", "pareto(1,0.5)", "pareto(2,1)",
     "weibull(1,0.5)", "weibull(1,2)", "hn(1)", "hn(2)"), _N5,
    ([(0.243, 0.563, 0.811, 1.000, 1.000, 0.247, 0.987, 0.269),
      (0.245, 0.660, 0.980, 1.000, 1.000, 0.250, 1.000, 0.353),
      (0.375, 0.755, 0.996, 1.000, 1.000, 0.333, 1.000, 0.443),
      (0.389, 0.762, 1.000, 1.000, 1.000, 0.374, 1.000, 0.559),
      (0.620, 0.869, 1.000, 1.000, 1.000, 0.604, 1.000, 0.770)],
     [(0.274, 0.550, 0.890, 1.000, 1.000, 0.874, 0.997, 0.329),
      (0.316, 0.557, 0.984, 1.000, 1.000, 0.988, 1.000, 0.414),
      (0.417, 0.646, 1.000, 1.000, 1.000, 1.000, 1.000, 0.588),
      (0.513, 0.677, 1.000, 1.000, 1.000, 0.999, 1.000, 0.680),
      (0.717, 0.801, 1.000, 1.000, 1.000, 1.000, 1.000, 0.893)],
     [(0.299, 0.482, 0.934, 1.000, 1.000, 0.904, 0.993, 0.361),
      (0.371, 0.532, 0.991, 1.000, 1.000, 0.991, 1.000, 0.526),
      (0.463, 0.574, 1.000, 1.000, 1.000, 0.999, 1.000, 0.635),
      (0.538, 0.611, 1.000, 1.000, 1.000, 1.000, 1.000, 0.768),
      (0.798, 0.695, 1.000, 1.000, 1.000, 1.000, 1.000, 0.943)]))

# Table 3 column labels mapped to samplers.  Gamma pairs are (shape, rate) and
# Weibull pairs are (shape, scale), which is the reading under which the
# identical laws Gamma(1, 0.5) and Weibull(1, 2) get matching beta = 1 power.
TABLE3_COLUMNS = {
    "gamma(1,0.5)": Gamma(shape=1.0, scale=2.0),
    "gamma(2,1)": Gamma(shape=2.0, scale=1.0),
    "pareto(1,0.5)": Pareto(shape=1.0, scale=0.5),
    "pareto(2,1)": Pareto(shape=2.0, scale=1.0),
    "weibull(1,0.5)": Weibull(shape=1.0, scale=0.5),
    "weibull(1,2)": Weibull(shape=1.0, scale=2.0),
    "hn(1)": HalfNormal(sigma=1.0),
    "hn(2)": HalfNormal(sigma=2.0),
}

TABLE2_COLUMNS = {
    "loglogistic": LogLogistic(),
    "loglaplace": LogLaplace(),
    "logcauchy": LogCauchy(),
    "birnbaumsaunders": BirnbaumSaunders(alpha=1.0, scale=1.0),
}


def table1_configs(reps: int = 10_000, seed: int = 0) -> dict:
    return {f"mu={mu}": SimConfig(LogNormal(float(mu), 1.0), _N6, (1, 2, 3), reps, 0.05, seed)
            for mu in range(4)}


def table2_configs(reps: int = 10_000, seed: int = 0) -> dict:
    return {k: SimConfig(spec, _N6, (1, 2, 3), reps, 0.05, seed)
            for k, spec in TABLE2_COLUMNS.items()}


def table3_configs(reps: int = 10_000, seed: int = 0) -> dict:
    return {k: SimConfig(spec, _N5, (1, 2, 3), reps, 0.05, seed)
            for k, spec in TABLE3_COLUMNS.items()}


def compare_to_reference(result: SimResult, column: str, table: dict,
                         level: float = 0.999) -> List[tuple]:
    """
    Flag cells outside the two-sided binomial normal-approximation interval
    of width ``level`` around the published rate.

    Returns ``(column, beta, n, ours, expected, halfwidth)`` per flagged cell.
    """
    z = inverse_normal_cdf(0.5 + level / 2)
    out = []
    for r in result.rows:
        key = (column, r.beta, r.n)
        if key not in table:
            continue
        p = table[key]
        half = z * math.sqrt(max(p * (1 - p), 1.0 / r.reps) / r.reps)
        if abs(r.rejection_rate - p) > half:
            out.append((column, r.beta, r.n, r.rejection_rate, p, half))
    return out


def run_table(configs: dict, mode: str, workers: Optional[int] = 1) -> dict:
    runner = run_type1 if mode == "type1" else run_power
    return {k: runner(cfg, workers) for k, cfg in configs.items()}

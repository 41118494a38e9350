"""Jackknife empirical likelihood test of log-symmetry for positive data."""
from .distributions import (FAMILIES, BirnbaumSaunders, DistributionSpec, Gamma,
                            HalfNormal, LogCauchy, LogLaplace, LogLogistic,
                            LogNormal, LogNormalFit, Pareto, RngState, Weibull,
                            fit_lognormal, make_spec, sample,
                            transform_unit_symmetry)
from .errors import *  # noqa: F401,F403
from .jel import (INFEASIBLE, ElSolution, Infeasible, PseudoValues,
                  SigmaEstimate, TestResult, el_lambda, jackknife_variance,
                  jel_log_ratio, jel_test, normal_test, pseudo_values)
from .special import chi2_quantile
from .ustat import (KernelConfig, Sample, UStatResult, kernel_h, leave_one_out,
                    theta_for_lognormal, ustat_fast, ustat_naive,
                    validate_sample)

__version__ = "0.1.0"

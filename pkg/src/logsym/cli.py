"""
Command-line front end.

    logsym test DATA [--transform lognormal] [--beta 1] [--theta 1] [--json]
    logsym ustat DATA [--jackknife] [--naive]
    logsym simulate --mode type1|power --family NAME [params] --n 25 50 ...

Exit status is 0 whenever the computation completed, whatever the test
decision; 1 signals bad data and 2 bad usage or configuration.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import sys
from importlib import resources

from . import __version__
from .distributions import (LogNormalFit, fit_lognormal, make_spec,
                            transform_unit_symmetry)
from .errors import ConfigError, InvalidParameter, LogSymError
from .jel import jel_test, normal_test
from .simharness import SimConfig, ThetaPolicy, emit_csv, run_power, run_type1
from .ustat import KernelConfig, leave_one_out, ustat_fast, ustat_naive, validate_sample

NAIVE_MAX_N = 20
DATASETS = ("welding_gap",)


class DataFileError(LogSymError, ValueError):
    pass


def read_values(text: str, column: int | None = None, source: str = "<data>") -> list:
    """Parse one value per line (or CSV column ``column``, 1-based)."""
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if column is not None:
            cells = next(csv.reader([line]))
            if len(cells) < column:
                raise DataFileError(f"{source}: line {lineno}: no column {column}")
            field = cells[column - 1].strip()
        else:
            field = line
        try:
            values.append(float(field))
        except ValueError:
            if column is not None and not values and lineno == _first_content_line(text):
                continue  # header row
            raise DataFileError(
                f"{source}: line {lineno}: cannot parse {field!r} as a number") from None
    return values


def _first_content_line(text: str) -> int:
    for i, line in enumerate(text.splitlines(), start=1):
        if line.split("#", 1)[0].strip():
            return i
    return 0


def load_dataset(name: str) -> list:
    if name not in DATASETS:
        raise DataFileError(f"unknown dataset {name!r}; available: {', '.join(DATASETS)}")
    text = resources.files("logsym").joinpath("data", f"{name}.txt").read_text("utf-8")
    return read_values(text, source=name)


def _load(args) -> list:
    if args.dataset:
        return load_dataset(args.dataset)
    if args.data is None:
        raise ConfigError("give a data file or --dataset")
    if args.data == "-":
        return read_values(sys.stdin.read(), args.column, "<stdin>")
    try:
        with open(args.data, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise DataFileError(f"{args.data}: {e.strerror}") from None
    return read_values(text, args.column, args.data)


def _positive(s):
    v = float(s)
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"expected a positive real, got {s}")
    return v


def _beta(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"beta must be >= 1, got {s}")
    return v


def _unit(s):
    v = float(s)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"expected a value in (0, 1), got {s}")
    return v


def _data_args(p):
    p.add_argument("data", nargs="?", help="data file, one value per line ('-' for stdin)")
    p.add_argument("--dataset", choices=DATASETS, help="use a bundled dataset instead")
    p.add_argument("--column", type=int, help="read column K (1-based) of a CSV file")
    p.add_argument("--beta", type=_beta, default=1)
    p.add_argument("--theta", type=_positive, default=1.0)


def cmd_test(args, out) -> int:
    x = validate_sample(_load(args))
    fit = None
    theta = args.theta
    if args.transform == "lognormal":
        fit = fit_lognormal(x)
        fit = LogNormalFit(args.mu if args.mu is not None else fit.mu_hat,
                           args.sigma if args.sigma is not None else fit.sigma_hat)
        x = transform_unit_symmetry(x, fit)
        theta = 1.0
    cfg = KernelConfig(args.beta, theta)
    runner = normal_test if args.method == "normal" else jel_test
    res = runner(x, cfg, args.alpha)
    report = res.to_dict()
    if fit is not None:
        report["transform"] = "lognormal"
        report["mu_hat"] = fit.mu_hat
        report["sigma_hat"] = fit.sigma_hat
    report["decision"] = "reject" if res.reject else "fail to reject"
    if args.json:
        out.write(json.dumps(report, sort_keys=True) + "\n")
        return 0
    lines = [f"n            {res.n}", f"beta         {res.beta}"]
    if fit is not None:
        lines += [f"mu_hat       {fit.mu_hat:.10g}", f"sigma_hat    {fit.sigma_hat:.10g}",
                  "theta        1 (after transform)"]
    else:
        lines.append(f"theta        {res.theta:.10g}")
    lines.append(f"delta_hat    {res.delta_hat:.10g}")
    if res.method == "jel":
        lines += [f"lambda       {res.lam:.10g}", f"-2 log R     {res.statistic:.10g}"]
    else:
        lines.append(f"z statistic  {res.statistic:.10g}")
    lines += [f"threshold    {res.threshold:.10g}  (alpha = {res.alpha:g})",
              f"decision     {report['decision']}"]
    out.write("\n".join(lines) + "\n")
    return 0


def cmd_ustat(args, out) -> int:
    x = validate_sample(_load(args))
    cfg = KernelConfig(args.beta, args.theta)
    if args.naive:
        if x.n > NAIVE_MAX_N:
            raise ConfigError(
                f"--naive enumerates C(n, beta+1) subsets; refusing n = {x.n} > {NAIVE_MAX_N}")
        d = ustat_naive(x, cfg).delta_hat
    else:
        d = ustat_fast(x, cfg).delta_hat
    out.write(f"{d!r}\n")
    if args.jackknife:
        for v in leave_one_out(x, cfg):
            out.write(f"{float(v)!r}\n")
    return 0


_FAMILY_FLAGS = {
    "lognormal": ("mu", "sigma"),
    "loglogistic": ("scale", "shape"),
    "loglaplace": ("mu", "b"),
    "logcauchy": ("mu", "gamma"),
    "birnbaumsaunders": ("bs_alpha", "scale"),
    "weibull": ("shape", "scale"),
    "gamma": ("shape", "scale"),
    "pareto": ("shape", "scale"),
    "halfnormal": ("sigma",),
}

_SIM_DEFAULTS = {
    "mode": None, "family": None, "n": [25, 50, 75, 100, 200], "beta": [1],
    "reps": 10_000, "alpha": 0.05, "seed": 0, "theta_policy": None, "theta": None,
    "workers": 1, "out": None,
    "mu": None, "sigma": None, "scale": None, "shape": None, "b": None,
    "gamma": None, "bs_alpha": None,
}


def _apply_config_file(args):
    cp = configparser.ConfigParser()
    try:
        with open(args.config, encoding="utf-8") as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as e:
        raise ConfigError(f"{args.config}: {e}") from None
    if not cp.has_section("simulate"):
        raise ConfigError(f"{args.config}: missing [simulate] section")
    for key, raw in cp.items("simulate"):
        key = key.replace("-", "_")
        if key not in _SIM_DEFAULTS:
            raise ConfigError(f"{args.config}: unknown key {key!r}")
        if getattr(args, key) is not None:
            continue  # command line wins
        if key in ("n", "beta"):
            val = [int(t) for t in raw.replace(",", " ").split()]
        elif key in ("reps", "seed", "workers"):
            val = int(raw)
        elif key in ("mode", "family", "theta_policy", "out"):
            val = raw.strip()
        else:
            val = float(raw)
        setattr(args, key, val)


def build_sim_config(args) -> SimConfig:
    if args.config:
        _apply_config_file(args)
    for k, v in _SIM_DEFAULTS.items():
        if getattr(args, k) is None:
            setattr(args, k, v)
    if args.mode not in ("type1", "power"):
        raise ConfigError("--mode must be type1 or power")
    if not args.family:
        raise ConfigError("--family is required")
    fam = args.family.lower().replace("-", "").replace("_", "")
    if fam not in _FAMILY_FLAGS:
        raise ConfigError(f"unknown family {args.family!r}; choose from {sorted(_FAMILY_FLAGS)}")
    params = {}
    for flag in _FAMILY_FLAGS[fam]:
        v = getattr(args, flag)
        if v is not None:
            params["alpha" if flag == "bs_alpha" else flag] = v
    try:
        spec = make_spec(fam, **params)
    except InvalidParameter as e:
        raise ConfigError(str(e)) from None
    policy = None
    if args.theta_policy == "fixed" or (args.theta_policy is None and args.theta is not None):
        policy = ThetaPolicy.fixed(args.theta if args.theta is not None else 1.0)
    elif args.theta_policy == "lognormal_known_mu":
        policy = ThetaPolicy.lognormal_known_mu(args.mu if args.mu is not None else 0.0)
    elif args.theta_policy in ("transform", "transform_estimated"):
        policy = ThetaPolicy.transform_estimated()
    elif args.theta_policy is not None:
        raise ConfigError(f"unknown theta policy {args.theta_policy!r}")
    return SimConfig(spec, args.n, args.beta, args.reps, args.alpha, args.seed, policy)


def cmd_simulate(args, out) -> int:
    cfg = build_sim_config(args)
    runner = run_type1 if args.mode == "type1" else run_power
    result = runner(cfg, workers=args.workers)
    if args.out:
        emit_csv(result, args.out)
        summary = sys.stderr if out is sys.stdout else out
    else:
        emit_csv(result, out)
        summary = sys.stderr
    for r in result.sorted_rows():
        summary.write(f"{r.family}({r.params}) n={r.n} beta={r.beta}: "
                      f"rejection rate {r.rejection_rate:.4f} over {r.reps} reps\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logsym",
                                description="Jackknife empirical likelihood test of log-symmetry.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="run the log-symmetry test on a data file")
    _data_args(t)
    t.add_argument("--alpha", type=_unit, default=0.05)
    t.add_argument("--transform", choices=("lognormal",))
    t.add_argument("--mu", type=float, help="override the fitted log-scale mean")
    t.add_argument("--sigma", type=_positive, help="override the fitted log-scale sd")
    t.add_argument("--method", choices=("jel", "normal"), default="jel")
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_test)

    u = sub.add_parser("ustat", help="print the departure statistic")
    _data_args(u)
    u.add_argument("--jackknife", action="store_true",
                   help="also print the leave-one-out values")
    u.add_argument("--naive", action="store_true",
                   help=f"enumerate all subsets (n <= {NAIVE_MAX_N})")
    u.set_defaults(func=cmd_ustat)

    s = sub.add_parser("simulate", help="Monte Carlo size/power study, CSV output")
    s.add_argument("--config", help="INI file with a [simulate] section")
    s.add_argument("--mode", choices=("type1", "power"))
    s.add_argument("--family")
    s.add_argument("--n", type=int, nargs="+")
    s.add_argument("--beta", type=_beta, nargs="+")
    s.add_argument("--reps", type=int)
    s.add_argument("--alpha", type=_unit)
    s.add_argument("--seed", type=int)
    s.add_argument("--theta-policy",
                   choices=("fixed", "lognormal_known_mu", "transform_estimated"))
    s.add_argument("--theta", type=_positive)
    s.add_argument("--workers", type=int, help="processes; 0 = one per CPU")
    s.add_argument("--out", help="CSV path (default: stdout)")
    for name in ("mu", "sigma", "scale", "shape", "b", "gamma"):
        s.add_argument(f"--{name}", type=float)
    s.add_argument("--bs-alpha", type=float, help="Birnbaum-Saunders shape")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (ConfigError, argparse.ArgumentTypeError) as e:
        sys.stderr.write(f"logsym {args.command}: error: {e}\n")
        return 2
    except LogSymError as e:
        sys.stderr.write(f"logsym {args.command}: error: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

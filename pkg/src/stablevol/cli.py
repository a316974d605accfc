"""Command-line front end: simulate data, filter it, or run a full study.

Exit codes: 0 on success, 2 on configuration/validation errors, 3 on
numerical failures.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .experiment import (
    GridCell,
    StudySpec,
    benchmark_cells,
    load_model_config,
    read_data_csv,
    run_study,
    simulate,
    write_boxplot_csv,
    write_data_csv,
    write_filtered_csv,
    write_summary_csv,
)
from .filters import DegenerateCloudError, FilterConfig, abc_apf_run, abc_smc_run
from .kernels import KernelSpec
from .proposals import ProposalSpec, SeriesConvergenceError
from .stable import QuadratureError

_NUMERICAL_ERRORS = (QuadratureError, SeriesConvergenceError, DegenerateCloudError)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stablevol",
        description="ABC particle filtering for stable-noise stochastic volatility",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="simulate a model trajectory to CSV")
    sim.add_argument("--config", required=True, help="model-parameter JSON file")
    sim.add_argument("--horizon", type=int, required=True, metavar="T")
    sim.add_argument("--seed", type=int, required=True, metavar="S")
    sim.add_argument("--out", required=True, help="output data CSV (t,y,h_true)")

    filt = sub.add_parser("filter", help="run one filter over a data CSV")
    filt.add_argument("--algo", choices=["abc-apf", "abc-smc"], required=True)
    filt.add_argument(
        "--proposal",
        choices=["central-t", "shifted-t", "noncentral-t"],
        default="shifted-t",
    )
    filt.add_argument("--kernel", choices=["gaussian", "uniform"], default="gaussian")
    filt.add_argument("--eps", type=float, default=None, metavar="E")
    filt.add_argument("--smc-percentile", type=float, default=0.25, metavar="P")
    filt.add_argument("--particles", type=int, default=5000, metavar="N")
    filt.add_argument(
        "--resample",
        default="every",
        metavar="{every|ess:N0}",
        help="resampling policy: 'every' or 'ess:N0'",
    )
    filt.add_argument("--scheme", choices=["multinomial", "systematic"], default="multinomial")
    filt.add_argument("--config", required=True, help="model-parameter JSON file")
    filt.add_argument("--data", required=True, help="input data CSV")
    filt.add_argument("--seed", type=int, required=True, metavar="S")
    filt.add_argument("--out", required=True, help="output CSV (t,h_est,ess)")

    exp = sub.add_parser("experiment", help="run the benchmark study grid")
    exp.add_argument("--config", required=True, help="model-parameter JSON file")
    exp.add_argument("--replicates", type=int, required=True, metavar="R")
    exp.add_argument("--seed", type=int, required=True, metavar="S")
    exp.add_argument("--out", required=True, help="summary CSV path")
    exp.add_argument("--boxplot-out", default=None, help="optional long-format CSV path")
    exp.add_argument("--horizon", type=int, default=500, metavar="T")
    exp.add_argument("--particles", type=int, default=5000, metavar="N")
    return parser


def _parse_policy(text: str):
    if text == "every":
        return "every_step", None
    if text.startswith("ess:"):
        try:
            return "ess_threshold", float(text[4:])
        except ValueError as exc:
            raise ValueError(f"bad resample threshold in {text!r}") from exc
    raise ValueError(f"--resample must be 'every' or 'ess:N0', got {text!r}")


def _filter_config(args) -> FilterConfig:
    policy, threshold = _parse_policy(args.resample)
    if args.algo == "abc-apf":
        if args.eps is None:
            raise ValueError("abc-apf requires --eps")
        kernel = KernelSpec(args.kernel, args.eps)
    else:
        kernel = KernelSpec("uniform", None)
    return FilterConfig(
        n_particles=args.particles,
        kernel=kernel,
        proposal=ProposalSpec(args.proposal.replace("-", "_")),
        resample_policy=policy,
        resample_threshold=threshold,
        smc_percentile=args.smc_percentile,
        resample_scheme=args.scheme,
    )


def _cmd_simulate(args) -> int:
    model = load_model_config(args.config)
    traj = simulate(model, args.horizon, args.seed)
    write_data_csv(args.out, traj)
    return EXIT_OK


def _cmd_filter(args) -> int:
    model = load_model_config(args.config)
    config = _filter_config(args)
    traj = read_data_csv(args.data)
    rng = np.random.default_rng(args.seed)
    if args.algo == "abc-apf":
        output = abc_apf_run(traj.y, model, config, rng)
    else:
        output = abc_smc_run(traj.y, model, config, rng)
    write_filtered_csv(args.out, output)
    return EXIT_OK


def _cmd_experiment(args) -> int:
    model = load_model_config(args.config)
    if args.replicates < 1:
        raise ValueError(f"--replicates must be >= 1, got {args.replicates}")
    spec = StudySpec(
        model=model,
        horizon=args.horizon,
        cells=benchmark_cells(n_particles=args.particles),
        replicates=args.replicates,
        base_seed=args.seed,
    )
    result = run_study(spec)
    write_summary_csv(args.out, result)
    if args.boxplot_out:
        write_boxplot_csv(args.boxplot_out, result)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "filter": _cmd_filter,
        "experiment": _cmd_experiment,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main_entry() -> None:
    sys.exit(main())

"""Command-line interface for the experiment harness.

One subcommand per canned experiment; flags override values from an optional
key=value config file.  Exit code 0 means every internal certificate passed
(solver residuals, quadrature stabilization, failed-trial budget).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .harness import (ExperimentConfig, config_from_mapping, load_config_file,
                      report_path, run_experiment)
from .polyroots import SolveError

_COMMANDS = {
    "extremes": "extremes",
    "limit-cdf": "limit_compare",
    "gaf-moduli": "gaf_moduli",
    "intensity": "intensity",
    "stability": "stability",
    "figure1": "figure1",
    "figure2": "figure2",
    "coulomb-check": "coulomb_check",
    "tail": "tail",
}

_HELP = {
    "extremes": "sample (x1, xn) per trial and write the extremal CSV",
    "limit-cdf": "tabulate the limiting CDF/density of the smallest root modulus",
    "gaf-moduli": "sample the limiting in-disk moduli law directly",
    "intensity": "in-disk zero snapshots and radial intensity vs the kernel prediction",
    "stability": "in-disk zero stability across degrees on a shared stream",
    "figure1": "smallest-root histograms for exponential vs radial coefficients",
    "figure2": "smallest-root histogram vs the limiting density (complex Gaussian)",
    "coulomb-check": "analytic and invariance checks of the joint log-density",
    "tail": "extremes run plus Hill/tail diagnostics",
}

# lighter defaults for the checks that do not need big ensembles
_COMMAND_DEFAULTS = {
    "coulomb-check": {"n": "50", "trials": "20"},
    "stability": {"trials": "100", "rho": "0.8"},
    "limit-cdf": {"bins": "200"},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kacroots",
        description="Monte Carlo laboratory for extremal roots of random polynomials",
    )
    parser.add_argument("--version", action="version", version=f"kacroots {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name, help=_HELP[name])
        p.add_argument("--model", help="coefficient law, e.g. complex_gaussian or "
                                       "uniform_annulus:r_in=1,r_out=2")
        p.add_argument("--n", type=int, help="polynomial degree")
        p.add_argument("--trials", type=int, help="number of Monte Carlo trials")
        p.add_argument("--seed", type=int, help="64-bit master seed")
        p.add_argument("--rho", type=float, help="disk radius in (0,1)")
        p.add_argument("--out", help="output data path (CSV, or text table for stability)")
        p.add_argument("--workers", type=int, help="parallel worker processes")
        p.add_argument("--bins", type=int, help="histogram bins / grid points")
        p.add_argument("--degrees", help="comma-separated degrees for stability")
        p.add_argument("--config", help="key=value config file (flags override)")
    return parser


def _merge_config(args: argparse.Namespace) -> ExperimentConfig:
    kind = _COMMANDS[args.command]
    mapping: dict = dict(_COMMAND_DEFAULTS.get(args.command, {}))
    if args.config:
        mapping.update(load_config_file(args.config))
    for key in ("model", "n", "trials", "seed", "rho", "out", "workers", "bins", "degrees"):
        val = getattr(args, key)
        if val is not None:
            mapping[key] = val
    return config_from_mapping(kind, mapping)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _merge_config(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        report = run_experiment(config)
    except (SolveError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {', '.join(report.data_files)}")
    print(f"report: {report_path(config)}")
    for key, val in report.results.items():
        if isinstance(val, (int, float, bool, str)):
            print(f"  {key} = {val}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

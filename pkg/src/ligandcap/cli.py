"""``ligandcap`` command line: capacities, bounds, sweeps and the oracle checks.

Exit status is 0 on success, 1 for bad arguments, configuration or I/O
errors, and 2 when a solver did not reach its tolerance.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import warnings
from dataclasses import replace

from .bounds import BoundInputs, asymptotic_capacity, kl_upper_bound, lower_bound
from .model import BlockingParams, ConfigurationError, LigandParams, ScenarioConfig
from .scenarios import ResourceBudgetError, run_sweep, ts_blocking_capacity, ts_capacity
from .solver import InfeasibleBudgetError, SolverOptions
from .tables import PRESETS, format_csv, preset, read_spec_file, write_csv
from .validation import run_checks

__all__ = ["main", "dispatch", "build_parser"]

EXIT_OK, EXIT_ERROR, EXIT_NOT_CONVERGED = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for non-convergence here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _positive(kind):
    def parse(text):
        value = kind(text)
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value

    parse.__name__ = kind.__name__
    return parse


def _nonnegative(text):
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return value


def _common(p: argparse.ArgumentParser, *, solver=True):
    p.add_argument("--n", type=_positive(int), default=16, help="bacteria (default 16)")
    p.add_argument("--N", type=_positive(int), default=5, help="receptors per bacterium (default 5)")
    p.add_argument("--gamma", type=_positive(float), default=0.0004, help="association rate")
    p.add_argument("--kappa", type=_positive(float), default=0.1, help="dissociation rate")
    p.add_argument("--As", type=_nonnegative, default=80.0, help="peak concentration")
    p.add_argument("--Ane", type=_nonnegative, default=0.0, help="background concentration")
    p.add_argument("--units", choices=("nats", "bits"), default="nats")
    if solver:
        p.add_argument("--tol", type=_positive(float), default=1e-7, help="certificate gap to stop at")
        p.add_argument("--max-iter", type=_positive(int), default=50_000)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ligandcap", description=__doc__.splitlines()[0], allow_abbrev=False)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    cap = sub.add_parser("capacity", help="level (m=1) or type (m>1) capacity", allow_abbrev=False)
    _common(cap)
    cap.add_argument("--m", type=_positive(int), default=1, help="molecule types / colonies")
    cap.add_argument("--alpha", type=_nonnegative, default=None, help="average budget (default A_s)")
    cap.add_argument("--grid-points", type=_positive(int), default=201)

    blk = sub.add_parser("blocking", help="type capacity with receptor blocking", allow_abbrev=False)
    _common(blk)
    blk.add_argument("--m", type=_positive(int), default=2)
    blk.add_argument("--alpha", type=_nonnegative, default=None, help="total average budget (default A_s/2)")
    blk.add_argument("--gamma-block", type=_nonnegative, default=0.0005)
    blk.add_argument("--kappa-block", type=_positive(float), default=0.01)
    blk.add_argument("--grid-points", type=_positive(int), default=41, help="grid points per colony")
    blk.add_argument("--full-peak", action="store_true", help="each colony input may reach A_s")

    bnd = sub.add_parser("bound", help="closed-form bounds", allow_abbrev=False)
    bnd.add_argument("which", choices=("upper", "lower", "asymptotic"))
    _common(bnd, solver=False)
    bnd.add_argument("--alpha", type=_nonnegative, default=None, help="average budget (default A_s/2)")

    swp = sub.add_parser("sweep", help="figure-style parameter sweep to CSV", allow_abbrev=False)
    src = swp.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=tuple(PRESETS))
    src.add_argument("--spec", metavar="FILE", help="key = value sweep description")
    swp.add_argument("--output", "-o", default="-", help="CSV path, '-' for stdout")
    swp.add_argument("--units", choices=("nats", "bits"), default="nats")
    swp.add_argument("--workers", type=_positive(int), default=1)
    swp.add_argument("--tol", type=_positive(float), default=None)
    swp.add_argument("--max-iter", type=_positive(int), default=None)

    sub.add_parser("validate", help="run the closed-form oracle checks", allow_abbrev=False)
    return parser


def _scale(units: str) -> float:
    return math.log(2) if units == "bits" else 1.0


def _show(value: float, units: str) -> str:
    return f"{value / _scale(units):.6g} {units}"


def _options(args) -> SolverOptions:
    return SolverOptions(tolerance=args.tol, max_iterations=args.max_iter)


def _report(result, units: str) -> int:
    print(_show(result.capacity, units))
    print(
        f"gap {result.gap / _scale(units):.3g} {units}, mean cost {_fmt_cost(result.mean_cost)}, "
        f"{result.iterations} iterations"
    )
    if not result.converged:
        print("solver did not converge", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _fmt_cost(mean) -> str:
    try:
        return f"{float(mean):.6g}"
    except TypeError:
        return "(" + ", ".join(f"{v:.6g}" for v in mean) + ")"


def _capacity(args) -> int:
    alpha = args.As if args.alpha is None else args.alpha
    config = ScenarioConfig(n=args.n, N=args.N, m=args.m, A_s=args.As, alpha=alpha, A_ne=args.Ane)
    result = ts_capacity(config, LigandParams(args.gamma, args.kappa), _options(args), args.grid_points)
    return _report(result, args.units)


def _blocking(args) -> int:
    alpha = args.As / 2 if args.alpha is None else args.alpha
    config = ScenarioConfig(n=args.n, N=args.N, m=args.m, A_s=args.As, alpha=alpha, A_ne=args.Ane)
    params = BlockingParams(args.gamma, args.kappa, args.gamma_block, args.kappa_block)
    result = ts_blocking_capacity(config, params, _options(args), args.grid_points, full_peak=args.full_peak)
    return _report(result, args.units)


def _bound(args) -> int:
    params = LigandParams(args.gamma, args.kappa)
    R = args.n * args.N
    if args.which == "asymptotic":
        # the large-trials formula counts trials, here --n; N is not used
        value = asymptotic_capacity(args.n)
    elif args.which == "lower":
        value = lower_bound(args.As, R, params)[0]
    else:
        alpha = args.As / 2 if args.alpha is None else args.alpha
        value = kl_upper_bound(BoundInputs(R, args.As, alpha, args.Ane, params))
    print(_show(value, args.units))
    return EXIT_OK


def _sweep(args) -> int:
    if args.preset:
        spec = preset(args.preset, workers=args.workers)
    else:
        spec = read_spec_file(args.spec, workers=args.workers)
    if args.tol is not None or args.max_iter is not None:
        solver = replace(
            spec.solver,
            tolerance=args.tol or spec.solver.tolerance,
            max_iterations=args.max_iter or spec.solver.max_iterations,
        )
        spec = replace(spec, solver=solver)
    records = run_sweep(spec)
    if args.output == "-":
        sys.stdout.write(format_csv(records, args.units))
    else:
        write_csv(records, args.output, args.units)
    failed = [r for r in records if r.error]
    for r in failed:
        print(f"{spec.varying}={r.parameter:g}: {r.error}", file=sys.stderr)
    if any(not r.converged for r in records):
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _validate(args) -> int:
    checks = run_checks()
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_ERROR


_COMMANDS = {"capacity": _capacity, "blocking": _blocking, "bound": _bound, "sweep": _sweep, "validate": _validate}


def dispatch(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        with warnings.catch_warnings():
            if not args.verbose:
                warnings.simplefilter("ignore")
            return _COMMANDS[args.command](args)
    except (ConfigurationError, InfeasibleBudgetError, ResourceBudgetError, ValueError, OSError) as exc:
        print(f"ligandcap: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(dispatch())

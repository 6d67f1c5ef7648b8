"""
Main entry point for symineq.

symineq evaluates symmetric-polynomial functionals and verifies their
inequalities by seeded random trials:
- Evaluate a single functional
- Run the vector or matrix verification suites
- Search for counterexamples outside the proven exponent ranges
- Cross-check h_k against its Monte Carlo representation

Usage:
  symineq eval --fn NAME --x 1,2,3 [--y ...] [--k K] [--l L] [--p P]
  symineq verify --suite all [--trials N] [--seed S]
  symineq search --checker ID --p P [--budget B]
  symineq matrix --check muir|mariet|ekmtx [--dim 2,3,4,6]
  symineq mc --x 1,2,3 --k 3 [--samples M]
"""

import argparse
import json
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Callable, Optional

from symineq import funcs, mc, parsum, report, spectral, sympoly, verify
from symineq.config import (
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    DEFAULT_TRIALS,
    LOG_FILE,
    LOG_LEVEL,
    MATRIX_TOLERANCE,
    MC_DEFAULT_SAMPLES,
    MC_MAX_K,
    get_thread_count,
)
from symineq.sympoly import DomainError

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_EXHAUSTED = 3

MC_Z_LIMIT = 5.0

logger = logging.getLogger(__name__)


class UsageError(Exception):
    """Bad command-line input; reported with exit code 2."""


def setup_logging():
    """Configure logging for the application."""
    LOG_FILE.parent.mkdir(parents=True, exist_ok=True)

    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.FileHandler(LOG_FILE),
        ],
    )


def print_header(command: str, detail: str = None):
    """Print command header."""
    print()
    print("=" * 80)
    if detail:
        print(f"  SYMINEQ - {command} | {detail}")
    else:
        print(f"  SYMINEQ - {command}")
    print("=" * 80)
    print()
    print(f"  Started: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    print()
    print("-" * 80)


def print_footer():
    """Print command footer."""
    print("-" * 80)
    print(f"  Completed: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    print("=" * 80)
    print()


def fmt(value: float) -> str:
    """Shortest-safe decimal rendering used for every printed number."""
    return format(value, ".17g")


# =============================================================================
# Argument parsing
# =============================================================================


def parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def parse_ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def parse_range(text: str) -> tuple[int, int]:
    """'2..8' -> (2, 8); a single integer means lo == hi."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None


def parse_distribution(text: str) -> verify.EntryDistribution:
    try:
        return verify.EntryDistribution.parse(text)
    except verify.ConfigError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.fn} requires {', '.join(missing)}")


def _scalar(values: list[float], name: str) -> float:
    if len(values) != 1:
        raise UsageError(f"--{name} must be a single number for this function")
    return values[0]


EVAL_FUNCTIONS: dict[str, tuple[tuple[str, ...], Callable[[argparse.Namespace], float]]] = {
    "ek": (("k",), lambda a: sympoly.elem_sym(a.x, a.k)),
    "hk": (("k",), lambda a: sympoly.complete_hom(a.x, a.k)),
    "ekbrute": (("k",), lambda a: sympoly.brute_elem_sym(a.x, a.k)),
    "hkbrute": (("k",), lambda a: sympoly.brute_complete_hom(a.x, a.k)),
    "phi": (("k", "p"), lambda a: funcs.phi(a.x, a.k, a.p)),
    "bigphi": (("k", "l", "p"), lambda a: funcs.big_phi(a.x, a.k, a.l, a.p)),
    "elemroot": (("k", "p"), lambda a: funcs.elem_root(a.x, a.k, a.p)),
    "homroot": (("k", "p"), lambda a: funcs.hom_root(a.x, a.k, a.p)),
    "homratio": (("k", "p"), lambda a: funcs.hom_ratio(a.x, a.k, a.p)),
    "recipek": (("k", "p"), lambda a: funcs.recip_elem(a.x, a.k, a.p)),
    "psi": (("k",), lambda a: parsum.anderson_psi(a.x, a.k)),
    "psirec": (("k",), lambda a: parsum.anderson_psi_recursive(a.x, a.k)),
    "parsum": (("y",), lambda a: parsum.par_sum(_scalar(a.x, "x"), _scalar(a.y, "y"))),
    "ppsum": (("y", "p"), lambda a: parsum.p_par_sum(_scalar(a.x, "x"), _scalar(a.y, "y"), a.p)),
    "multippsum": (("p",), lambda a: parsum.multi_p_par_sum(a.x, a.p)),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symineq", description="Symmetric-polynomial inequality verifier")
    sub = parser.add_subparsers(dest="command")

    p_eval = sub.add_parser("eval", help="evaluate one functional")
    p_eval.add_argument("--fn", required=True, choices=sorted(EVAL_FUNCTIONS))
    p_eval.add_argument("--x", type=parse_floats, required=True)
    p_eval.add_argument("--y", type=parse_floats)
    p_eval.add_argument("--k", type=int)
    p_eval.add_argument("--l", type=int)
    p_eval.add_argument("--p", type=float)

    p_verify = sub.add_parser("verify", help="run the vector verification suite")
    p_verify.add_argument("--suite", default="all", help="'all' or comma-separated checker ids")
    p_verify.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p_verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_verify.add_argument("--n", type=parse_range, default=None, help="n range LO..HI")
    p_verify.add_argument("--p-grid", type=parse_floats, default=None, help="use --p-grid=-0.9,-0.5 for negatives")
    p_verify.add_argument("--k", type=int, help="fixed k (default: random per trial)")
    p_verify.add_argument("--k-policy", choices=["random", "all"], default="random")
    p_verify.add_argument("--l", type=int, help="fixed l for big-phi")
    p_verify.add_argument("--dist", type=parse_distribution, default=None, help="log-uniform:LO:HI or uniform:LO:HI")
    p_verify.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE)
    p_verify.add_argument("--headline", action="store_true", help="read --p-grid of h_k checkers as q = 1/p")
    p_verify.add_argument("--out", type=Path)
    p_verify.add_argument("--csv", type=Path)

    p_search = sub.add_parser("search", help="search for a counterexample outside the proven range")
    p_search.add_argument("--checker", required=True)
    p_search.add_argument("--p", type=float, required=True)
    p_search.add_argument("--n", type=int, default=2)
    p_search.add_argument("--k", type=int)
    p_search.add_argument("--l", type=int)
    p_search.add_argument("--budget", type=int, default=1000)
    p_search.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_search.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE)
    p_search.add_argument("--dist", type=parse_distribution, default=None)
    p_search.add_argument("--out", type=Path)

    p_matrix = sub.add_parser("matrix", help="run a matrix verification suite")
    p_matrix.add_argument("--check", required=True, choices=spectral.MATRIX_CHECKS)
    p_matrix.add_argument("--dim", type=parse_ints, default=[2, 3, 4, 6])
    p_matrix.add_argument("--k", type=int)
    p_matrix.add_argument("--p", type=parse_floats, default=None)
    p_matrix.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p_matrix.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_matrix.add_argument("--tol", type=float, default=MATRIX_TOLERANCE)
    p_matrix.add_argument("--out", type=Path)
    p_matrix.add_argument("--csv", type=Path)

    p_mc = sub.add_parser("mc", help="Monte Carlo cross-check of h_k")
    p_mc.add_argument("--x", type=parse_floats, required=True)
    p_mc.add_argument("--k", type=int, required=True)
    p_mc.add_argument("--samples", type=int, default=MC_DEFAULT_SAMPLES)
    p_mc.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_mc.add_argument("--out", type=Path)

    sub.add_parser("help", help="show usage")
    return parser


# =============================================================================
# Commands
# =============================================================================


def cmd_eval(args: argparse.Namespace) -> int:
    """Evaluate one functional and print it with 17 significant digits."""
    required, fn = EVAL_FUNCTIONS[args.fn]
    _require(args, *required)
    print(fmt(fn(args)))
    return EXIT_OK


def _print_summary(summary: verify.SuiteSummary) -> None:
    print(f"  {'Checker':<24} {'Trials':>8} {'Passed':>8} {'Worst margin':>26}")
    print("  " + "-" * 70)
    for key, stats in summary.checkers.items():
        print(f"  {key:<24} {stats.trials:>8} {stats.passes:>8} {fmt(stats.worst_margin):>26}")
    print()
    print(f"  Violations: {summary.violation_count}")


def _finish_suite(command: str, config: dict, summary: verify.SuiteSummary, args: argparse.Namespace) -> int:
    data = report.build_report(command, config, summary)
    path = report.save_report(data, command, output_path=args.out)
    print(f"  Report: {path}")
    if args.csv:
        report.save_csv(summary.violations, args.csv)
        print(f"  CSV: {args.csv}")
    print_footer()
    return EXIT_OK if summary.violation_count == 0 else EXIT_VIOLATIONS


def cmd_verify(args: argparse.Namespace) -> int:
    """Run the vector checkers and write the JSON report."""
    ids = list(verify.VECTOR_SUITE) if args.suite == "all" else [s.strip() for s in args.suite.split(",") if s.strip()]
    if args.k is not None:
        k_policy = verify.IndexPolicy.fixed(args.k)
    elif args.k_policy == "all":
        k_policy = verify.IndexPolicy(verify.PolicyMode.ALL_VALID)
    else:
        k_policy = verify.IndexPolicy()
    config = verify.TrialConfig(
        seed=args.seed,
        trials=args.trials,
        n_range=args.n or verify.DEFAULT_N_RANGE,
        k_policy=k_policy,
        l_policy=verify.IndexPolicy.fixed(args.l) if args.l is not None else verify.IndexPolicy(),
        p_grid=None if args.p_grid is None else tuple(args.p_grid),
        distribution=args.dist or verify.EntryDistribution(),
        tolerance=args.tol,
        headline=args.headline,
    )
    threads = get_thread_count()

    print_header("Verify", ", ".join(ids))
    summary = verify.run_suite(config, ids, threads=threads)
    _print_summary(summary)
    return _finish_suite("verify", {"suite": ids, **config.to_dict()}, summary, args)


def cmd_matrix(args: argparse.Namespace) -> int:
    """Run one matrix checker over the requested dimensions."""
    threads = get_thread_count()
    print_header("Matrix", args.check)
    summary = spectral.run_matrix_suite(
        args.check, args.dim, args.trials, args.seed, k=args.k, p_grid=args.p, tol=args.tol, threads=threads
    )
    _print_summary(summary)
    config = {
        "check": args.check,
        "dims": args.dim,
        "k": args.k,
        "p_grid": args.p,
        "trials": args.trials,
        "seed": args.seed,
        "tolerance": args.tol,
    }
    return _finish_suite("matrix", config, summary, args)


def _outcome_found(found: verify.InequalityReport) -> str:
    return f"FOUND(margin={fmt(found.margin)})"


def cmd_search(args: argparse.Namespace) -> int:
    """Search outside the proven range; exit 3 when the budget runs out."""
    if args.budget < 0:
        raise UsageError(f"--budget must be nonnegative, got {args.budget}")
    region = verify.SearchRegion(
        p=args.p, n=args.n, k=args.k, l=args.l, distribution=args.dist or verify.EntryDistribution()
    )
    found = verify.search_counterexample(args.checker, region, args.budget, args.seed, args.tol)
    config = {
        "checker": args.checker,
        "p": args.p,
        "n": args.n,
        "k": args.k,
        "l": args.l,
        "budget": args.budget,
        "seed": args.seed,
        "tolerance": args.tol,
    }
    violations = [] if found is None else [found]
    data = {
        "manifest": report.build_manifest(
            "search", config, "NOT_FOUND" if found is None else _outcome_found(found)
        ),
        "violations": [v.to_dict() for v in violations],
    }
    report.save_report(data, "search", output_path=args.out)
    if found is None:
        print(f"No counterexample within {args.budget} steps")
        return EXIT_EXHAUSTED
    print(json.dumps(found.to_dict(), indent=2))
    return EXIT_OK


def cmd_mc(args: argparse.Namespace) -> int:
    """Compare the Monte Carlo estimate of h_k with the exact recurrence."""
    if not 0 <= args.k <= MC_MAX_K:
        raise UsageError(f"--k must lie within [0, {MC_MAX_K}], got {args.k}")
    estimate = mc.estimate_hk(args.x, args.k, args.samples, args.seed, threads=get_thread_count())
    exact = sympoly.complete_hom(args.x, args.k)
    z = estimate.z_score(exact)
    print(f"estimate  {fmt(estimate.mean)}")
    print(f"std_error {fmt(estimate.std_error)}")
    print(f"exact     {fmt(exact)}")
    print(f"z         {fmt(z)}")
    passed = abs(z) <= MC_Z_LIMIT
    if args.out:
        config = {"x": args.x, "k": args.k, "samples": args.samples, "seed": args.seed}
        data = {
            "manifest": report.build_manifest("mc", config, "ALL_PASS" if passed else "VIOLATIONS(1)"),
            "estimate": {"mean": estimate.mean, "std_error": estimate.std_error, "exact": exact, "z": z},
        }
        report.save_report(data, "mc", output_path=args.out)
    return EXIT_OK if passed else EXIT_VIOLATIONS


def print_help():
    """Print usage help."""
    print("""
symineq - Symmetric-Polynomial Inequality Verifier

Usage:
  symineq eval --fn NAME --x 1,2,3 [--y 4] [--k K] [--l L] [--p P]
  symineq verify [--suite all|id,id] [--trials N] [--seed S] [--n 2..8] [--p-grid=P,P]
  symineq search --checker ID --p P [--n N] [--k K] [--budget B] [--seed S]
  symineq matrix --check muir|mariet|ekmtx [--dim 2,3,4,6] [--k K] [--p P,P]
  symineq mc --x 1,2,3 --k 3 [--samples M] [--seed S]

Examples:
  symineq eval --fn phi --x 1,2,3 --k 2 --p 1
  symineq verify --suite all --trials 1000 --seed 0
  symineq search --checker ek-root --k 1 --p 2.0 --budget 1000 --seed 0
  symineq matrix --check ekmtx --dim 4 --p=-0.5
  symineq mc --x 1,2,3 --k 3 --samples 1000000 --seed 0

Exit codes: 0 pass/found, 1 violations, 2 usage or domain error, 3 search exhausted
Environment: SYMINEQ_THREADS caps the worker threads (default 1)
""")


COMMANDS = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "search": cmd_search,
    "matrix": cmd_matrix,
    "mc": cmd_mc,
}


def run(argv: Optional[list[str]] = None) -> int:
    """Parse argv and run the command; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    if args.command in (None, "help"):
        print_help()
        return EXIT_OK

    logger.info(f"Running {args.command}")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DomainError, verify.ConfigError, ValueError) as e:
        logger.error(f"{args.command} rejected: {e}")
        print(f"\n  Error: {e}\n", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.exception(f"Command failed: {e}")
        print(f"\n  Error: {e}\n", file=sys.stderr)
        return EXIT_USAGE


def main():
    """Main entry point."""
    setup_logging()
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line interface for evofss campaigns, single searches and reports."""

import argparse
import json
import logging
import sys
import traceback
from dataclasses import replace
from pathlib import Path
from typing import List, NoReturn, Optional

from .core.config import (
    Algorithm,
    DEParams,
    EngineConfig,
    ExperimentConfig,
    TAParams,
    benchmark_preset,
    load_experiment_config,
    validate_engine_config,
    validate_experiment_config,
)
from .core.errors import ConfigError, DataError
from .data.ingest import load_dataset, stratified_split
from .harness.experiment import run_experiment, speedup
from .harness.reports import load_results, write_report_tables, write_speedup_reports
from .search.engine import run_search

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


class Colors:
    """ANSI color codes for terminal output."""
    OKBLUE = '\033[94m'
    OKGREEN = '\033[92m'
    WARNING = '\033[93m'
    FAIL = '\033[91m'
    ENDC = '\033[0m'
    BOLD = '\033[1m'


def print_colored(message: str, color: str = Colors.ENDC) -> None:
    """Print colored message to terminal."""
    print(f"{color}{message}{Colors.ENDC}")


def print_status(message: str) -> None:
    """Print status message in blue."""
    print_colored(f"ℹ️  {message}", Colors.OKBLUE)


def print_success(message: str) -> None:
    """Print success message in green."""
    print_colored(f"✅ {message}", Colors.OKGREEN)


def print_warning(message: str) -> None:
    """Print warning message in yellow."""
    print_colored(f"⚠️  {message}", Colors.WARNING)


def print_error(message: str) -> None:
    """Print error message in red."""
    print_colored(f"❌ {message}", Colors.FAIL)


def exit_code_for(error: BaseException) -> int:
    """Map a failure onto the documented exit codes."""
    if isinstance(error, ConfigError):
        return EXIT_USAGE
    if isinstance(error, (DataError, FileNotFoundError)):
        return EXIT_DATA
    return EXIT_RUNTIME


def _fail(error: BaseException, args: argparse.Namespace, context: str) -> int:
    print_error(f"{context}: {error}")
    if getattr(args, "debug", False):
        traceback.print_exc()
    return exit_code_for(error)


def _load_config(path: str) -> Optional[ExperimentConfig]:
    """Load and validate a campaign config; prints problems and returns None on failure."""
    print_status(f"Loading config from {path}")
    try:
        config = load_experiment_config(path)
    except FileNotFoundError as e:
        print_error(str(e))
        return None
    except ConfigError as e:
        print_error(f"Config error: {e}")
        return None

    validation_errors = validate_experiment_config(config)
    if validation_errors:
        print_error("Config validation failed:")
        for error in validation_errors:
            print_error(f"  • {error}")
        return None

    print_success("Config loaded successfully")
    return config


def cmd_run(args) -> int:
    """Handle 'evofss run' command."""
    config = _load_config(args.config)
    if config is None:
        return EXIT_USAGE
    if args.output:
        config.output_dir = Path(args.output)

    try:
        labels = ", ".join(a.label for a in config.algorithms)
        print_status(f"Running {config.runs} runs of {labels} on {config.data_path}")
        run_experiment(config)
    except Exception as e:
        return _fail(e, args, "Campaign failed")

    print_success(f"Reports written to {config.output_dir}")
    summary = config.output_dir / "summary.txt"
    if summary.exists():
        print(summary.read_text(encoding="utf-8"), end="")
    return EXIT_OK


def _engine_from_args(args) -> EngineConfig:
    """Build the single-run EngineConfig; a preset supplies MF/CR/TMF not given explicitly."""
    algorithm = Algorithm.parse(args.algorithm)
    de, ta = DEParams(), TAParams()
    if args.preset:
        de, ta = benchmark_preset(args.preset, algorithm)

    de = replace(
        de,
        **{k: v for k, v in (("mf", args.mf), ("cr", args.cr)) if v is not None},
    )
    ta = replace(
        ta,
        **{k: v for k, v in (("tmf", args.tmf), ("t0", args.t0), ("cool", args.cool)) if v is not None},
    )
    return EngineConfig(
        algorithm=algorithm,
        de=de,
        ta=ta,
        n=args.pop,
        bias=args.bias,
        max_iter1=args.iters,
        max_iter2=args.ta_iters,
        islands=args.islands,
        parallelism=args.parallelism,
        master_seed=args.seed,
    )


def cmd_select(args) -> int:
    """Handle 'evofss select' command."""
    try:
        engine = _engine_from_args(args)
    except ConfigError as e:
        print_error(f"Config error: {e}")
        return EXIT_USAGE
    validation_errors = validate_engine_config(engine)
    if validation_errors:
        print_error("Invalid search parameters:")
        for error in validation_errors:
            print_error(f"  • {error}")
        return EXIT_USAGE

    try:
        print_status(f"Loading {args.format} data from {args.data}")
        dataset = load_dataset(
            args.data,
            data_format=args.format,
            label_column=args.label,
            header=not args.no_header,
            nfeat_hint=args.nfeat,
        )
        split = stratified_split(dataset, args.split_ratio, args.split_seed)
        print_status(
            f"Searching {dataset.nfeat} features with {engine.algorithm.label} "
            f"(n={engine.n}, iterations={engine.max_iter1}, parallelism={engine.parallelism})"
        )
        result = run_search(engine, split)
    except Exception as e:
        return _fail(e, args, "Search failed")

    best = result.best
    print_success(
        f"{engine.algorithm.label}: test AUC {best.test_auc.auc:.4f}, "
        f"train AUC {best.auc.auc:.4f}, {best.cardinality} features "
        f"({result.evaluations} evaluations)"
    )
    for name in best.selected_ids:
        print(f"  {name}")

    if args.out:
        payload = {
            "algorithm": engine.algorithm.value,
            "seed": engine.master_seed,
            "cardinality": best.cardinality,
            "selected_features": list(best.selected_ids),
            "test_auc": best.test_auc.auc,
            "train_auc": best.auc.auc,
            "evaluations": result.evaluations,
            "train_best_trace": result.train_best_trace,
        }
        try:
            Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        except OSError as e:
            return _fail(e, args, "Could not write selection")
        print_status(f"Selection written to {args.out}")
    return EXIT_OK


def cmd_speedup(args) -> int:
    """Handle 'evofss speedup' command."""
    config = _load_config(args.config)
    if config is None:
        return EXIT_USAGE
    if config.engine.parallelism == 1:
        print_warning("parallelism is 1 in this config; speedup will be about 1.00")

    try:
        reports = speedup(config)
        write_speedup_reports(reports, config.output_dir)
    except Exception as e:
        return _fail(e, args, "Speedup measurement failed")

    for algorithm, report in reports.items():
        print(
            f"  {algorithm.label:<8} sequential {report.sequential_seconds:9.2f}s  "
            f"parallel {report.parallel_seconds:9.2f}s  speedup {report.speedup:.2f}"
        )
    print_success(f"Speedup table written to {config.output_dir}")
    return EXIT_OK


def cmd_report(args) -> int:
    """Handle 'evofss report' command."""
    output_dir = Path(args.out or args.input)
    try:
        names, bests, speedups = load_results(args.input)
        output_dir.mkdir(parents=True, exist_ok=True)
        write_report_tables(names, bests, output_dir, speedups=speedups, ttest=not args.no_ttest)
    except Exception as e:
        return _fail(e, args, "Report failed")

    print((output_dir / "summary.txt").read_text(encoding="utf-8"), end="")
    print_success(f"Reports written to {output_dir}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        print_error(message)
        sys.exit(EXIT_USAGE)


def _configure_logging(args) -> None:
    if args.debug:
        level = logging.DEBUG
    elif args.verbose:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="evofss",
        description="evofss - parallel evolutionary wrapper feature subset selection",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Full campaign (20 runs of every algorithm by default)
  evofss run --config examples/configs/planted_campaign.py

  # Single PB-TADE search on a CSV file
  evofss select --data data.csv --format csv --label label --algorithm pbtade --out best.json

  # Sequential vs parallel wall time
  evofss speedup --config examples/configs/planted_campaign.py

  # Rebuild report tables from stored run records
  evofss report --in results
        """
    )

    parser.add_argument('--debug', action='store_true', help='Debug logging and tracebacks')
    parser.add_argument('--verbose', action='store_true', help='Log run progress')

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    run_parser = subparsers.add_parser('run', help='Run a full campaign')
    run_parser.add_argument('--config', required=True, help='Campaign config file (.py or flat .json)')
    run_parser.add_argument('--output', help='Override the config output directory')
    run_parser.set_defaults(func=cmd_run)

    select_parser = subparsers.add_parser('select', help='Run a single search')
    select_parser.add_argument('--data', required=True, help='Dataset path')
    select_parser.add_argument('--format', choices=['csv', 'libsvm'], default='csv')
    select_parser.add_argument('--label', default='label', help='CSV label column name or index')
    select_parser.add_argument('--no-header', action='store_true', help='CSV file has no header row')
    select_parser.add_argument('--nfeat', type=int, help='LIBSVM feature count hint')
    select_parser.add_argument('--algorithm', choices=[a.value for a in Algorithm], default='pbtade')
    select_parser.add_argument('--preset', help='Published dataset preset for MF/CR/TMF')
    select_parser.add_argument('--mf', type=float, help='DE mutation factor')
    select_parser.add_argument('--cr', type=float, help='DE crossover rate')
    select_parser.add_argument('--tmf', type=int, help='TA bits flipped per neighbour')
    select_parser.add_argument('--t0', type=float, help='Initial TA threshold')
    select_parser.add_argument('--cool', type=float, help='TA threshold decay factor')
    select_parser.add_argument('--pop', type=int, default=10, help='Population size')
    select_parser.add_argument('--iters', type=int, default=10, help='Outer iterations')
    select_parser.add_argument('--ta-iters', type=int, default=10, help='TA steps per outer iteration')
    select_parser.add_argument('--islands', type=int, default=1)
    select_parser.add_argument('--parallelism', type=int, default=1, help='Concurrent fitness evaluations')
    select_parser.add_argument('--seed', type=int, default=0)
    select_parser.add_argument('--bias', type=float, default=0.99, help='Initialization bias')
    select_parser.add_argument('--split-ratio', type=float, default=0.8)
    select_parser.add_argument('--split-seed', type=int, default=0)
    select_parser.add_argument('--out', help='Write the selection as JSON')
    select_parser.set_defaults(func=cmd_select)

    speedup_parser = subparsers.add_parser('speedup', help='Measure parallel speedup')
    speedup_parser.add_argument('--config', required=True, help='Campaign config file (.py or flat .json)')
    speedup_parser.set_defaults(func=cmd_speedup)

    report_parser = subparsers.add_parser('report', help='Rebuild reports from run records')
    report_parser.add_argument('--in', dest='input', required=True, help='Directory holding runs.json')
    report_parser.add_argument('--out', help='Output directory (defaults to --in)')
    report_parser.add_argument('--no-ttest', action='store_true', help='Skip paired t-tests')
    report_parser.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    _configure_logging(args)
    try:
        return args.func(args)
    except Exception as e:
        return _fail(e, args, "Command failed")


if __name__ == '__main__':
    sys.exit(main())

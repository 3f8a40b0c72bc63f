"""Command-line front end."""

import argparse
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any, TypeVar

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from .dataio import (
    env_defaults,
    gen_synthetic_annotated,
    load_annotations,
    load_dataset,
    load_params,
    load_scenario,
    load_settings,
    problem_from_settings,
    validate_annotations,
    write_annotations,
    write_dataset,
)
from .edmodel.kpis import extract_kpis
from .errors import ConfigurationError, DataValidationError, EmptySampleError
from .formatting import patient_count_table, solve_summary_table, validation_table
from .metrics.evaluation import check_reference
from .models.scenario import CalibrationSettings
from .services import CalibrationService, ReportService, SimulationService, patient_count_rows

console = Console()
logger = logging.getLogger(__name__)

T = TypeVar("T")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RUNTIME = 3
EXIT_INFEASIBLE = 4

INPUT_ERRORS = (ConfigurationError, DataValidationError, EmptySampleError, FileNotFoundError, ValidationError)


def setup_logging(level: str) -> None:
    """Route log records through rich on stderr."""
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.config)
    params = load_params(args.params)
    service = SimulationService(cfg, params, args.seed, jobs=args.jobs, trace=args.trace)
    outputs = service.run(args.reps)
    written = service.write(outputs, args.out)

    console.print(patient_count_table(patient_count_rows([o.patient_counts for o in outputs])))
    console.print(f"[green]Wrote {len(written)} files to {args.out}[/green]")
    return EXIT_OK


def cmd_gen_synthetic(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.config)
    params = load_params(args.params)
    dataset, annotations = gen_synthetic_annotated(params, cfg, args.seed, n_reps=args.reps)
    path = write_dataset(dataset, args.out)
    console.print(f"[green]Wrote {len(dataset)} records to {path}[/green]")
    if args.annotations:
        ann_path = write_annotations(annotations, args.annotations)
        console.print(f"[green]Wrote {len(annotations)} exam requests to {ann_path}[/green]")
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.config)
    dataset = load_dataset(args.dataset)
    settings = load_settings(args.settings, budget=args.budget, n_reps=args.reps)
    service = CalibrationService(cfg, dataset, settings, args.seed, jobs=args.jobs)

    annotations = load_annotations(args.annotations, dataset) if args.annotations else None
    start = service.starting_point(None if args.auto_start else load_params(args.params), annotations)

    console.print(
        f"[yellow]Calibrating {len(start)} parameters "
        f"(budget {settings.budget}, {settings.n_reps} reps)...[/yellow]",
    )
    run = service.calibrate(start)
    service.write(run, args.out)

    console.print(solve_summary_table(run.report, run.feasible))
    console.print(f"[green]Results written to {args.out}[/green]")
    if not run.feasible:
        console.print("[red]No feasible point found within the budget[/red]")
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.dataset)
    service = ReportService(args.sim_dir, dataset)
    written = service.build(args.out)
    console.print(f"[green]Wrote {len(written)} report tables to {args.out}[/green]")
    return EXIT_OK


def _attempt(checks: list[tuple[str, bool, str]], name: str, action: Callable[[], T]) -> T | None:
    try:
        result = action()
    except INPUT_ERRORS as e:
        checks.append((name, False, str(e).splitlines()[0]))
        return None
    checks.append((name, True, ""))
    return result


def cmd_validate(args: argparse.Namespace) -> int:
    checks: list[tuple[str, bool, str]] = []

    _attempt(checks, "scenario", lambda: load_scenario(args.config))
    params = _attempt(checks, "parameters", lambda: load_params(args.params))
    if params is not None:
        _, bounds, _ = problem_from_settings(CalibrationSettings())
        inside = bounds.contains(params)
        checks.append(("parameters within bounds", inside, "" if inside else "some entries will be clamped"))

    if args.dataset:
        dataset = _attempt(checks, "dataset", lambda: load_dataset(args.dataset))
        if dataset is not None:
            real = extract_kpis(dataset.records, mode="real")
            _attempt(checks, "non-empty KPI cells", lambda: check_reference(real))
            if args.annotations:
                _attempt(
                    checks,
                    "annotations",
                    lambda: validate_annotations(load_annotations(args.annotations), dataset),
                )

    console.print(validation_table(checks))
    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_INPUT


def build_parser(defaults: dict[str, Any]) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edcal",
        description="Calibrate emergency-department simulation service times against timestamp data",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  Simulate the bundled scenario at the reference parameters:
    edcal simulate --reps 30 --out out/sim

  Generate a synthetic dataset and calibrate against it:
    edcal gen-synthetic --seed 7 --out data/synthetic.csv --annotations data/requests.csv
    edcal calibrate --dataset data/synthetic.csv --auto-start --annotations data/requests.csv

  Compare a simulation run with a dataset:
    edcal report --sim-dir out/sim --dataset data/synthetic.csv --out out/report
""",
    )
    parser.add_argument(
        "--log-level",
        default=defaults["log_level"],
        help="Logging level (default: EDCAL_LOG_LEVEL or WARNING)",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Shortcut for --log-level INFO")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, params_help: str) -> None:
        p.add_argument("--config", type=Path, default=None, help="Scenario JSON (default: bundled case study)")
        p.add_argument("--params", type=Path, default=None, help=params_help)
        p.add_argument("--seed", type=int, default=defaults["seed"], help="Base seed (default: EDCAL_SEED or 12345)")

    p = sub.add_parser("simulate", help="Run replications and write KPI, census and count tables")
    common(p, "Parameter JSON (default: bundled reference parameters)")
    p.add_argument("--reps", type=int, default=30, help="Replications (default: 30)")
    p.add_argument("--jobs", type=int, default=defaults["jobs"], help="Worker processes (default: EDCAL_JOBS or 1)")
    p.add_argument("--out", type=Path, default=Path("out/sim"), help="Output directory")
    p.add_argument("--trace", action="store_true", help="Write and audit kernel event traces")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("gen-synthetic", help="Generate a dataset from known parameters")
    common(p, "True parameter JSON (default: bundled reference parameters)")
    p.add_argument("--reps", type=int, default=1, help="Replications concatenated into the dataset (default: 1)")
    p.add_argument("--out", type=Path, default=Path("data/synthetic.csv"), help="Dataset CSV to write")
    p.add_argument("--annotations", type=Path, default=None, help="Also write exam-request annotations here")
    p.set_defaults(handler=cmd_gen_synthetic)

    p = sub.add_parser("calibrate", help="Calibrate service-time parameters against a dataset")
    common(p, "Starting parameter JSON (default: bundled reference parameters)")
    p.add_argument("--dataset", type=Path, required=True, help="Dataset CSV")
    p.add_argument("--auto-start", action="store_true", help="Fit the starting point from the dataset")
    p.add_argument("--annotations", type=Path, default=None, help="Exam-request annotations for --auto-start")
    p.add_argument("--settings", type=Path, default=None, help="Calibration settings JSON")
    p.add_argument("--budget", type=int, default=None, help="Evaluation budget (default: 3000)")
    p.add_argument("--reps", type=int, default=None, help="Replications per evaluation (default: 30)")
    p.add_argument("--jobs", type=int, default=defaults["jobs"], help="Worker processes (default: EDCAL_JOBS or 1)")
    p.add_argument("--out", type=Path, default=Path("out/calibration"), help="Output directory")
    p.set_defaults(handler=cmd_calibrate)

    p = sub.add_parser("report", help="Write plot-ready comparison tables")
    p.add_argument("--sim-dir", type=Path, required=True, help="Directory written by 'simulate'")
    p.add_argument("--dataset", type=Path, required=True, help="Real dataset CSV")
    p.add_argument("--out", type=Path, default=Path("out/report"), help="Output directory")
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser("validate", help="Check scenario, parameters and dataset files")
    p.add_argument("--config", type=Path, default=None, help="Scenario JSON (default: bundled case study)")
    p.add_argument("--params", type=Path, default=None, help="Parameter JSON (default: bundled reference parameters)")
    p.add_argument("--dataset", type=Path, default=None, help="Dataset CSV")
    p.add_argument("--annotations", type=Path, default=None, help="Exam-request annotations CSV")
    p.set_defaults(handler=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    """Main entry point for the CLI."""
    try:
        defaults = env_defaults()
    except ConfigurationError as e:
        console.print(f"[red]Error: {e}[/red]")
        return EXIT_INPUT
    args = build_parser(defaults).parse_args(argv)
    setup_logging("INFO" if args.verbose else args.log_level.upper())

    try:
        return int(args.handler(args))
    except INPUT_ERRORS as e:
        console.print(f"[red]Error: {e}[/red]")
        return EXIT_INPUT
    except KeyboardInterrupt:
        console.print("\n[yellow]Interrupted by user[/yellow]")
        return EXIT_RUNTIME
    except Exception as e:  # noqa: BLE001
        logger.debug("unexpected failure", exc_info=True)
        console.print(f"[red]Unexpected error: {e}[/red]")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

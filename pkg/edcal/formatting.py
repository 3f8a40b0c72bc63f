"""Formatting utilities for console output."""

from rich.table import Table

from .models.results import SolveReport
from .types import PatientCountRow


def fmt_float(value: float | None, digits: int = 4) -> str:
    """Format a number, with '-' for missing values."""
    if value is None or value != value:
        return "-"
    return f"{value:.{digits}g}"


def patient_count_table(rows: list[PatientCountRow], title: str = "Patients per tag and unit") -> Table:
    """Mean count with its 95% interval, one row per (tag, unit)."""
    table = Table(title=title)
    table.add_column("Tag", style="cyan")
    table.add_column("Unit", style="magenta")
    table.add_column("Mean", justify="right")
    table.add_column("95% CI", justify="right")
    for row in rows:
        lo, hi = row["ci_low"], row["ci_high"]
        ci = "-" if lo is None or hi is None else f"±{(hi - lo) / 2:.2f}"
        table.add_row(row["tag"], row["unit"], f"{row['sim_mean']:.1f}", ci)
    return table


def solve_summary_table(report: SolveReport, feasible: bool) -> Table:
    """One-glance summary of a calibration."""
    table = Table(title="Calibration")
    table.add_column("Field", style="cyan")
    table.add_column("Value", style="yellow")
    table.add_row("status", report.status)
    table.add_row("feasible", "[green]yes[/green]" if feasible else "[red]no[/red]")
    table.add_row("objective", fmt_float(report.best_f, 6))
    table.add_row("max violation", fmt_float(report.best_max_violation))
    table.add_row("final eps", fmt_float(report.final_eps))
    table.add_row("evaluations", str(report.evaluations_used))
    return table


def validation_table(checks: list[tuple[str, bool, str]]) -> Table:
    """Rows of (check, passed, detail)."""
    table = Table(title="Validation")
    table.add_column("Check", style="cyan")
    table.add_column("Result")
    table.add_column("Detail", style="dim")
    for name, ok, detail in checks:
        table.add_row(name, "[green]ok[/green]" if ok else "[red]failed[/red]", detail)
    return table

"""Rendering of check reports.

Two renderings of one CheckReport: plain `key: value` lines for standard
output (stable, grep-able, what scripts and CI read) and rich tables for
humans (`--pretty`, and the diagnostics written to stderr).
"""

from collections.abc import Callable

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from schemas.report import CheckReport, LineState, Verdict

_VERDICT_STYLES = {
    Verdict.VALID: "bold green",
    Verdict.INVALID: "bold red",
    Verdict.UNKNOWN: "bold yellow",
}

_LINE_ICONS = {
    LineState.OK: "[green]✓[/green]",
    LineState.FAILED: "[bold red]✗[/bold red]",
    LineState.SKIPPED: "[dim]○[/dim]",
}


def report_fields(report: CheckReport, names: Callable[[int], str] = str) -> list[tuple[str, str]]:
    """The (key, value) pairs printed for a report, in print order."""
    fields = [("verdict", report.verdict.value), ("size", str(report.size))]
    if report.failing_line is not None:
        fields.append(("failing_line", str(report.failing_line)))
    if report.reason is not None:
        fields.append(("reason", report.reason.value))
    if report.message:
        fields.append(("message", report.message))
    if report.max_width:
        fields.append(("width", str(report.max_width)))
    if report.regular is not None:
        fields.append(("regular", "yes" if report.regular else "no"))
    for u, count in sorted(report.node_count.items()):
        fields.append((f"nodes[{names(u)}]", str(count)))
    return fields


def format_report(report: CheckReport, names: Callable[[int], str] = str) -> str:
    return "".join(f"{key}: {value}\n" for key, value in report_fields(report, names))


def stats_table(report: CheckReport, title: str, names: Callable[[int], str] = str) -> Table:
    """One row per report field, verdict coloured."""
    table = Table(title=title, show_lines=False, border_style="bright_black")
    table.add_column("Field", style="bold", min_width=14)
    table.add_column("Value", min_width=16)
    for key, value in report_fields(report, names):
        if key == "verdict":
            style = _VERDICT_STYLES[report.verdict]
            value = f"[{style}]{value}[/{style}]"
        table.add_row(key, value)
    table.add_row("elapsed", f"{report.elapsed_ms:.1f} ms")
    return table


def lines_table(report: CheckReport, limit: int = 40) -> Table:
    """Per-line statuses around the first failure (or the first `limit` lines)."""
    statuses = report.lines
    if report.failing_line is not None and len(statuses) > limit:
        start = max(0, report.failing_line - limit // 2)
        statuses = statuses[start : start + limit]
    else:
        statuses = statuses[:limit]
    table = Table(border_style="bright_black")
    table.add_column("#", style="dim", justify="right", width=5)
    table.add_column("", width=2)
    table.add_column("Reason", min_width=18)
    table.add_column("Detail", style="dim")
    for status in statuses:
        table.add_row(
            str(status.index),
            _LINE_ICONS[status.status],
            status.reason.value if status.reason else "",
            status.message or "",
        )
    return table


def print_failure(console: Console, report: CheckReport, what: str) -> None:
    """Short diagnostic panel for a rejected proof or certificate."""
    if report.valid:
        return
    style = _VERDICT_STYLES[report.verdict]
    where = f"line {report.failing_line}" if report.failing_line is not None else "whole proof"
    body = f"[bold]{where}[/bold]: {report.reason.value if report.reason else '?'}\n{report.message or ''}"
    console.print(Panel(body.rstrip(), title=f"{what}: {report.verdict.value}", border_style=style))

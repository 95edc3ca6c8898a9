import math
from typing import Dict, Optional

from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from ..solver.models.results import DiagResult
from .models.records import ExperimentResult


def _fmt(value: Optional[float], spec: str = ".2f") -> str:
    if value is None:
        return "N/A"
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, spec)


def display_experiment(result: ExperimentResult, console: Optional[Console] = None):
    """Summary panel, per-algorithm statistics and split histogram of an experiment"""
    console = console or Console()
    cfg = result.config
    console.print(
        Panel(
            f"[bold cyan]Experiment: {cfg.name}[/]\n"
            + f"[dim]n={cfg.n} eps={cfg.eps_user:g} mode={cfg.mode.value} cutoff={cfg.cutoff}[/]\n"
            + f"[dim]{cfg.draws} draw(s) x {cfg.runs} run(s), seed {cfg.seed}[/]",
            box=box.ROUNDED,
            style="cyan",
        )
    )

    table = Table(title="Runs", box=box.ROUNDED)
    table.add_column("Algorithm", style="cyan")
    table.add_column("Runs", justify="right")
    table.add_column("Failures", justify="right")
    table.add_column("Median diag error", justify="right")
    table.add_column("Median eig error", justify="right")
    table.add_column("Median efficiency", justify="right")
    table.add_column("Split range", justify="right")
    for algorithm, stats in result.summary["algorithms"].items():
        failures = stats["failures"]
        health = "🟢" if failures == 0 else "🟡" if failures <= 0.05 * stats["runs"] else "🔴"
        split_range = stats["split_range"]
        table.add_row(
            algorithm,
            str(stats["runs"]),
            f"{health} {failures}",
            _fmt(stats["diag_error"]["median"]),
            _fmt(stats["eigen_error"]["median"], ".3e"),
            _fmt(stats["efficiency_factor"]["median"]),
            f"{split_range[0]:.2f}-{split_range[1]:.2f}" if split_range else "N/A",
        )
    console.print(table)

    histograms: Dict = result.summary["histograms"].get("rpd", {})
    bins = [b for b in histograms.get("split_size", []) if b["count"]]
    if bins:
        peak = max(b["count"] for b in bins)
        lines = [
            f"{b['bin_lo']:.2f}-{b['bin_hi']:.2f} {'█' * max(1, round(30 * b['count'] / peak))} {b['count']}"
            for b in bins
        ]
        console.print(Panel("\n".join(lines), title="[bold]Relative split sizes", box=box.ROUNDED))


def display_diag_result(res: DiagResult, eps_user: float, console: Optional[Console] = None):
    console = console or Console()
    metrics = res.metrics
    error = metrics.get("diag_error")
    success = error is not None and error <= math.log10(eps_user)
    indicator = "🟢" if success else "🔴"
    splits = res.stats.splits
    console.print(
        Panel(
            f"{indicator} [bold]Diagonalization error (log10):[/] {_fmt(error)}\n"
            + f"[bold]Right-form error (log10):[/] {_fmt(metrics.get('diag_error_right'))}\n"
            + f"[bold]Size:[/] {res.n}  [bold]Mode:[/] {res.params.mode.value}\n"
            + f"[bold]Grid:[/] {res.grid.s1}x{res.grid.s2} boxes of side {res.grid.omega:.3e}\n"
            + f"[bold]Splits:[/] {len(splits)}  [bold]Lines checked:[/] {res.stats.total_lines}"
            + f"  [bold]Delegated:[/] {res.stats.delegated}",
            title=f"[bold]{res.algorithm}",
            box=box.ROUNDED,
        )
    )

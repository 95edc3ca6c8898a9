import rich_click as click
from rich import box
from rich.console import Console
from rich.prompt import Confirm, Prompt
from rich.table import Table

from ..config import (
    CONFIG_FILE,
    get_default_cutoff,
    get_default_eps,
    get_default_mode,
    get_output_dir,
    get_thread_cap,
    load_config_file,
    save_config_file,
)

console = Console()


def _effective() -> dict:
    return {
        "PENCIL_EPS": get_default_eps(),
        "PENCIL_MODE": get_default_mode(),
        "PENCIL_CUTOFF": get_default_cutoff(),
        "PENCIL_THREADS": get_thread_cap(),
        "PENCIL_OUT": str(get_output_dir()),
    }


def show_config():
    table = Table(title="Effective configuration", box=box.ROUNDED)
    table.add_column("Key", style="cyan")
    table.add_column("Value", style="green")
    table.add_column("Source", style="dim")
    stored = load_config_file()
    for key, value in _effective().items():
        table.add_row(key, str(value), "config file" if key in stored else "environment/default")
    console.print(table)


def _ask_float(label: str, current: float, lo: float, hi: float) -> float:
    while True:
        raw = Prompt.ask(label, default=f"{current:g}")
        try:
            value = float(raw)
        except ValueError:
            console.print(f"[red]{raw!r} is not a number[/]")
            continue
        if lo < value < hi:
            return value
        console.print(f"[red]Value must lie in ({lo:g}, {hi:g})[/]")


def _ask_int(label: str, current: int, minimum: int) -> int:
    while True:
        raw = Prompt.ask(label, default=str(current))
        try:
            value = int(raw)
        except ValueError:
            console.print(f"[red]{raw!r} is not an integer[/]")
            continue
        if value >= minimum:
            return value
        console.print(f"[red]Value must be at least {minimum}[/]")


@click.command()
@click.option("--show", is_flag=True, help="Print the effective configuration and exit")
def config(show):
    """Configure default accuracy, mode, cutoff, thread cap and output directory"""
    if show:
        show_config()
        return

    console.print("\n[bold]pencil-rpd Configuration[/]")
    config_data = load_config_file()
    current = _effective()

    console.print("\n[bold cyan]Solver defaults[/]")
    config_data["PENCIL_EPS"] = _ask_float("Target backward error", current["PENCIL_EPS"], 0.0, 1.0)
    config_data["PENCIL_MODE"] = Prompt.ask(
        "Parameter mode", choices=["practical", "theoretical"], default=current["PENCIL_MODE"]
    )
    config_data["PENCIL_CUTOFF"] = _ask_int("QZ cutoff size", current["PENCIL_CUTOFF"], 1)

    console.print("\n[bold cyan]Execution[/]")
    config_data["PENCIL_THREADS"] = _ask_int("Worker threads", current["PENCIL_THREADS"], 1)
    config_data["PENCIL_OUT"] = Prompt.ask("Output directory", default=current["PENCIL_OUT"])

    if not Confirm.ask(f"Save to {CONFIG_FILE}?", default=True):
        console.print("[yellow]Configuration not saved[/]")
        return
    path = save_config_file(config_data)

    console.print("\n[bold]Final Configuration Summary:[/]")
    for key in ("PENCIL_EPS", "PENCIL_MODE", "PENCIL_CUTOFF", "PENCIL_THREADS", "PENCIL_OUT"):
        console.print(f"[green]✓ {key}: {config_data[key]}[/]")
    console.print(f"[green]✓ Written to {path}[/]")

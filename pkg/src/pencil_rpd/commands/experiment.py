import logging
from pathlib import Path

import rich_click as click
from rich.console import Console

from ..harness.experiment import emit, run_experiment
from ..harness.harness_display import display_experiment
from ..harness.models.records import RECIPE_NAMES, ExperimentConfig
from .decorators import EXIT_CODES_HELP, handle_pencil_errors
from .options import cutoff_option, eps_option, mode_option, out_option, resolve_out

console = Console(stderr=True)


def experiment_options(func):
    """Flags shared by ``experiment`` and ``compare``"""
    decorators = [
        click.option("--n", "n", type=click.IntRange(min=2), default=None, help="Pencil size (recipe default)"),
        eps_option,
        click.option("--runs", type=click.IntRange(min=1), default=1, show_default=True, help="Runs per draw"),
        click.option(
            "--draws",
            type=click.IntRange(min=1),
            default=1,
            show_default=True,
            help="Independent pencil draws",
        ),
        click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True, help="Experiment seed"),
        cutoff_option,
        mode_option,
        out_option,
        click.option(
            "--a",
            "a_path",
            type=click.Path(exists=True, dir_okay=False, path_type=Path),
            default=None,
            help="A matrix for the custom recipe",
        ),
        click.option(
            "--b",
            "b_path",
            type=click.Path(exists=True, dir_okay=False, path_type=Path),
            default=None,
            help="B matrix for the custom recipe",
        ),
        click.option("--quiet", "-q", is_flag=True, help="Hide the progress bar"),
    ]
    for decorator in reversed(decorators):
        func = decorator(func)
    return func


def run_and_emit(name, comparator, n, eps, runs, draws, seed, cutoff, mode, out, a_path, b_path, quiet):
    cfg = ExperimentConfig(
        name=name,
        n=n,
        eps_user=eps,
        runs=runs,
        seed=seed,
        cutoff=cutoff,
        comparator=comparator,
        draws=draws,
        mode=mode,
        a_path=a_path,
        b_path=b_path,
    )
    out_dir = resolve_out(out, name)
    logging.info(f"experiment {name}: n={cfg.n} draws={draws} runs={runs} comparator={comparator}")
    result = run_experiment(cfg, show_progress=not quiet)
    written = emit(result, out_dir)
    display_experiment(result, console)
    console.print(f"[green]✓ Results written to {written['summary'].parent}[/]")
    return result


@click.command(epilog=EXIT_CODES_HELP)
@click.argument("name", type=click.Choice(RECIPE_NAMES))
@experiment_options
@handle_pencil_errors()
def experiment(name, n, eps, runs, draws, seed, cutoff, mode, out, a_path, b_path, quiet):
    """Run a batch of diagonalizations on a named recipe and emit summary.json, runs.csv and histograms.csv"""
    run_and_emit(name, False, n, eps, runs, draws, seed, cutoff, mode, out, a_path, b_path, quiet)

import rich_click as click

from ..harness.models.records import RECIPE_NAMES
from .decorators import EXIT_CODES_HELP, handle_pencil_errors
from .experiment import experiment_options, run_and_emit


@click.command(epilog=EXIT_CODES_HELP)
@click.argument("name", type=click.Choice(RECIPE_NAMES), default="singular_b")
@experiment_options
@handle_pencil_errors()
def compare(name, n, eps, runs, draws, seed, cutoff, mode, out, a_path, b_path, quiet):
    """Pair every diagonalization with the inversion-based comparator on the same perturbation and grid"""
    run_and_emit(name, True, n, eps, runs, draws, seed, cutoff, mode, out, a_path, b_path, quiet)

import logging

import rich_click as click
from rich.console import Console

from ..harness.harness_display import display_diag_result
from ..solver.models.results import Mode
from ..solver.rpd import emit_diag_result, rpd_normalized
from ..solver.rpd_metrics import diag_errors, is_success
from ..substrate.rng import RngStream
from .decorators import EXIT_CODES_HELP, EXIT_INACCURATE, handle_pencil_errors
from .options import (
    cutoff_option,
    eps_option,
    load_pencil,
    matrix_arguments,
    mode_option,
    out_option,
    resolve_out,
    resolve_seed,
    seed_option,
)

console = Console(stderr=True)


@click.command(epilog=EXIT_CODES_HELP)
@matrix_arguments
@eps_option
@mode_option
@seed_option
@cutoff_option
@out_option
@handle_pencil_errors()
def diagonalize(a_path, b_path, eps, mode, seed, cutoff, out):
    """Diagonalize the pencil (A, B) read from two Matrix Market files.

    Writes S.mtx, T.mtx and D.json with A ≈ S·diag(D)·T⁻¹ and B ≈ S·T⁻¹.
    """
    pencil = load_pencil(a_path, b_path)
    seed = resolve_seed(seed)
    out_dir = resolve_out(out)
    logging.info(f"diagonalize: n={pencil.n} eps={eps:g} mode={mode} seed={seed}")

    with console.status(f"[bold green]Diagonalizing a {pencil.n}x{pencil.n} pencil..."):
        res = rpd_normalized(pencil, eps, Mode(mode), RngStream(seed), cutoff)
        res.metrics.update(diag_errors(pencil, res))
    res.metrics["seed"] = seed
    res.metrics["eps"] = eps
    res.metrics["success"] = is_success(res.metrics["diag_error"], eps)

    paths = emit_diag_result(res, out_dir)
    display_diag_result(res, eps, console)
    console.print(f"[green]✓ Results written to {paths['D'].parent}[/]")
    if not res.metrics["success"]:
        raise click.exceptions.Exit(EXIT_INACCURATE)

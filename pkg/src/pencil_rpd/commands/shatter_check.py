import json
import logging

import rich_click as click
from rich.console import Console

from ..config import get_thread_cap
from ..grid import Grid, random_grid
from ..pseudospectra import (
    DEFAULT_SAMPLES_PER_EDGE,
    search_shattering_grid,
    verify_shattering,
)
from ..solver.rpd import perturb
from ..substrate.dense import ref_eig
from ..substrate.rng import RngStream
from ..utils import PencilJSONEncoder, atomic_write_json, to_jsonable
from .decorators import EXIT_CODES_HELP, EXIT_INACCURATE, handle_pencil_errors
from .options import load_pencil, matrix_arguments, resolve_seed, seed_option

console = Console(stderr=True)


@click.command("shatter-check", epilog=EXIT_CODES_HELP)
@matrix_arguments
@click.option(
    "--eps",
    type=click.FloatRange(0.0, min_open=True),
    required=True,
    help="Pseudospectrum level to check",
)
@click.option(
    "--gamma",
    type=click.FloatRange(0.0),
    default=0.0,
    help="Perturb by gamma-scaled Ginibre matrices first",
)
@click.option(
    "--unit-variance",
    is_flag=True,
    help="Perturb with unit-variance complex Gaussian matrices instead of Ginibre ones",
)
@click.option(
    "--omega",
    type=click.FloatRange(0.0, 8.0, min_open=True),
    default=0.25,
    show_default=True,
    help="Grid box side; a perturbed 10x10 Jordan block at eps 1e-8 needs about 0.09 with --attempts",
)
@click.option("--re0", type=float, default=None, help="Grid corner, real part (default: random)")
@click.option("--im0", type=float, default=None, help="Grid corner, imaginary part (default: random)")
@click.option(
    "--attempts",
    type=click.IntRange(min=1),
    default=1,
    show_default=True,
    help="Redraw the random grid up to this many times until one shatters",
)
@click.option(
    "--samples",
    type=click.IntRange(min=2),
    default=DEFAULT_SAMPLES_PER_EDGE,
    show_default=True,
    help="Samples per grid edge",
)
@click.option(
    "--margin",
    type=click.FloatRange(0.0, min_open=True),
    default=None,
    help="Only sample edges within this distance of an eigenvalue",
)
@seed_option
@click.option("--out", "-o", type=click.Path(dir_okay=False), default=None, help="Report file (default: stdout)")
@handle_pencil_errors()
def shatter_check(a_path, b_path, eps, gamma, unit_variance, omega, re0, im0, attempts, samples, margin, seed, out):
    """Check whether a grid shatters the eps-pseudospectrum of (A, B); prints a JSON report"""
    pencil = load_pencil(a_path, b_path)
    seed = resolve_seed(seed)
    rng = RngStream(seed)
    if gamma > 0:
        pencil = perturb(pencil, gamma, rng, variance=1.0 if unit_variance else None)
    oracle = ref_eig(pencil)
    payload = {"seed": seed, "eps": eps, "gamma": gamma, "unit_variance": unit_variance}

    if attempts > 1 and re0 is None and im0 is None:
        logging.info(f"shatter-check: n={pencil.n} eps={eps:g} up to {attempts} grids seed={seed}")
        with console.status("[bold green]Searching for a shattering grid..."):
            search = search_shattering_grid(
                pencil,
                eps,
                omega,
                oracle,
                rng,
                attempts=attempts,
                samples_per_edge=samples,
                margin=margin,
                workers=get_thread_cap(),
            )
        report = search.report
        payload.update(search.to_dict())
    else:
        grid = random_grid(omega, rng.child("grid"))
        if re0 is not None or im0 is not None:
            corner = complex(re0 if re0 is not None else grid.z0.real, im0 if im0 is not None else grid.z0.imag)
            grid = Grid(corner, grid.omega, grid.s1, grid.s2)
        logging.info(f"shatter-check: n={pencil.n} eps={eps:g} grid {grid.s1}x{grid.s2} seed={seed}")
        with console.status("[bold green]Sampling grid edges..."):
            report = verify_shattering(
                pencil,
                grid,
                eps,
                oracle,
                samples_per_edge=samples,
                margin=margin,
                workers=get_thread_cap(),
            )
        payload.update({"grid": grid.to_dict(), **report.to_dict()})

    if out:
        atomic_write_json(out, payload)
    else:
        click.echo(json.dumps(to_jsonable(payload), indent=2, cls=PencilJSONEncoder))

    status = "[green]✓ shattered[/]" if report.shattered else "[red]✗ not shattered[/]"
    console.print(f"{status} (min sampled ratio {report.min_grid_sigma_ratio:.3e})")
    for violation in report.violations:
        console.print(f"[yellow]- {violation}[/]")
    if not report.shattered:
        raise click.exceptions.Exit(EXIT_INACCURATE)

import rich_click as click
from rich.console import Console

from ..config import get_thread_cap
from ..pseudospectra import Region, product_levels, pseudospec_levels
from ..utils import atomic_write_csv, atomic_write_json
from .decorators import EXIT_CODES_HELP, handle_pencil_errors
from .options import load_pencil, matrix_arguments, out_option, resolve_out

console = Console(stderr=True)


def _region(ctx, param, value):
    try:
        return Region.parse(value)
    except ValueError as e:
        raise click.BadParameter(str(e))


@click.command(epilog=EXIT_CODES_HELP)
@matrix_arguments
@click.option(
    "--region",
    default="-4,4,-4,4",
    show_default=True,
    callback=_region,
    help="Rectangle re_min,re_max,im_min,im_max",
)
@click.option("--resolution", type=click.IntRange(min=2), default=101, show_default=True)
@click.option("--product", is_flag=True, help="Also emit the field of the formed product B⁻¹A")
@out_option
@handle_pencil_errors()
def pseudospectrum(a_path, b_path, region, resolution, product, out):
    """Emit log10[(1+|z|)/σmin(A − zB)] on a lattice as CSV (re, im, value) plus a JSON header"""
    pencil = load_pencil(a_path, b_path)
    out_dir = resolve_out(out)
    workers = get_thread_cap()
    fields = []
    with console.status("[bold green]Evaluating pseudospectrum..."):
        fields.append(("levels", pseudospec_levels(pencil, region, resolution, workers)))
        if product:
            fields.append(("product_levels", product_levels(pencil, region, resolution, workers)))

    for stem, field in fields:
        atomic_write_csv(out_dir / f"{stem}.csv", field.to_frame())
        atomic_write_json(out_dir / f"{stem}.json", field.header())
        console.print(f"[green]✓ {stem}.csv written to {out_dir}[/]")

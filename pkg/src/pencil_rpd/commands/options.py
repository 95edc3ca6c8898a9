"""Options shared by several commands; defaults come from the configuration layer."""

from pathlib import Path

import numpy as np
import rich_click as click

from ..config import get_default_cutoff, get_default_eps, get_default_mode, get_output_dir
from ..exceptions import ShapeMismatchError
from ..pencil import Pencil
from ..substrate.matrix_market import read_matrix

MODES = ["practical", "theoretical"]


def eps_option(func):
    return click.option(
        "--eps",
        type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True),
        default=get_default_eps,
        show_default="1e-6 or PENCIL_EPS",
        help="Target backward error",
    )(func)


def mode_option(func):
    return click.option(
        "--mode",
        type=click.Choice(MODES),
        default=get_default_mode,
        show_default="practical or PENCIL_MODE",
        help="Parameter regime of the eigensolver",
    )(func)


def seed_option(func):
    return click.option(
        "--seed",
        type=click.IntRange(min=0),
        default=None,
        help="Random seed; fixed seeds give bit-identical outputs",
    )(func)


def cutoff_option(func):
    return click.option(
        "--cutoff",
        type=click.IntRange(min=1),
        default=get_default_cutoff,
        show_default="1 or PENCIL_CUTOFF",
        help="Subproblems of this size or smaller go to the dense QZ solver",
    )(func)


def out_option(func):
    return click.option(
        "--out",
        "-o",
        type=click.Path(file_okay=False, path_type=Path),
        default=None,
        help="Output directory (default: PENCIL_OUT or ./results)",
    )(func)


def matrix_arguments(func):
    func = click.argument("b_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))(func)
    return click.argument("a_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))(func)


def resolve_seed(seed):
    """A fresh 63-bit seed when none was given"""
    if seed is not None:
        return seed
    return int(np.random.SeedSequence().entropy % (1 << 63))


def resolve_out(out, *parts) -> Path:
    base = out if out is not None else get_output_dir()
    return Path(base).joinpath(*parts)


def load_pencil(a_path: Path, b_path: Path) -> Pencil:
    A = read_matrix(a_path)
    B = read_matrix(b_path)
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ShapeMismatchError(
            f"A ({a_path.name}) has shape {A.shape} and B ({b_path.name}) has shape {B.shape}; "
            "both must be square and of equal size"
        )
    return Pencil(A, B, name=a_path.stem)

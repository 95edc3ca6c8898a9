from functools import wraps

import numpy as np
import rich_click as click
from rich.console import Console

from ..exceptions import (
    MatrixMarketError,
    NoSplitFoundError,
    ParameterUnderflowError,
    PencilError,
    ShapeMismatchError,
    SingularMatrixError,
)

console = Console(stderr=True)

EXIT_OK = 0
EXIT_INACCURATE = 1
EXIT_NO_SPLIT = 2
EXIT_IO = 3
EXIT_USAGE = 4

EXIT_CODES_HELP = (
    "Exit codes: 0 success; 1 finished but missed the accuracy target (or the grid is not "
    "shattered); 2 no dividing grid line found; 3 unreadable, malformed or mismatched input, "
    "or a failed write; 4 invalid command-line usage."
)


def handle_pencil_errors():
    """Render library errors with rich and turn them into the documented exit codes"""

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except click.exceptions.Exit:
                raise
            except NoSplitFoundError as e:
                console.print(f"[red]No dividing line found:[/] {e}")
                console.print(
                    "[yellow]The grid may not shatter the pseudospectrum; try another seed or a larger eps[/]"
                )
                raise click.exceptions.Exit(EXIT_NO_SPLIT)
            except (MatrixMarketError, ShapeMismatchError) as e:
                console.print(f"[red]Input error:[/] {e}")
                raise click.exceptions.Exit(EXIT_IO)
            except ParameterUnderflowError as e:
                console.print(f"[red]Parameter error:[/] {e}")
                raise click.exceptions.Exit(EXIT_USAGE)
            except (SingularMatrixError, np.linalg.LinAlgError) as e:
                console.print(f"[red]Numerical failure:[/] {e}")
                raise click.exceptions.Exit(EXIT_INACCURATE)
            except OSError as e:
                console.print(f"[red]I/O error:[/] {e}")
                raise click.exceptions.Exit(EXIT_IO)
            except PencilError as e:
                console.print(f"[red]Error:[/] {e}")
                raise click.exceptions.Exit(EXIT_IO)
            except ValueError as e:
                console.print(f"[red]Invalid value:[/] {e}")
                raise click.exceptions.Exit(EXIT_USAGE)

        return wrapper

    return decorator

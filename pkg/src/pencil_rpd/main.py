import logging
import sys

import rich_click as click
from rich.console import Console
from rich.logging import RichHandler

from pencil_rpd import __version__

from .commands import compare, config, diagonalize, experiment, pseudospectrum, shatter_check
from .commands.decorators import EXIT_CODES_HELP, EXIT_USAGE

# Configure rich-click
click.rich_click.USE_RICH_MARKUP = True
click.rich_click.USE_MARKDOWN = True
click.rich_click.SHOW_ARGUMENTS = True
click.rich_click.GROUP_ARGUMENTS_OPTIONS = True
click.rich_click.STYLE_ERRORS_SUGGESTION = "yellow italic"
click.rich_click.ERRORS_SUGGESTION = "Try '--help' for more information."

console = Console(stderr=True)


@click.group(epilog=EXIT_CODES_HELP)
@click.version_option(version=__version__, prog_name="pencil-rpd")
@click.option(
    "-v",
    "--verbose",
    count=True,
    help="Increase verbosity (can be used multiple times)",
)
def cli(verbose):
    """Randomized inverse-free diagonalization of matrix pencils"""
    if verbose == 0:
        log_level = logging.WARNING
    elif verbose == 1:
        log_level = logging.INFO
    else:  # verbose >= 2
        log_level = logging.DEBUG

    logging.basicConfig(
        level=log_level,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
    )


cli.add_command(diagonalize)
cli.add_command(pseudospectrum)
cli.add_command(shatter_check)
cli.add_command(experiment)
cli.add_command(compare)
cli.add_command(config)


def main():
    try:
        code = cli.main(standalone_mode=False)
    except click.exceptions.Exit as e:
        code = e.exit_code
    except click.exceptions.Abort:
        console.print("[yellow]Aborted[/]")
        code = EXIT_USAGE
    except click.ClickException as e:
        e.show()
        code = EXIT_USAGE
    sys.exit(code if isinstance(code, int) else 0)


if __name__ == "__main__":
    main()

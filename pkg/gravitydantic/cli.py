# -*- coding: utf-8 -*-
"""
COMMAND-LINE INTERFACE \n
gravitydantic [--out PATH] [--format csv|json] [--tol-rel X] [--seed N]
[--log-level LEVEL] {single,sweep,validate,oracle} --config PATH \n
Exit codes: 0 success, 1 invalid input or failed checks, 2 numerical accuracy
failure, 3 input or output failure.
"""
# Import functions
from gravitydantic.get_report import __version__, run_command
from gravitydantic.models.config import load_config
from gravitydantic.models._utils.errors import ConfigParseError

# Import other packages
import click
import logging
import sys

logger = logging.getLogger(__name__)


"""
DEFAULTS
"""


_EXIT_INVALID = 1
_EXIT_NUMERICAL = 2
_EXIT_IO = 3


"""
HELPERS
"""


def _fail(message: str, status: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(status)


def _execute(options: dict, command: str, config_path: str) -> None:
    try:
        config = load_config(config_path).with_overrides(
            epsrel=options["tol_rel"],
            seed=options["seed"],
            format=options["format"],
            path=options["out"],
        )
    except OSError as e:
        _fail(f"cannot read {config_path}: {e}", _EXIT_IO)
    except ConfigParseError as e:
        where = f" (line {e.line}, column {e.column})" if e.line else ""
        _fail(f"{e}{where}", _EXIT_INVALID)
    except ValueError as e:
        _fail(str(e), _EXIT_INVALID)

    # Computation errors outside the per-row reports end the run
    try:
        status, output = run_command(command, config)
    except ValueError as e:
        _fail(str(e), _EXIT_INVALID)
    except (ArithmeticError, RuntimeError) as e:
        _fail(f"{type(e).__name__}: {e}", _EXIT_NUMERICAL)

    # Write to the configured destination
    try:
        if config.output.path:
            with open(config.output.path, "w") as f:
                f.write(output)
        else:
            click.echo(output, nl=False)
    except OSError as e:
        _fail(f"cannot write {config.output.path}: {e}", _EXIT_IO)
    sys.exit(status)


"""
COMMANDS
"""


@click.group()
@click.option("--out", type=click.Path(dir_okay=False), help="Output file path.")
@click.option(
    "--format", type=click.Choice(["csv", "json"]), help="Output serialization."
)
@click.option("--tol-rel", type=float, help="Relative quadrature tolerance.")
@click.option("--seed", type=int, help="Seed for randomized checks.")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default="WARNING",
    show_default=True,
)
@click.version_option(__version__, prog_name="gravitydantic")
@click.pass_context
def main(ctx, out, format, tol_rel, seed, log_level):
    """
    Compare classical and quantum gravity-mediated entanglement of two masses.
    """
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    ctx.obj = {"out": out, "format": format, "tol_rel": tol_rel, "seed": seed}


_config_option = click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(dir_okay=False),
    help="JSON run configuration.",
)


@main.command()
@_config_option
@click.pass_obj
def single(options, config_path):
    """One report row for the configured experiment."""
    _execute(options, "single", config_path)


@main.command()
@_config_option
@click.pass_obj
def sweep(options, config_path):
    """One report row per point of the configured grid."""
    _execute(options, "sweep", config_path)


@main.command()
@_config_option
@click.pass_obj
def validate(options, config_path):
    """Run the invariant suite on the configured experiment."""
    _execute(options, "validate", config_path)


@main.command()
@_config_option
@click.pass_obj
def oracle(options, config_path):
    """Closed-form values next to the quadrature for static branches."""
    _execute(options, "oracle", config_path)


if __name__ == "__main__":
    main()

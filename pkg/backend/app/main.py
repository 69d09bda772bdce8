import json
import logging

import click

from app.cli.commands.analyze import analyze_command
from app.cli.commands.catalog import catalog_group
from app.cli.commands.completion import completion_command
from app.cli.commands.filters import filters_command
from app.cli.commands.limit import limit_command
from app.cli.commands.topology import topology_command
from app.cli.commands.validate import validate_command
from app.cli.commands.verify import verify_command
from app.cli.commands.zltrl import zltrl_command
from app.cli.deps import CliState
from app.core.config import settings
from app.core.errors import EXIT_VIOLATION, WorkbenchError
from app.core.logging import configure_logging


logger = logging.getLogger(__name__)


class WorkbenchGroup(click.Group):
    """Turns workbench errors into one stderr line and their exit code."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except WorkbenchError as exc:
            click.echo(f"error: {exc.detail}", err=True)
            if exc.exit_code == EXIT_VIOLATION:
                click.echo(json.dumps(exc.payload(), sort_keys=True, default=str), err=True)
            logger.debug("command failed", exc_info=exc)
            ctx.exit(exc.exit_code)


@click.group("rlw", cls=WorkbenchGroup)
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text")
@click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker processes for verify.")
@click.option("--seed", type=int, default=None, help="Seed for randomized suites.")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=None,
)
@click.pass_context
def cli(
    ctx: click.Context,
    output_format: str,
    jobs: int | None,
    seed: int | None,
    log_level: str | None,
) -> None:
    """Finite residuated lattice workbench."""
    configure_logging(log_level or settings.LOG_LEVEL)
    ctx.obj = CliState(
        output_format=output_format,
        jobs=jobs if jobs is not None else settings.DEFAULT_JOBS,
        seed=seed if seed is not None else settings.DEFAULT_SEED,
    )


cli.add_command(validate_command)
cli.add_command(filters_command)
cli.add_command(topology_command)
cli.add_command(zltrl_command)
cli.add_command(completion_command)
cli.add_command(limit_command)
cli.add_command(analyze_command)
cli.add_command(catalog_group)
cli.add_command(verify_command)


if __name__ == "__main__":
    cli()

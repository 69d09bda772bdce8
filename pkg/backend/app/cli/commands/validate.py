from pathlib import Path

import click

from app.cli.deps import emit
from app.cli.formatting import render_validation
from app.core.errors import EXIT_USAGE
from app.repositories.document_repository import load_algebra
from app.services.algebra import validate


@click.command("validate")
@click.argument("file", type=click.Path(path_type=Path, dir_okay=False))
@click.pass_context
def validate_command(ctx: click.Context, file: Path) -> None:
    """Check every residuated lattice axiom on FILE."""
    algebra = load_algebra(file)
    report = validate(algebra)
    emit(ctx, report, render_validation(algebra.label(), report))
    if not report.ok:
        ctx.exit(EXIT_USAGE)

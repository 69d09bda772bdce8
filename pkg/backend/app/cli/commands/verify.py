import json
from pathlib import Path

import click

from app.cli.deps import get_state, resolve_catalog
from app.cli.formatting import render_suite
from app.core.errors import EXIT_VIOLATION
from app.services.verification import SUITES, run_suites


@click.command("verify")
@click.option("--suite", type=click.Choice([*SUITES, "all"]), required=True)
@click.option("--size-max", "size_max", type=click.IntRange(min=1), required=True)
@click.option("--catalog", "catalog_path", type=click.Path(path_type=Path, dir_okay=False), default=None)
@click.pass_context
def verify_command(ctx: click.Context, suite: str, size_max: int, catalog_path: Path | None) -> None:
    """Run theorem suites over the catalog and print the pass/fail matrix."""
    state = get_state(ctx)
    catalog = resolve_catalog(catalog_path, size_max)
    reports = run_suites(suite, catalog, size_max, seed=state.seed, jobs=state.jobs)

    if state.output_format == "json":
        # One object per suite.
        for report in reports:
            click.echo(json.dumps(report.model_dump(mode="json"), sort_keys=True))
    else:
        click.echo("\n\n".join(render_suite(report) for report in reports))

    if not all(report.ok for report in reports):
        ctx.exit(EXIT_VIOLATION)

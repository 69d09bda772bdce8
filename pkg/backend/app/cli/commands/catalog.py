from pathlib import Path

import click

from app.cli.deps import emit
from app.cli.formatting import key_value_block
from app.core.config import settings
from app.core.errors import PreconditionError
from app.core.storage import default_catalog_path
from app.repositories.catalog_repository import load_and_merge, load_catalog, save_catalog
from app.services.catalog import AlgebraCatalog, generate_up_to


@click.group("catalog")
def catalog_group() -> None:
    """Generate, inspect and merge algebra catalogs."""


def _stats_payload(path: Path, catalog: AlgebraCatalog) -> dict:
    return {
        "path": str(path),
        "size_bound": catalog.size_bound,
        "count": len(catalog),
        "by_size": {str(size): count for size, count in catalog.counts_by_size().items()},
        "by_tag": catalog.counts_by_tag(),
        "statistics": [stats.model_dump() for stats in catalog.statistics],
    }


def _stats_text(payload: dict) -> str:
    rows = [("algebras", payload["count"]), ("size bound", payload["size_bound"])]
    rows += [(f"size {size}", count) for size, count in payload["by_size"].items()]
    rows += [(f"tag {tag}", count) for tag, count in payload["by_tag"].items()]
    return key_value_block(payload["path"], rows)


@catalog_group.command("generate")
@click.option("--size", "size", type=int, required=True, help="Largest carrier size.")
@click.option("--out", "out", type=click.Path(path_type=Path, dir_okay=False), default=None)
@click.pass_context
def generate_command(ctx: click.Context, size: int, out: Path | None) -> None:
    """Generate every residuated lattice up to --size, one per isomorphism class."""
    if not 1 <= size <= settings.CATALOG_MAX_SIZE:
        raise PreconditionError(f"--size must lie in 1..{settings.CATALOG_MAX_SIZE}, got {size}")
    path = out if out is not None else default_catalog_path(size)
    catalog = generate_up_to(size)
    save_catalog(catalog, path)
    payload = _stats_payload(path, catalog)
    emit(ctx, payload, _stats_text(payload))


@catalog_group.command("stats")
@click.argument("path", type=click.Path(path_type=Path, dir_okay=False))
@click.pass_context
def stats_command(ctx: click.Context, path: Path) -> None:
    """Count the algebras of a catalog by size and tag."""
    payload = _stats_payload(path, load_catalog(path))
    emit(ctx, payload, _stats_text(payload))


@catalog_group.command("merge")
@click.argument("paths", nargs=-1, required=True, type=click.Path(path_type=Path, dir_okay=False))
@click.option("--out", "out", type=click.Path(path_type=Path, dir_okay=False), required=True)
@click.pass_context
def merge_command(ctx: click.Context, paths: tuple[Path, ...], out: Path) -> None:
    """Merge catalogs into one file."""
    catalog = load_and_merge(list(paths))
    save_catalog(catalog, out)
    payload = _stats_payload(out, catalog)
    emit(ctx, payload, _stats_text(payload))

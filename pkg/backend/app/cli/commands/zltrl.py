from pathlib import Path

import click

from app.cli.deps import emit, load_valid_algebra
from app.cli.formatting import fmt_family, fmt_set
from app.services.topology import zltrl_members


@click.command("zltrl")
@click.argument("file", type=click.Path(path_type=Path, dir_okay=False))
@click.pass_context
def zltrl_command(ctx: click.Context, file: Path) -> None:
    """Enumerate the zero-dimensional linear topologies making FILE a topological algebra."""
    algebra = load_valid_algebra(file)
    members = zltrl_members(algebra)
    payload = {
        "algebra": algebra.label(),
        "count": len(members),
        "topologies": [{"filter": f.to_list(), "min_nbhd": t.to_lists()} for f, t in members],
    }
    lines = [f"{algebra.label()}: {len(members)} topologies"]
    for f, t in members:
        blocks = dict.fromkeys(tuple(nbhd) for nbhd in t.to_lists())
        lines.append(f"  {fmt_set(f)}: blocks {fmt_family(blocks)}")
    emit(ctx, payload, "\n".join(lines))

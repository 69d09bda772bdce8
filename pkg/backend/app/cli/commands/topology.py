from pathlib import Path

import click

from app.cli.deps import emit, load_valid_algebra, parse_system_literal
from app.cli.formatting import fmt_bool, fmt_set, render_topology
from app.services.topology import (
    check_topological_algebra,
    induce_topology,
    is_hausdorff,
    is_zero_dimensional,
    open_sets,
    separation_axioms,
    specialization_dot,
)


@click.command("topology")
@click.argument("file", type=click.Path(path_type=Path, dir_okay=False))
@click.option("--system", "system_literal", required=True, help='Filters as "0,3;1,2,3".')
@click.option("--dot", is_flag=True, help="Print the specialization preorder as DOT.")
@click.pass_context
def topology_command(ctx: click.Context, file: Path, system_literal: str, dot: bool) -> None:
    """Induce the linear topology of a system of filters on FILE."""
    algebra = load_valid_algebra(file)
    system = parse_system_literal(algebra, system_literal)
    topology = induce_topology(system)
    if dot:
        click.echo(specialization_dot(topology), nl=False)
        return

    separation = separation_axioms(topology)
    continuity = check_topological_algebra(algebra, topology)
    payload = {
        "system": [f.to_list() for f in system.family],
        "minimum": system.minimum.to_list(),
        "min_nbhd": topology.to_lists(),
        "open_sets": [sorted(u) for u in open_sets(topology)],
        "separation": separation.model_dump(),
        "hausdorff": is_hausdorff(algebra, system),
        "zero_dimensional": is_zero_dimensional(topology),
        "continuity": continuity.model_dump(),
    }

    lines = [f"{algebra.label()}: topology of {fmt_set(system.minimum)}"]
    lines.extend(render_topology(payload["min_nbhd"]))
    lines.append(f"  open sets: {len(payload['open_sets'])}")
    lines.append(f"  separation: {separation.separation_class}")
    lines.append(f"  zero-dimensional: {fmt_bool(payload['zero_dimensional'])}")
    lines.append(f"  continuous operations: {fmt_bool(continuity.ok)}")
    emit(ctx, payload, "\n".join(lines))

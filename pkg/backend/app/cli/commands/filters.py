from pathlib import Path

import click

from app.cli.deps import emit, load_valid_algebra
from app.cli.formatting import fmt_bool, fmt_set
from app.services.filters import (
    enumerate_congruences,
    enumerate_filters,
    filter_lattice,
    irredundant_decomposition,
    is_prime,
    join_irreducible_filters,
)


@click.command("filters")
@click.argument("file", type=click.Path(path_type=Path, dir_okay=False))
@click.option("--dot", is_flag=True, help="Print the filter lattice as a DOT Hasse diagram.")
@click.pass_context
def filters_command(ctx: click.Context, file: Path, dot: bool) -> None:
    """List the filters of FILE with primes, join-irreducibles and decompositions."""
    algebra = load_valid_algebra(file)
    if dot:
        click.echo(filter_lattice(algebra).to_dot(), nl=False)
        return

    filters = enumerate_filters(algebra)
    irreducible = set(join_irreducible_filters(algebra))
    rows = []
    for f in filters:
        rows.append(
            {
                "filter": f.to_list(),
                "prime": is_prime(f),
                "join_irreducible": f in irreducible,
                "decomposition": (
                    None if f.is_trivial else [g.to_list() for g in irredundant_decomposition(algebra, f)]
                ),
            }
        )
    payload = {
        "algebra": algebra.label(),
        "filters": rows,
        "congruence_count": len(enumerate_congruences(algebra)),
    }

    lines = [f"{algebra.label()}: {len(filters)} filters"]
    for row in rows:
        line = (
            f"  {fmt_set(row['filter'])}  prime={fmt_bool(row['prime'])}"
            f"  join-irreducible={fmt_bool(row['join_irreducible'])}"
        )
        if row["decomposition"] is not None:
            line += "  = " + " v ".join(fmt_set(g) for g in row["decomposition"])
        lines.append(line)
    lines.append(f"  congruences: {payload['congruence_count']}")
    emit(ctx, payload, "\n".join(lines))

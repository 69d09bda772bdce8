from pathlib import Path

import click

from app.cli.deps import emit
from app.repositories.document_repository import limit_document, load_inverse_system
from app.services.limits import cofinal_restrict, inverse_limit, restriction_isomorphism


@click.command("limit")
@click.argument("system_file", type=click.Path(path_type=Path, dir_okay=False))
@click.option("--restrict", "restrict", default=None, help='Cofinal indices as "i,j,...".')
@click.pass_context
def limit_command(ctx: click.Context, system_file: Path, restrict: str | None) -> None:
    """Compute the inverse limit of the system in SYSTEM_FILE."""
    system = load_inverse_system(system_file)
    limit = inverse_limit(system)
    payload = limit_document(limit).model_dump(mode="json")

    lines = [f"limit over {len(limit.order)} indices: {limit.algebra.size} threads"]
    lines.append("  " + " ".join(limit.order))
    for k, thread in enumerate(limit.threads):
        lines.append(f"  {k}: " + " ".join(str(v) for v in thread))

    if restrict is not None:
        subset = [part.strip() for part in restrict.split(",") if part.strip()]
        restricted = inverse_limit(cofinal_restrict(system, subset))
        isomorphism = restriction_isomorphism(limit, restricted)
        payload["restricted"] = {
            **limit_document(restricted).model_dump(mode="json"),
            "isomorphism": list(isomorphism.map),
        }
        lines.append(f"restricted to {', '.join(restricted.order)}: {restricted.algebra.size} threads (isomorphic)")

    emit(ctx, payload, "\n".join(lines))

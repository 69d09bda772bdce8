from pathlib import Path

import click

from app.cli.deps import emit, load_valid_algebra
from app.services.limits import profinite_completion


@click.command("completion")
@click.argument("file", type=click.Path(path_type=Path, dir_okay=False))
@click.pass_context
def completion_command(ctx: click.Context, file: Path) -> None:
    """Build the completion of FILE over all its filters and over the join-irreducible ones."""
    algebra = load_valid_algebra(file)
    completion = profinite_completion(algebra)
    payload = {
        "algebra": algebra.label(),
        "indices": list(completion.limit.order),
        "limit_size": completion.limit.algebra.size,
        "embedding": list(completion.embedding.map),
        "cofinal_indices": list(completion.cofinal_indices),
        "cofinal_limit_size": completion.cofinal_limit.algebra.size,
        "cofinal_isomorphism": list(completion.cofinal_isomorphism.map),
    }
    lines = [
        f"{algebra.label()}: completion over {len(payload['indices'])} filters",
        f"  limit size: {payload['limit_size']}",
        f"  embedding: {payload['embedding']} (isomorphism)",
        f"  cofinal indices: {', '.join(payload['cofinal_indices'])}",
        f"  cofinal limit size: {payload['cofinal_limit_size']} (isomorphic)",
    ]
    emit(ctx, payload, "\n".join(lines))

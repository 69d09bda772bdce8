from pathlib import Path

import click

from app.cli.deps import emit, load_valid_algebra
from app.cli.formatting import fmt_bool, fmt_set, key_value_block
from app.services.analysis import (
    filter_form_agrees,
    global_system_topology_verdict,
    hausdorff_existence_verdict,
    is_directly_indecomposable,
    permutability_check,
    structure_report,
    subvariety_tags,
)


@click.command("analyze")
@click.argument("file", type=click.Path(path_type=Path, dir_okay=False))
@click.pass_context
def analyze_command(ctx: click.Context, file: Path) -> None:
    """Classify FILE: irreducibility, indecomposability, dimension and topological verdicts."""
    algebra = load_valid_algebra(file)
    structure = structure_report(algebra)
    indecomposability = None if algebra.is_trivial else is_directly_indecomposable(algebra)
    global_verdict = global_system_topology_verdict(algebra)
    hausdorff = hausdorff_existence_verdict(algebra)
    tags = subvariety_tags(algebra)
    permutable = permutability_check(algebra)

    payload = {
        "structure": structure.model_dump(),
        "indecomposability": indecomposability.model_dump() if indecomposability else None,
        "global_system": global_verdict.model_dump(),
        "hausdorff": hausdorff.model_dump(),
        "permutable": permutable.ok,
        "tags": tags,
    }

    rows = [
        ("size", structure.size),
        ("simple", fmt_bool(structure.is_simple)),
        ("subdirectly irreducible", fmt_bool(structure.is_subdirectly_irreducible)),
        ("monolith", fmt_set(structure.monolith) if structure.monolith is not None else "-"),
        ("directly indecomposable", fmt_bool(structure.is_directly_indecomposable)),
        ("dimension", structure.dimension),
        ("congruences permute", fmt_bool(permutable.ok)),
        ("tags", ", ".join(tags) or "-"),
    ]
    if indecomposability is not None:
        rows.append(("filters down-directed", fmt_bool(indecomposability.global_system_directed)))
        rows.append(("filter form agrees", fmt_bool(filter_form_agrees(indecomposability))))
        if indecomposability.factor_pair is not None:
            first, second = indecomposability.factor_pair
            rows.append(("factor pair", f"{fmt_set(first)} x {fmt_set(second)}"))
    if global_verdict.applicable:
        rows.append(("global topology non-discrete", fmt_bool(global_verdict.non_discrete)))
    else:
        rows.append(("global topology", f"not applicable ({global_verdict.reason})"))
    if hausdorff.skipped:
        rows.append(("hausdorff scan", hausdorff.note))
    else:
        rows.append(("non-trivial hausdorff", hausdorff.nontrivial_hausdorff_count))

    emit(ctx, payload, key_value_block(f"{algebra.label()} [{structure.algebra_id}]", rows))

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import click
from pydantic import BaseModel

from app.core.config import settings
from app.core.errors import InputError, PreconditionError
from app.core.storage import find_catalog_covering
from app.models.structures import FilterSet, ResiduatedLattice, SystemOfFilters, mask_of
from app.repositories.catalog_repository import load_catalog
from app.repositories.document_repository import load_algebra
from app.services.algebra import validate
from app.services.catalog import AlgebraCatalog, generate_up_to
from app.services.filters import is_filter


@dataclass
class CliState:
    output_format: str = "text"
    jobs: int = 1
    seed: int = 0


def get_state(ctx: click.Context) -> CliState:
    return ctx.ensure_object(CliState)


def emit(ctx: click.Context, payload: BaseModel | dict[str, Any], text: str) -> None:
    if get_state(ctx).output_format == "json":
        data = payload.model_dump(mode="json", by_alias=True) if isinstance(payload, BaseModel) else payload
        click.echo(json.dumps(data, sort_keys=True, indent=2))
    else:
        click.echo(text)


def load_valid_algebra(path: Path) -> ResiduatedLattice:
    algebra = load_algebra(path)
    report = validate(algebra)
    if not report.ok:
        raise PreconditionError(
            f"{path} is not a residuated lattice",
            witness=[v.model_dump() for v in report.violations],
        )
    return algebra


def parse_filter_literal(algebra: ResiduatedLattice, literal: str) -> FilterSet:
    """'0,2,3' names the filter {0,2,3}."""
    try:
        members = [int(part) for part in literal.split(",") if part.strip()]
    except ValueError as exc:
        raise InputError(f"Filter literal {literal!r} must list element indices") from exc
    if any(not 0 <= x < algebra.size for x in members):
        raise InputError(f"Filter literal {literal!r} names elements outside 0..{algebra.size - 1}")
    mask = mask_of(members)
    if not is_filter(algebra, mask):
        raise PreconditionError(f"{{{literal}}} is not a filter", witness=sorted(set(members)))
    return FilterSet(algebra, mask)


def parse_system_literal(algebra: ResiduatedLattice, literal: str) -> SystemOfFilters:
    """'F1;F2;...' with each filter in the comma form."""
    parts = [part for part in literal.split(";") if part.strip()]
    if not parts:
        raise InputError("A system needs at least one filter")
    family = tuple(dict.fromkeys(parse_filter_literal(algebra, part) for part in parts))
    return SystemOfFilters(algebra, family)


def resolve_catalog(path: Path | None, size_max: int) -> AlgebraCatalog:
    if size_max > settings.CATALOG_MAX_SIZE:
        raise PreconditionError(f"--size-max is limited to {settings.CATALOG_MAX_SIZE}")
    if path is not None:
        catalog = load_catalog(path)
        if catalog.size_bound < size_max:
            raise PreconditionError(
                f"{path} covers sizes up to {catalog.size_bound}, {size_max} requested"
            )
        return catalog

    stored = find_catalog_covering(size_max)
    if stored is not None:
        return load_catalog(stored)
    return generate_up_to(size_max)

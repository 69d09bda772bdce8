import json
import logging
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from app.core.errors import CatalogFormatError, InputError, StructuralError
from app.core.storage import ensure_parent_dir
from app.models.documents import CATALOG_FORMAT, CATALOG_VERSION, CatalogEntry, CatalogHeader
from app.services.algebra import canonical_key, validate
from app.services.catalog import AlgebraCatalog, CatalogItem, merge_catalogs


logger = logging.getLogger(__name__)


def _dump_line(payload: dict[str, Any]) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _serialize_item(item: CatalogItem) -> dict[str, Any]:
    entry = CatalogEntry(
        key=item.key,
        tags=list(item.tags),
        structure=item.structure,
        name=item.algebra.name,
        size=item.algebra.size,
        bottom=item.algebra.bottom,
        top=item.algebra.top,
        meet=[list(row) for row in item.algebra.meet],
        join=[list(row) for row in item.algebra.join],
        mono=[list(row) for row in item.algebra.mono],
        impl=[list(row) for row in item.algebra.impl],
    )
    return entry.model_dump(mode="json")


def dumps_catalog(catalog: AlgebraCatalog) -> str:
    header = CatalogHeader(
        size_bound=catalog.size_bound,
        count=len(catalog),
        statistics=list(catalog.statistics),
    )
    lines = [_dump_line(header.model_dump(mode="json"))]
    lines.extend(_dump_line(_serialize_item(item)) for item in catalog.items)
    return "\n".join(lines) + "\n"


def save_catalog(catalog: AlgebraCatalog, path: Path) -> Path:
    ensure_parent_dir(path)
    path.write_text(dumps_catalog(catalog), encoding="utf-8")
    logger.info("wrote %d algebras to %s", len(catalog), path)
    return path


def _parse_json(raw: str, line: int) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CatalogFormatError(exc.msg, line=line, column=exc.colno) from exc


def _parse_header(raw: str) -> CatalogHeader:
    payload = _parse_json(raw, 1)
    if not isinstance(payload, dict) or payload.get("format") != CATALOG_FORMAT:
        raise CatalogFormatError(f"first line must be a {CATALOG_FORMAT} header", line=1)
    if payload.get("version") != CATALOG_VERSION:
        raise CatalogFormatError(f"unsupported catalog version {payload.get('version')!r}", line=1)
    try:
        return CatalogHeader.model_validate(payload)
    except ValidationError as exc:
        raise CatalogFormatError(f"malformed header: {exc.errors()[0]['msg']}", line=1) from exc


def _parse_entry(raw: str, line: int) -> CatalogItem:
    payload = _parse_json(raw, line)
    try:
        entry = CatalogEntry.model_validate(payload)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise CatalogFormatError(f"{location}: {first['msg']}", line=line) from exc

    try:
        algebra = entry.to_algebra(normalized=False)
    except StructuralError as exc:
        raise CatalogFormatError(f"entry {entry.key}: {'; '.join(exc.problems)}", line=line) from exc

    report = validate(algebra)
    if not report.ok:
        failed = ", ".join(v.axiom for v in report.violations)
        raise CatalogFormatError(f"entry {entry.key} fails {failed}", line=line)
    if canonical_key(algebra) != entry.key:
        raise CatalogFormatError(f"entry {entry.key} does not match its canonical key", line=line)

    return CatalogItem(
        key=entry.key,
        algebra=algebra,
        structure=entry.structure,
        tags=tuple(entry.tags),
    )


def loads_catalog(text: str) -> AlgebraCatalog:
    lines = text.splitlines()
    if not lines:
        raise CatalogFormatError("empty catalog", line=1)

    header = _parse_header(lines[0])
    items = []
    seen: set[str] = set()
    for number, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            raise CatalogFormatError("blank line", line=number)
        item = _parse_entry(raw, number)
        if item.key in seen:
            raise CatalogFormatError(f"duplicate key {item.key}", line=number)
        seen.add(item.key)
        items.append(item)

    if len(items) != header.count:
        raise CatalogFormatError(
            f"header announces {header.count} entries, found {len(items)}",
            line=len(lines),
        )
    ordered = sorted(items, key=lambda item: (item.algebra.size, item.key))
    if ordered != items:
        raise CatalogFormatError("entries are not in canonical order", line=2)
    return AlgebraCatalog(header.size_bound, tuple(items), tuple(header.statistics))


def load_catalog(path: Path) -> AlgebraCatalog:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"Cannot read catalog {path}: {exc.strerror}") from exc
    catalog = loads_catalog(text)
    logger.info("loaded %d algebras from %s", len(catalog), path)
    return catalog


def load_and_merge(paths: list[Path]) -> AlgebraCatalog:
    return merge_catalogs([load_catalog(path) for path in paths])

import os
from pathlib import Path

from app.core.config import settings
from app.core.errors import InputError


CATALOG_FILE_TEMPLATE = "catalog-{size}.jsonl"


def get_catalog_dir() -> Path:
    # The process environment wins over the settings snapshot taken at import.
    configured = os.getenv("RLW_CATALOG_DIR") or settings.RLW_CATALOG_DIR
    if not configured:
        raise InputError("Missing catalog directory. Set RLW_CATALOG_DIR.")
    return Path(configured)


def default_catalog_path(size_bound: int) -> Path:
    return get_catalog_dir() / CATALOG_FILE_TEMPLATE.format(size=size_bound)


def find_catalog_covering(size_max: int) -> Path | None:
    """Smallest stored catalog whose bound reaches `size_max`, if any."""
    catalog_dir = get_catalog_dir()
    if not catalog_dir.is_dir():
        return None

    for bound in range(size_max, settings.CATALOG_MAX_SIZE + 1):
        candidate = catalog_dir / CATALOG_FILE_TEMPLATE.format(size=bound)
        if candidate.is_file():
            return candidate
    return None


def ensure_parent_dir(path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path

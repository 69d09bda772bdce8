import json
from pathlib import Path

import pytest

from app.core.config import settings
from app.core.errors import CatalogFormatError, InputError, InvalidSystemError
from app.core.storage import find_catalog_covering, get_catalog_dir
from app.models.documents import AlgebraDocument
from app.repositories.catalog_repository import (
    dumps_catalog,
    load_and_merge,
    load_catalog,
    loads_catalog,
    save_catalog,
)
from app.repositories.document_repository import (
    algebra_from_payload,
    limit_document,
    load_algebra,
    load_inverse_system,
    load_topology,
    save_algebra,
)
from app.services.catalog import generate, generate_up_to
from app.services.limits import inverse_limit


@pytest.fixture(scope="module")
def catalog_text(small_catalog) -> str:
    return dumps_catalog(small_catalog)


def edit_line(text: str, number: int, edit) -> str:
    lines = text.splitlines()
    payload = json.loads(lines[number - 1])
    edit(payload)
    lines[number - 1] = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return "\n".join(lines) + "\n"


def test_catalog_text_round_trips(small_catalog, catalog_text):
    loaded = loads_catalog(catalog_text)
    assert loaded == small_catalog
    assert dumps_catalog(loaded) == catalog_text


def test_header_line(catalog_text, small_catalog):
    header = json.loads(catalog_text.splitlines()[0])
    assert header["format"] == "rlw-catalog"
    assert header["version"] == 1
    assert header["count"] == len(small_catalog)


def test_tampered_table_names_the_entry(catalog_text):
    entry = json.loads(catalog_text.splitlines()[3])

    def tamper(payload):
        payload["mono"][1][1] = 0 if payload["mono"][1][1] else 1

    with pytest.raises(CatalogFormatError) as caught:
        loads_catalog(edit_line(catalog_text, 4, tamper))
    assert entry["key"] in caught.value.detail
    assert caught.value.line == 4


def test_wrong_key_is_rejected(catalog_text):
    def rekey(payload):
        payload["key"] = "00"

    with pytest.raises(CatalogFormatError, match="canonical key"):
        loads_catalog(edit_line(catalog_text, 2, rekey))


def test_invalid_json_reports_line_and_column(catalog_text):
    lines = catalog_text.splitlines()
    lines[2] = lines[2][:10]
    with pytest.raises(CatalogFormatError) as caught:
        loads_catalog("\n".join(lines) + "\n")
    assert caught.value.line == 3
    assert caught.value.column is not None


def test_header_checks(catalog_text):
    with pytest.raises(CatalogFormatError, match="header"):
        loads_catalog(edit_line(catalog_text, 1, lambda p: p.update(format="other")))
    with pytest.raises(CatalogFormatError, match="version"):
        loads_catalog(edit_line(catalog_text, 1, lambda p: p.update(version=2)))
    with pytest.raises(CatalogFormatError, match="announces"):
        loads_catalog(edit_line(catalog_text, 1, lambda p: p.update(count=p["count"] + 1)))


def test_entry_order_and_duplicates(catalog_text):
    lines = catalog_text.splitlines()
    swapped = [lines[0], lines[2], lines[1], *lines[3:]]
    with pytest.raises(CatalogFormatError, match="canonical order"):
        loads_catalog("\n".join(swapped) + "\n")

    doubled = [lines[0], lines[1], lines[1], *lines[2:-1]]
    with pytest.raises(CatalogFormatError, match="duplicate"):
        loads_catalog("\n".join(doubled) + "\n")


def test_empty_catalog_text():
    with pytest.raises(CatalogFormatError):
        loads_catalog("")


def test_save_load_and_merge(tmp_path):
    first = save_catalog(generate_up_to(2), tmp_path / "nested" / "a.jsonl")
    second = save_catalog(generate(3), tmp_path / "b.jsonl")
    assert load_catalog(first).size_bound == 2
    merged = load_and_merge([first, second])
    assert len(merged) == 4
    assert merged.size_bound == 3


def test_missing_catalog_is_input_error(tmp_path):
    with pytest.raises(InputError):
        load_catalog(tmp_path / "absent.jsonl")


def test_algebra_file_round_trip(tmp_path, g3):
    path = save_algebra(g3, tmp_path / "chain.json")
    assert load_algebra(path) == g3
    assert load_algebra(path).name == "G3"


def test_unnamed_algebra_takes_file_stem(g3, tmp_path):
    payload = AlgebraDocument.from_algebra(g3).model_dump(exclude_none=True)
    path = tmp_path / "three.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    assert load_algebra(path).name == "three"


def test_algebra_payload_errors(g3):
    payload = AlgebraDocument.from_algebra(g3).model_dump()
    with pytest.raises(InputError, match="colour"):
        algebra_from_payload({**payload, "colour": "red"})
    with pytest.raises(InputError):
        algebra_from_payload({**payload, "meet": [[0, 0, 0]]})


def test_malformed_json_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(InputError, match="line 1"):
        load_algebra(path)


def test_topology_file(tmp_path):
    path = tmp_path / "topology.json"
    path.write_text(json.dumps({"n": 3, "min_nbhd": [[0], [1, 2], [1, 2]]}), encoding="utf-8")
    topology = load_topology(path)
    assert topology.to_lists() == [[0], [1, 2], [1, 2]]


def system_payload(g3, g2, image):
    return {
        "poset": {"elements": ["big", "small"], "leq": [["small", "big"]]},
        "algebras": {
            "big": AlgebraDocument.from_algebra(g3).model_dump(exclude_none=True),
            "small": AlgebraDocument.from_algebra(g2).model_dump(exclude_none=True),
        },
        "transitions": [{"from": "big", "to": "small", "map": image}],
    }


def test_inverse_system_file(tmp_path, g3, g2):
    path = tmp_path / "system.json"
    path.write_text(json.dumps(system_payload(g3, g2, [0, 1, 1])), encoding="utf-8")
    limit = inverse_limit(load_inverse_system(path))
    document = limit_document(limit)
    assert document.indices == ["big", "small"]
    assert document.threads == [[0, 0], [1, 1], [2, 1]]


def test_inverse_system_with_bad_map(tmp_path, g3, g2):
    path = tmp_path / "system.json"
    path.write_text(json.dumps(system_payload(g3, g2, [0, 0, 1])), encoding="utf-8")
    with pytest.raises(InvalidSystemError):
        load_inverse_system(path)


def test_inverse_system_with_unknown_index(tmp_path, g3, g2):
    payload = system_payload(g3, g2, [0, 1, 1])
    payload["transitions"][0]["to"] = "elsewhere"
    path = tmp_path / "system.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    with pytest.raises(InputError):
        load_inverse_system(path)


def test_catalog_dir_follows_the_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("RLW_CATALOG_DIR", str(tmp_path))
    assert get_catalog_dir() == tmp_path
    monkeypatch.delenv("RLW_CATALOG_DIR")
    assert get_catalog_dir() == Path(settings.RLW_CATALOG_DIR)


def test_smallest_covering_catalog_is_found(tmp_path, monkeypatch):
    monkeypatch.setenv("RLW_CATALOG_DIR", str(tmp_path))
    assert find_catalog_covering(2) is None
    (tmp_path / "catalog-3.jsonl").write_text("", encoding="utf-8")
    (tmp_path / "catalog-5.jsonl").write_text("", encoding="utf-8")
    assert find_catalog_covering(2) == tmp_path / "catalog-3.jsonl"
    assert find_catalog_covering(4) == tmp_path / "catalog-5.jsonl"
    assert find_catalog_covering(6) is None

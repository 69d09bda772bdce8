import json

import pytest
from click.testing import CliRunner

from app.main import cli
from app.models.documents import AlgebraDocument


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture(autouse=True)
def catalog_dir(tmp_path, monkeypatch):
    directory = tmp_path / "catalogs"
    monkeypatch.setenv("RLW_CATALOG_DIR", str(directory))
    return directory


def test_validate_accepts_chain(runner, write_algebra, g3):
    result = runner.invoke(cli, ["validate", str(write_algebra(g3))])
    assert result.exit_code == 0, result.output
    assert "residuated lattice of size 3" in result.output


def test_validate_rejects_broken_residual(runner, tmp_path, g3):
    payload = AlgebraDocument.from_algebra(g3, "broken").model_dump()
    payload["impl"][2][0] = 1
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(payload), encoding="utf-8")

    result = runner.invoke(cli, ["--format", "json", "validate", str(path)])
    assert result.exit_code == 2
    report = json.loads(result.stdout)
    assert not report["ok"]
    assert "residuation" in {v["axiom"] for v in report["violations"]}


def test_malformed_file_is_usage_error(runner, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("[", encoding="utf-8")
    result = runner.invoke(cli, ["validate", str(path)])
    assert result.exit_code == 2
    assert "error:" in result.output


def test_filters_json(runner, write_algebra, b4):
    result = runner.invoke(cli, ["--format", "json", "filters", str(write_algebra(b4))])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert [row["filter"] for row in payload["filters"]] == [[3], [1, 3], [2, 3], [0, 1, 2, 3]]
    assert payload["congruence_count"] == 4
    full = payload["filters"][-1]
    assert sorted(full["decomposition"]) == [[1, 3], [2, 3]]


def test_filters_dot(runner, write_algebra, g3):
    result = runner.invoke(cli, ["filters", "--dot", str(write_algebra(g3))])
    assert result.exit_code == 0
    assert "digraph" in result.output


def test_zltrl_counts_topologies(runner, write_algebra, g3):
    result = runner.invoke(cli, ["zltrl", str(write_algebra(g3))])
    assert result.exit_code == 0, result.output
    assert "3 topologies" in result.output


def test_topology_of_system(runner, write_algebra, g3):
    result = runner.invoke(cli, ["topology", str(write_algebra(g3)), "--system", "1,2;0,1,2"])
    assert result.exit_code == 0, result.output
    assert "N(1) = {1,2}" in result.output
    assert "separation: none" in result.output


def test_topology_rejects_non_filter(runner, write_algebra, g3):
    result = runner.invoke(cli, ["topology", str(write_algebra(g3)), "--system", "0,2"])
    assert result.exit_code == 2
    assert "not a filter" in result.output


def test_completion(runner, write_algebra, g3):
    result = runner.invoke(cli, ["--format", "json", "completion", str(write_algebra(g3))])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["limit_size"] == 3
    assert sorted(payload["embedding"]) == [0, 1, 2]


def test_analyze_boolean(runner, write_algebra, b4):
    result = runner.invoke(cli, ["--format", "json", "analyze", str(write_algebra(b4))])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert not payload["structure"]["is_directly_indecomposable"]
    assert payload["structure"]["dimension"] == 0
    assert payload["global_system"]["applicable"] is False
    assert "boolean" in payload["tags"]


def test_analyze_text(runner, write_algebra, g4):
    result = runner.invoke(cli, ["analyze", str(write_algebra(g4))])
    assert result.exit_code == 0, result.output
    assert "dimension" in result.output
    assert "subdirectly irreducible" in result.output


def write_system(tmp_path, g3, g2):
    payload = {
        "poset": {"elements": ["big", "small"], "leq": [["small", "big"]]},
        "algebras": {
            "big": AlgebraDocument.from_algebra(g3).model_dump(exclude_none=True),
            "small": AlgebraDocument.from_algebra(g2).model_dump(exclude_none=True),
        },
        "transitions": [{"from": "big", "to": "small", "map": [0, 1, 1]}],
    }
    path = tmp_path / "system.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_limit_with_restriction(runner, tmp_path, g3, g2):
    path = write_system(tmp_path, g3, g2)
    result = runner.invoke(cli, ["--format", "json", "limit", str(path), "--restrict", "big"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["threads"] == [[0, 0], [1, 1], [2, 1]]
    assert payload["restricted"]["indices"] == ["big"]


def test_limit_rejects_non_cofinal_restriction(runner, tmp_path, g3, g2):
    path = write_system(tmp_path, g3, g2)
    result = runner.invoke(cli, ["limit", str(path), "--restrict", "small"])
    assert result.exit_code == 2
    assert "upper bound" in result.output


def test_catalog_generate_and_stats(runner, tmp_path):
    out = tmp_path / "catalog-3.jsonl"
    result = runner.invoke(cli, ["catalog", "generate", "--size", "3", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert out.is_file()

    result = runner.invoke(cli, ["--format", "json", "catalog", "stats", str(out)])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["count"] == 4
    assert payload["by_size"] == {"1": 1, "2": 1, "3": 2}


def test_catalog_generate_defaults_to_catalog_dir(runner, catalog_dir):
    result = runner.invoke(cli, ["catalog", "generate", "--size", "2"])
    assert result.exit_code == 0, result.output
    assert (catalog_dir / "catalog-2.jsonl").is_file()


def test_catalog_size_limit(runner):
    result = runner.invoke(cli, ["catalog", "generate", "--size", "9"])
    assert result.exit_code == 2


def test_verify_all_suites(runner):
    result = runner.invoke(cli, ["--format", "json", "verify", "--suite", "all", "--size-max", "3"])
    assert result.exit_code == 0, result.output
    reports = [json.loads(line) for line in result.stdout.splitlines()]
    assert [report["suite"] for report in reports] == [
        "algebra",
        "filters",
        "topology",
        "limits",
        "analysis",
        "catalog",
    ]
    for report in reports:
        assert report["algebra_count"] == 4
        assert all(check["status"] != "fail" for check in report["checks"])
    statuses = {check["status"] for report in reports for check in report["checks"]}
    assert "out-of-scope" in statuses


def test_verify_rejects_short_catalog(runner, tmp_path):
    out = tmp_path / "catalog-2.jsonl"
    runner.invoke(cli, ["catalog", "generate", "--size", "2", "--out", str(out)])
    result = runner.invoke(cli, ["verify", "--suite", "filters", "--size-max", "3", "--catalog", str(out)])
    assert result.exit_code == 2
    assert "covers sizes up to 2" in result.output

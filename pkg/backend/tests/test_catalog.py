import pytest

from app.core.errors import SizeBoundExceededError
from app.services.algebra import canonical_key, validate
from app.services.catalog import (
    enumerate_lattices,
    generate,
    generate_naive,
    generate_up_to,
    merge_catalogs,
    monoid_tables,
)


@pytest.mark.parametrize(("n", "expected"), [(1, 1), (2, 1), (3, 2)])
def test_small_sizes(n, expected):
    assert len(generate(n)) == expected


@pytest.mark.parametrize(("n", "expected"), [(1, 1), (2, 1), (3, 1), (4, 2), (5, 5), (6, 15)])
def test_lattice_counts(n, expected):
    assert len(enumerate_lattices(n)) == expected


def test_products_on_three_element_chain():
    (leq, meet, join), = enumerate_lattices(3)
    tables = list(monoid_tables(leq, meet, join))
    assert sorted(table[1][1] for table in tables) == [0, 1]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_orderly_and_naive_generators_agree(n):
    orderly = generate(n)
    naive = generate_naive(n)
    assert len(orderly) == len(naive)
    assert orderly.keys == {canonical_key(algebra) for algebra in naive}


def test_generation_is_deterministic():
    assert generate(4) == generate(4)


def test_entries_are_canonical_and_named(small_catalog):
    assert small_catalog.size_bound == 4
    for item in small_catalog:
        assert validate(item.algebra).ok
        assert canonical_key(item.algebra) == item.key
        assert item.structure.algebra_id == item.key
    names = [item.algebra.name for item in small_catalog if item.algebra.size == 3]
    assert names == ["RL3.1", "RL3.2"]


def test_statistics(small_catalog):
    by_size = {stats.size: stats for stats in small_catalog.statistics}
    assert sorted(by_size) == [1, 2, 3, 4]
    assert by_size[3].accepted == 2
    assert by_size[4].lattices == 2
    assert small_catalog.counts_by_size()[3] == 2


def test_trivial_entry(small_catalog):
    trivial = next(item for item in small_catalog if item.algebra.size == 1)
    assert trivial.structure.trivial
    assert "si" not in trivial.tags


def test_merge_is_a_union(small_catalog):
    merged = merge_catalogs([generate_up_to(2), generate(3), generate(4), generate(2)])
    assert merged == small_catalog
    assert merged.size_bound == 4


@pytest.mark.parametrize("n", [0, 7])
def test_size_bounds(n):
    with pytest.raises(SizeBoundExceededError):
        generate(n)


def test_naive_size_bound():
    with pytest.raises(SizeBoundExceededError):
        generate_naive(5)

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.errors import NotAHomomorphismError, StructuralError
from app.models.structures import Homomorphism
from app.services.algebra import (
    build_boolean,
    build_goedel_chain,
    build_lukasiewicz_chain,
    canonical_algebra,
    canonical_key,
    find_isomorphism,
    from_tables,
    kernel,
    normalize,
    product,
    relabel,
    validate,
)
from app.services.filters import enumerate_filters, quotient


@pytest.mark.parametrize(
    "algebra",
    [build_goedel_chain(n) for n in range(1, 6)]
    + [build_lukasiewicz_chain(n) for n in range(2, 6)]
    + [build_boolean(k) for k in range(0, 3)],
    ids=lambda a: a.label(),
)
def test_builders_validate(algebra):
    report = validate(algebra)
    assert report.ok, report.violations
    assert algebra.bottom == 0
    assert algebra.top == algebra.size - 1


def test_trivial_algebra_is_reported_trivial():
    report = validate(build_goedel_chain(1))
    assert report.ok
    assert report.trivial


def test_ragged_table_is_structural_error():
    with pytest.raises(StructuralError) as caught:
        from_tables(
            2,
            meet=[[0, 0], [0]],
            join=[[0, 1], [1, 1]],
            mono=[[0, 0], [0, 1]],
            impl=[[1, 1], [0, 1]],
            bottom=0,
            top=1,
        )
    assert any("row 1" in problem for problem in caught.value.problems)


def test_out_of_range_entry_is_structural_error():
    with pytest.raises(StructuralError):
        from_tables(
            2,
            meet=[[0, 0], [0, 1]],
            join=[[0, 1], [1, 1]],
            mono=[[0, 0], [0, 2]],
            impl=[[1, 1], [0, 1]],
            bottom=0,
            top=1,
        )


def test_residuation_failure_names_a_witness(g3):
    impl = [list(row) for row in g3.impl]
    impl[2][0] = 1
    broken = from_tables(3, g3.meet, g3.join, g3.mono, impl, 0, 2)
    report = validate(broken)
    assert not report.ok
    assert "residuation" in {v.axiom for v in report.violations}


def test_normalize_undoes_a_swap(g2):
    swapped = relabel(g2, [1, 0])
    assert (swapped.bottom, swapped.top) == (1, 0)
    assert normalize(swapped) == g2


def test_square_of_two_element_chain_is_boolean(g2, b4):
    square = product(g2, g2)
    assert validate(square).ok
    assert find_isomorphism(square, b4) is not None
    assert canonical_key(square) == canonical_key(b4)


def test_validate_and_canonical_key_scan_every_tuple(g3):
    report = validate(g3)
    assert report.ok
    assert report.size == 3
    assert canonical_key(g3) == canonical_key(relabel(g3, [2, 1, 0]))
    assert canonical_algebra(g3).size == 3


def test_different_algebras_have_different_keys(g3, l3):
    assert find_isomorphism(g3, l3) is None
    assert canonical_key(g3) != canonical_key(l3)


def test_kernel_of_quotient_is_the_filter(g3):
    for f in enumerate_filters(g3):
        _, projection = quotient(g3, f)
        assert kernel(projection) == f


def test_kernel_rejects_non_homomorphism(g3, g2):
    with pytest.raises(NotAHomomorphismError):
        kernel(Homomorphism(g3, g2, (0, 0, 1)))


class TestCanonicalForm:
    @settings(max_examples=40, deadline=None)
    @given(data=st.data())
    def test_key_survives_relabelling(self, small_catalog, data):
        algebra = data.draw(st.sampled_from(small_catalog.algebras()))
        perm = data.draw(st.permutations(range(algebra.size)))
        renamed = relabel(algebra, perm)
        assert validate(renamed).ok
        assert canonical_key(renamed) == canonical_key(algebra)
        assert find_isomorphism(renamed, algebra) is not None

    @settings(max_examples=25, deadline=None)
    @given(data=st.data())
    def test_canonical_algebra_is_a_fixed_point(self, small_catalog, data):
        algebra = data.draw(st.sampled_from(small_catalog.algebras()))
        representative = canonical_algebra(algebra)
        assert canonical_algebra(representative) == representative


class TestMutations:
    @settings(max_examples=40, deadline=None)
    @given(data=st.data())
    def test_changing_one_product_entry_breaks_the_axioms(self, small_catalog, data):
        algebra = data.draw(st.sampled_from([a for a in small_catalog.algebras() if a.size > 1]))
        x = data.draw(st.integers(0, algebra.size - 1))
        y = data.draw(st.integers(0, algebra.size - 1))
        value = data.draw(st.integers(0, algebra.size - 1).filter(lambda v: v != algebra.mono[x][y]))
        mono = [list(row) for row in algebra.mono]
        mono[x][y] = value
        mutated = from_tables(
            algebra.size, algebra.meet, algebra.join, mono, algebra.impl, algebra.bottom, algebra.top
        )
        assert not validate(mutated).ok

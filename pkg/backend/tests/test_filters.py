import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.errors import NotACongruenceError, PreconditionError, SizeBoundExceededError
from app.models.structures import CongruenceRelation
from app.services.algebra import build_goedel_chain, find_isomorphism, validate
from app.services.filters import (
    congruence_of_filter,
    enumerate_congruences,
    enumerate_filters,
    enumerate_filters_naive,
    filter_lattice,
    filter_of_congruence,
    full_filter,
    generated_filter,
    irredundant_decomposition,
    irredundant_decompositions_naive,
    is_deductive_system,
    is_filter,
    join_irreducible_filters,
    make_filter,
    prime_filters,
    quotient,
    top_filter,
)


def as_lists(filters):
    return [f.to_list() for f in filters]


def test_goedel_chain_filters(g3):
    assert as_lists(enumerate_filters(g3)) == [[2], [1, 2], [0, 1, 2]]


def test_lukasiewicz_chain_has_two_filters(l3):
    assert as_lists(enumerate_filters(l3)) == [[2], [0, 1, 2]]


def test_boolean_filters(b4):
    assert as_lists(enumerate_filters(b4)) == [[3], [1, 3], [2, 3], [0, 1, 2, 3]]


def test_make_filter_rejects_non_filter(g3):
    with pytest.raises(PreconditionError):
        make_filter(g3, [0, 2])


def test_generated_filter(b4, g3):
    assert generated_filter(b4, [1, 2]) == full_filter(b4)
    assert generated_filter(b4, [1]).to_list() == [1, 3]
    assert generated_filter(g3, []) == top_filter(g3)


def test_prime_filters_are_proper(g3, b4):
    assert as_lists(prime_filters(g3)) == [[2], [1, 2]]
    assert as_lists(prime_filters(b4)) == [[1, 3], [2, 3]]


def meet_of_primes_above(algebra, f):
    mask = algebra.full_mask
    for p in prime_filters(algebra):
        if f.issubset(p):
            mask &= p.mask
    return mask


def test_proper_filters_are_meets_of_primes(g3, b4):
    assert meet_of_primes_above(b4, make_filter(b4, [3])) == make_filter(b4, [3]).mask
    assert meet_of_primes_above(b4, make_filter(b4, [1, 3])) == make_filter(b4, [1, 3]).mask
    assert meet_of_primes_above(g3, make_filter(g3, [2])) == make_filter(g3, [2]).mask


def test_quotient_by_middle_filter_is_two_element_chain(g3, g2):
    factor, projection = quotient(g3, make_filter(g3, [1, 2]))
    assert factor.size == 2
    assert projection.map == (0, 1, 1)
    assert validate(factor).ok
    assert find_isomorphism(factor, g2) is not None


def test_quotient_by_full_filter_is_trivial(b4):
    factor, _ = quotient(b4, full_filter(b4))
    assert factor.is_trivial


def test_non_congruence_partition_is_rejected(g3):
    with pytest.raises(NotACongruenceError):
        filter_of_congruence(CongruenceRelation.from_labels(g3, [0, 0, 1]))


def test_boolean_decomposition(b4):
    assert sorted(as_lists(join_irreducible_filters(b4))) == [[1, 3], [2, 3]]
    assert sorted(as_lists(irredundant_decomposition(b4, full_filter(b4)))) == [[1, 3], [2, 3]]


def test_top_filter_has_no_decomposition(b4):
    with pytest.raises(PreconditionError):
        irredundant_decomposition(b4, top_filter(b4))


def test_filter_lattice_size_bound():
    with pytest.raises(SizeBoundExceededError):
        filter_lattice(build_goedel_chain(9))


def test_filter_lattice_dot(b4):
    source = filter_lattice(b4).to_dot()
    assert source.startswith("// Filter lattice of B4")
    assert "rankdir=BT" in source


class TestFilterProperties:
    @settings(max_examples=30, deadline=None)
    @given(data=st.data())
    def test_fast_enumeration_matches_subset_scan(self, small_catalog, data):
        algebra = data.draw(st.sampled_from(small_catalog.algebras()))
        assert enumerate_filters(algebra) == enumerate_filters_naive(algebra)

    @settings(max_examples=30, deadline=None)
    @given(data=st.data())
    def test_filters_are_deductive_systems(self, small_catalog, data):
        algebra = data.draw(st.sampled_from(small_catalog.algebras()))
        mask = data.draw(st.integers(0, algebra.full_mask))
        assert is_filter(algebra, mask) == is_deductive_system(algebra, mask)

    @settings(max_examples=30, deadline=None)
    @given(data=st.data())
    def test_filters_and_congruences_correspond(self, small_catalog, data):
        algebra = data.draw(st.sampled_from(small_catalog.algebras()))
        filters = enumerate_filters(algebra)
        congruences = enumerate_congruences(algebra)
        assert len(filters) == len(congruences)
        assert {filter_of_congruence(theta) for theta in congruences} == set(filters)
        for f in filters:
            assert filter_of_congruence(congruence_of_filter(f)) == f

    @settings(max_examples=30, deadline=None)
    @given(data=st.data())
    def test_decompositions_are_unique(self, small_catalog, data):
        algebra = data.draw(st.sampled_from([a for a in small_catalog.algebras() if a.size > 1]))
        f = data.draw(st.sampled_from([g for g in enumerate_filters(algebra) if not g.is_trivial]))
        assert irredundant_decompositions_naive(algebra, f) == [irredundant_decomposition(algebra, f)]

    @settings(max_examples=30, deadline=None)
    @given(data=st.data())
    def test_join_irreducibles_have_one_lower_cover(self, small_catalog, data):
        algebra = data.draw(st.sampled_from(small_catalog.algebras()))
        lattice = filter_lattice(algebra)
        for f in join_irreducible_filters(algebra):
            assert len(lattice.lower_covers(f)) == 1

    @settings(max_examples=30, deadline=None)
    @given(data=st.data())
    def test_every_proper_filter_is_a_meet_of_primes(self, small_catalog, data):
        algebra = data.draw(st.sampled_from([a for a in small_catalog.algebras() if a.size > 1]))
        for f in enumerate_filters(algebra):
            if f.mask != algebra.full_mask:
                assert meet_of_primes_above(algebra, f) == f.mask

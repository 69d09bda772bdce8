import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.errors import NotDownDirectedError, StructuralError
from app.models.structures import FiniteTopology, SystemOfFilters
from app.services.filters import enumerate_filters, make_filter
from app.services.topology import (
    check_topological_algebra,
    closure,
    coset_openness,
    enumerate_zltrl,
    finite_index_topology,
    induce_topology,
    is_finitely_approximable,
    is_hausdorff,
    is_zero_dimensional,
    open_filter_system,
    open_sets,
    separation_axioms,
    simple_topology,
    specialization_dot,
    sup_topologies,
    systems_equivalent,
    zltrl_members,
)


def test_middle_filter_glues_its_coset(g3):
    topology = simple_topology(g3, make_filter(g3, [1, 2]))
    assert topology.min_nbhd == (frozenset({0}), frozenset({1, 2}), frozenset({1, 2}))
    assert open_sets(topology) == [frozenset(), frozenset({0}), frozenset({1, 2}), frozenset({0, 1, 2})]
    assert closure(topology, frozenset({1})) == frozenset({1, 2})


def test_separation_of_non_hausdorff_topology(g3):
    system = SystemOfFilters(g3, (make_filter(g3, [1, 2]),))
    report = separation_axioms(induce_topology(system))
    assert report.separation_class == "none"
    assert not is_hausdorff(g3, system)


def test_top_filter_gives_discrete_hausdorff_topology(g3):
    system = SystemOfFilters(g3, (make_filter(g3, [2]),))
    assert induce_topology(system).is_discrete
    assert is_hausdorff(g3, system)


def test_system_uses_its_minimum(g3):
    system = SystemOfFilters(g3, (make_filter(g3, [0, 1, 2]), make_filter(g3, [1, 2])))
    assert system.minimum.to_list() == [1, 2]
    assert induce_topology(system) == simple_topology(g3, make_filter(g3, [1, 2]))


def test_incomparable_filters_are_not_a_system(h5):
    with pytest.raises(NotDownDirectedError):
        SystemOfFilters(h5, (make_filter(h5, [2, 4]), make_filter(h5, [3, 4])))


def test_neighbourhoods_must_contain_their_point():
    with pytest.raises(StructuralError):
        FiniteTopology(2, (frozenset({1}), frozenset({1})))


def test_goedel_chain_has_three_linear_topologies(g3):
    assert len(enumerate_zltrl(g3)) == 3


def test_non_congruence_partition_is_not_continuous(g3):
    report = check_topological_algebra(g3, FiniteTopology.from_partition((0, 0, 1)))
    assert not report.ok
    assert report.operation is not None


def test_supremum_is_the_finer_topology():
    assert sup_topologies([FiniteTopology.discrete(3), FiniteTopology.antidiscrete(3)]).is_discrete


def test_supremum_of_prime_topologies_is_discrete(b4):
    first = simple_topology(b4, make_filter(b4, [1, 3]))
    second = simple_topology(b4, make_filter(b4, [2, 3]))
    assert not first.is_discrete and not second.is_discrete
    assert sup_topologies([first, second]).is_discrete


def test_equivalent_systems(g3):
    first = SystemOfFilters(g3, (make_filter(g3, [2]), make_filter(g3, [1, 2])))
    second = SystemOfFilters(g3, (make_filter(g3, [2]),))
    third = SystemOfFilters(g3, (make_filter(g3, [1, 2]),))
    assert systems_equivalent(first, second)
    assert not systems_equivalent(second, third)


def test_specialization_dot_links_glued_points(g3):
    source = specialization_dot(simple_topology(g3, make_filter(g3, [1, 2])))
    assert "1 -> 2" in source
    assert "2 -> 1" in source
    assert "0 ->" not in source


def test_finite_index_topology_is_discrete(b4, h5):
    for algebra in (b4, h5):
        assert finite_index_topology(algebra).is_discrete
        assert is_finitely_approximable(algebra)


class TestLinearTopologies:
    @settings(max_examples=30, deadline=None)
    @given(data=st.data())
    def test_one_topology_per_filter(self, small_catalog, data):
        algebra = data.draw(st.sampled_from(small_catalog.algebras()))
        members = zltrl_members(algebra)
        assert [f for f, _ in members] == enumerate_filters(algebra)
        for f, topology in members:
            assert is_zero_dimensional(topology)
            assert check_topological_algebra(algebra, topology).ok

    @settings(max_examples=30, deadline=None)
    @given(data=st.data())
    def test_open_filters_rebuild_the_topology(self, small_catalog, data):
        algebra = data.draw(st.sampled_from(small_catalog.algebras()))
        for _, topology in zltrl_members(algebra):
            assert induce_topology(open_filter_system(algebra, topology)) == topology

    @settings(max_examples=30, deadline=None)
    @given(data=st.data())
    def test_meet_of_filters_gives_the_supremum(self, small_catalog, data):
        algebra = data.draw(st.sampled_from(small_catalog.algebras()))
        f = data.draw(st.sampled_from(enumerate_filters(algebra)))
        g = data.draw(st.sampled_from(enumerate_filters(algebra)))
        joined = sup_topologies([simple_topology(algebra, f), simple_topology(algebra, g)])
        assert joined == simple_topology(algebra, f.intersection(g))

    @settings(max_examples=30, deadline=None)
    @given(data=st.data())
    def test_filters_and_cosets_share_openness(self, small_catalog, data):
        algebra = data.draw(st.sampled_from(small_catalog.algebras()))
        _, topology = data.draw(st.sampled_from(zltrl_members(algebra)))
        for f in enumerate_filters(algebra):
            report = coset_openness(algebra, topology, f)
            assert report.open == report.closed

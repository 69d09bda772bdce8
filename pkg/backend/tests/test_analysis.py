import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.errors import PreconditionError
from app.services.algebra import build_goedel_chain
from app.services.analysis import (
    dcc_report,
    dimension,
    factor_congruence_pairs,
    filter_form_agrees,
    global_system_topology_verdict,
    hausdorff_existence_verdict,
    is_directly_indecomposable,
    is_subdirectly_irreducible,
    monolith,
    permutability_check,
    structure_report,
    subvariety_tags,
    uniform_base_check,
)
from app.services.filters import enumerate_congruences, enumerate_filters, make_filter
from app.services.topology import simple_topology


def test_goedel_chain_monolith(g3):
    si, least = is_subdirectly_irreducible(g3)
    assert si
    assert least.to_list() == [1, 2]


def test_lukasiewicz_chain_is_simple(l3):
    report = structure_report(l3)
    assert report.is_simple
    assert report.monolith == [0, 1, 2]


def test_boolean_square_decomposes(b4):
    report = structure_report(b4)
    assert not report.is_subdirectly_irreducible
    assert not report.is_directly_indecomposable
    assert report.factor_pairs

    indecomposability = is_directly_indecomposable(b4)
    assert sorted(indecomposability.factor_pair) == [[1, 3], [2, 3]]
    assert filter_form_agrees(indecomposability)
    assert indecomposability.factor_pairs == report.factor_pairs


def test_indecomposable_but_not_irreducible(h5):
    assert monolith(h5) is None
    report = is_directly_indecomposable(h5)
    assert report.verdict
    assert not report.global_system_directed
    assert not report.no_trivial_finite_intersection
    assert report.no_factor_congruences
    assert not filter_form_agrees(report)

    structure = structure_report(h5)
    assert structure.is_directly_indecomposable
    assert not structure.is_subdirectly_irreducible


def test_trivial_algebra_conventions():
    trivial = build_goedel_chain(1)
    report = structure_report(trivial)
    assert report.trivial
    assert report.is_subdirectly_irreducible and report.is_directly_indecomposable
    assert report.dimension == 0
    with pytest.raises(PreconditionError):
        dimension(trivial)
    with pytest.raises(PreconditionError):
        is_directly_indecomposable(trivial)
    assert hausdorff_existence_verdict(trivial).skipped
    assert not global_system_topology_verdict(trivial).applicable


@pytest.mark.parametrize(
    ("fixture", "expected"),
    [("g2", 0), ("g3", 1), ("g4", 2), ("b4", 0), ("h5", 1)],
)
def test_dimension(request, fixture, expected):
    assert dimension(request.getfixturevalue(fixture)) == expected


def test_global_topology_of_chain(g3):
    verdict = global_system_topology_verdict(g3)
    assert verdict.applicable
    assert verdict.subdirectly_irreducible
    assert verdict.non_discrete
    assert verdict.largest_non_discrete == simple_topology(g3, make_filter(g3, [1, 2])).to_lists()


def test_global_topology_of_simple_algebra(l3):
    verdict = global_system_topology_verdict(l3)
    assert verdict.applicable
    assert verdict.non_discrete
    assert verdict.global_topology == [[0, 1, 2]] * 3


def test_global_topology_not_applicable(b4, h5):
    assert global_system_topology_verdict(b4).reason == "not directly indecomposable"
    assert global_system_topology_verdict(h5).reason == "nontrivial filters are not down-directed"


def test_hausdorff_scan_of_chain(g3):
    verdict = hausdorff_existence_verdict(g3)
    assert verdict.zltrl_count == 3
    assert verdict.hausdorff_count == 1
    assert verdict.nontrivial_hausdorff_count == 0
    assert verdict.finitely_approximable


def test_uniform_base_names_the_failing_condition():
    relation = frozenset({(0, 0), (1, 1), (0, 1)})
    report = uniform_base_check(2, [relation])
    assert not report.ok
    assert report.diagonal.passed
    assert not report.symmetry.passed
    assert report.symmetry.witness == [[[0, 0], [0, 1], [1, 1]]]


def test_dcc_on_chain(g4):
    report = dcc_report(g4, [enumerate_filters(g4)])
    assert report.ok
    assert report.longest_descending_chain == 4
    assert report.families[0].is_chain
    assert report.families[0].minimum == [3]


def test_tags(g3, l3, b4, h5):
    assert {"chain", "heyting", "goedel", "bl", "mtl", "si"} <= set(subvariety_tags(g3))
    assert {"chain", "mv", "involutive", "simple", "si"} <= set(subvariety_tags(l3))
    assert "boolean" in subvariety_tags(b4)
    h5_tags = set(subvariety_tags(h5))
    assert "heyting" in h5_tags
    assert not h5_tags & {"chain", "si", "boolean"}


class TestStructure:
    @settings(max_examples=30, deadline=None)
    @given(data=st.data())
    def test_irreducible_implies_indecomposable(self, small_catalog, data):
        algebra = data.draw(st.sampled_from(small_catalog.algebras()))
        report = structure_report(algebra)
        if report.is_subdirectly_irreducible:
            assert report.is_directly_indecomposable
        assert report.is_directly_indecomposable == (not report.factor_pairs)

    @settings(max_examples=30, deadline=None)
    @given(data=st.data())
    def test_congruences_permute_and_form_a_uniform_base(self, small_catalog, data):
        algebra = data.draw(st.sampled_from(small_catalog.algebras()))
        congruences = enumerate_congruences(algebra)
        assert permutability_check(algebra).ok
        assert uniform_base_check(algebra.size, [theta.pairs for theta in congruences]).ok

    @settings(max_examples=30, deadline=None)
    @given(data=st.data())
    def test_factor_pairs_are_symmetric_in_size(self, small_catalog, data):
        algebra = data.draw(st.sampled_from([a for a in small_catalog.algebras() if a.size > 1]))
        for theta, other in factor_congruence_pairs(algebra):
            assert len(theta.blocks) * len(other.blocks) == algebra.size

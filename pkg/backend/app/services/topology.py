import logging
from collections.abc import Callable, Sequence

from graphviz import Digraph

from app.core.config import settings
from app.core.errors import PreconditionError, TheoremViolation
from app.models.reports import ContinuityReport, FilterTopologyReport, SeparationReport
from app.models.structures import (
    OPERATIONS,
    FilterSet,
    FiniteTopology,
    ResiduatedLattice,
    SystemOfFilters,
)
from app.services.combinatorics import set_partitions
from app.services.filters import coset, enumerate_filters, is_filter


logger = logging.getLogger(__name__)


def _subsets(n: int):
    for mask in range(1 << n):
        yield frozenset(x for x in range(n) if mask >> x & 1)


def open_sets(topology: FiniteTopology) -> list[frozenset[int]]:
    return [subset for subset in _subsets(topology.n) if topology.is_open(subset)]


def closure(topology: FiniteTopology, subset: frozenset[int]) -> frozenset[int]:
    # x is in the closure iff its minimal neighbourhood meets the set.
    return frozenset(x for x in range(topology.n) if topology.min_nbhd[x] & subset)


def _opens_by_quantifier(system: SystemOfFilters) -> list[frozenset[int]]:
    algebra = system.algebra
    cosets = {
        (x, f.mask): coset(algebra, f, x) for f in system.family for x in algebra.carrier
    }
    return [
        subset
        for subset in _subsets(algebra.size)
        if all(any(cosets[(x, f.mask)] <= subset for f in system.family) for x in subset)
    ]


def induce_topology(system: SystemOfFilters) -> FiniteTopology:
    algebra = system.algebra
    smallest = system.minimum
    topology = FiniteTopology(
        algebra.size,
        tuple(coset(algebra, smallest, x) for x in algebra.carrier),
    )

    if algebra.size <= settings.SELF_TEST_MAX_SIZE:
        if open_sets(topology) != _opens_by_quantifier(system):
            raise TheoremViolation(
                "induced topology matches its defining quantifier",
                witness=[f.to_list() for f in system.family],
            )
        logger.debug("induced topology self-test passed for %s", algebra.label())
    return topology


def simple_topology(algebra: ResiduatedLattice, f: FilterSet) -> FiniteTopology:
    return induce_topology(SystemOfFilters(algebra, (f,)))


def is_zero_dimensional(topology: FiniteTopology) -> bool:
    return all(
        x in topology.min_nbhd[y] for x in range(topology.n) for y in topology.min_nbhd[x]
    )


def specialization_preorder(topology: FiniteTopology) -> frozenset[tuple[int, int]]:
    """x <= y iff x lies in the closure of {y}, i.e. y is in N(x)."""
    return frozenset((x, y) for x in range(topology.n) for y in topology.min_nbhd[x])


def specialization_dot(topology: FiniteTopology, labels: Sequence[str] | None = None) -> str:
    dot = Digraph(comment="Specialization preorder", strict=True)
    dot.attr(rankdir="BT")
    for x in range(topology.n):
        dot.node(str(x), labels[x] if labels else str(x))
    for x, y in sorted(specialization_preorder(topology)):
        if x != y:
            dot.edge(str(x), str(y))
    return dot.source


def separation_axioms(topology: FiniteTopology) -> SeparationReport:
    opens = open_sets(topology)
    points = range(topology.n)
    containing = {x: [u for u in opens if x in u] for x in points}

    def separated(x: int, y: int) -> bool:
        return any(y not in u for u in containing[x])

    pairs = [(x, y) for x in points for y in points if x != y]
    t0 = all(separated(x, y) or separated(y, x) for x, y in pairs)
    t1 = all(separated(x, y) and separated(y, x) for x, y in pairs)
    t2 = all(
        any(not (u & v) for u in containing[x] for v in containing[y]) for x, y in pairs
    )

    strongest = "T2" if t2 else "T1" if t1 else "T0" if t0 else "none"
    return SeparationReport(t0=t0, t1=t1, t2=t2, separation_class=strongest)


def check_topological_algebra(algebra: ResiduatedLattice, topology: FiniteTopology) -> ContinuityReport:
    if topology.n != algebra.size:
        raise PreconditionError("Topology and algebra have different carriers")

    nbhd = topology.min_nbhd
    for operation in OPERATIONS:
        table = algebra.table(operation)
        for a in algebra.carrier:
            for b in algebra.carrier:
                target = nbhd[table[a][b]]
                for x in nbhd[a]:
                    for y in nbhd[b]:
                        if table[x][y] not in target:
                            return ContinuityReport(ok=False, operation=operation, witness=[a, b])
    return ContinuityReport(ok=True)


def separation_class(algebra: ResiduatedLattice, topology: FiniteTopology) -> str:
    report = separation_axioms(topology)
    if is_zero_dimensional(topology) and check_topological_algebra(algebra, topology):
        if not report.t0 == report.t1 == report.t2:
            raise TheoremViolation("T0, T1 and T2 coincide", witness=report.model_dump())
    return report.separation_class


def is_hausdorff(algebra: ResiduatedLattice, system: SystemOfFilters) -> bool:
    topology = induce_topology(system)
    report = separation_axioms(topology)
    trivial_meet = system.intersection_mask == 1 << algebra.top
    if not report.t0 == report.t1 == report.t2 == trivial_meet:
        raise TheoremViolation(
            "separation axioms agree with a trivial intersection",
            witness={"family": [f.to_list() for f in system.family], **report.model_dump()},
        )
    return report.t2


def zltrl_members(algebra: ResiduatedLattice) -> list[tuple[FilterSet, FiniteTopology]]:
    members = []
    for labels in set_partitions(algebra.size):
        candidate = FiniteTopology.from_partition(labels)
        if not check_topological_algebra(algebra, candidate):
            continue
        top_block = candidate.min_nbhd[algebra.top]
        mask = sum(1 << x for x in top_block)
        if not is_filter(algebra, mask):
            raise TheoremViolation("block of top is a filter", witness=sorted(top_block))
        f = FilterSet(algebra, mask)
        if simple_topology(algebra, f) != candidate:
            raise TheoremViolation("topology is the simple topology of its top block", witness=list(labels))
        members.append((f, candidate))

    filters = enumerate_filters(algebra)
    if len(members) != len(filters):
        raise TheoremViolation(
            "as many linear topologies as filters",
            witness={"topologies": len(members), "filters": len(filters)},
        )
    members.sort(key=lambda pair: pair[0].sort_key)
    logger.info("%s: %d zero-dimensional linear topologies", algebra.label(), len(members))
    return members


def enumerate_zltrl(algebra: ResiduatedLattice) -> list[FiniteTopology]:
    return [topology for _, topology in zltrl_members(algebra)]


def is_open_filter(algebra: ResiduatedLattice, topology: FiniteTopology, f: FilterSet) -> bool:
    return topology.is_open(f.members)


def is_closed_filter(algebra: ResiduatedLattice, topology: FiniteTopology, f: FilterSet) -> bool:
    return topology.is_closed(f.members)


def coset_openness(algebra: ResiduatedLattice, topology: FiniteTopology, f: FilterSet) -> FilterTopologyReport:
    cosets = {coset(algebra, f, x) for x in algebra.carrier}
    report = FilterTopologyReport(
        open=is_open_filter(algebra, topology, f),
        closed=is_closed_filter(algebra, topology, f),
        cosets_open=all(topology.is_open(c) for c in cosets),
        cosets_closed=all(topology.is_closed(c) for c in cosets),
    )
    if report.open != report.cosets_open or report.closed != report.cosets_closed:
        raise TheoremViolation("a filter and its cosets share openness", witness=f.to_list())
    if is_zero_dimensional(topology) and check_topological_algebra(algebra, topology):
        if report.open != report.closed:
            raise TheoremViolation("open filters are exactly the closed ones", witness=f.to_list())
    return report


def open_filters(algebra: ResiduatedLattice, topology: FiniteTopology) -> list[FilterSet]:
    return [f for f in enumerate_filters(algebra) if is_open_filter(algebra, topology, f)]


def open_filter_system(algebra: ResiduatedLattice, topology: FiniteTopology) -> SystemOfFilters:
    return SystemOfFilters(algebra, tuple(open_filters(algebra, topology)))


def sup_topologies(topologies: Sequence[FiniteTopology]) -> FiniteTopology:
    if not topologies:
        raise PreconditionError("Supremum of an empty list of topologies")
    n = topologies[0].n
    if any(t.n != n for t in topologies):
        raise PreconditionError("Topologies live on different carriers")

    nbhds = []
    for x in range(n):
        common = topologies[0].min_nbhd[x]
        for t in topologies[1:]:
            common = common & t.min_nbhd[x]
        nbhds.append(common)
    return FiniteTopology(n, tuple(nbhds))


def _coinitial(first: SystemOfFilters, second: SystemOfFilters) -> bool:
    return all(any(g.issubset(f) for g in second.family) for f in first.family)


def systems_equivalent(first: SystemOfFilters, second: SystemOfFilters) -> bool:
    equivalent = _coinitial(first, second) and _coinitial(second, first)
    if equivalent and induce_topology(first) != induce_topology(second):
        raise TheoremViolation(
            "equivalent systems induce the same topology",
            witness=[[f.to_list() for f in first.family], [f.to_list() for f in second.family]],
        )
    return equivalent


def finite_index_topology(algebra: ResiduatedLattice) -> FiniteTopology:
    """Every filter of a finite algebra has finite index."""
    return induce_topology(SystemOfFilters(algebra, tuple(enumerate_filters(algebra))))


def is_finitely_approximable(algebra: ResiduatedLattice) -> bool:
    meet = algebra.full_mask
    for f in enumerate_filters(algebra):
        meet &= f.mask
    return meet == 1 << algebra.top


def is_continuous_map(
    source: FiniteTopology,
    target: FiniteTopology,
    mapping: Callable[[int], int],
) -> bool:
    # Alexandrov: continuous iff N(x) lands inside N(f(x)).
    return all(
        mapping(y) in target.min_nbhd[mapping(x)]
        for x in range(source.n)
        for y in source.min_nbhd[x]
    )

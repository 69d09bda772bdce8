import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import networkx as nx
from graphviz import Digraph

from app.core.config import settings
from app.core.errors import (
    NotACongruenceError,
    PreconditionError,
    SizeBoundExceededError,
    TheoremViolation,
)
from app.models.structures import (
    OPERATIONS,
    CongruenceRelation,
    FilterSet,
    Homomorphism,
    ResiduatedLattice,
    mask_of,
)
from app.services.algebra import from_tables
from app.services.combinatorics import set_partitions


logger = logging.getLogger(__name__)


def is_filter(algebra: ResiduatedLattice, mask: int) -> bool:
    if not mask >> algebra.top & 1:
        return False
    members = [x for x in algebra.carrier if mask >> x & 1]
    for x in members:
        if algebra.up_masks[x] & ~mask:
            return False
        for y in members:
            if not mask >> algebra.mono[x][y] & 1:
                return False
    return True


def is_deductive_system(algebra: ResiduatedLattice, mask: int) -> bool:
    if not mask >> algebra.top & 1:
        return False
    for x in algebra.carrier:
        if not mask >> x & 1:
            continue
        for y in algebra.carrier:
            if mask >> algebra.impl[x][y] & 1 and not mask >> y & 1:
                return False
    return True


def make_filter(algebra: ResiduatedLattice, members: Iterable[int]) -> FilterSet:
    mask = mask_of(members)
    if not is_filter(algebra, mask):
        raise PreconditionError(
            f"{sorted(set(members))} is not a filter of {algebra.label()}",
            witness=sorted(set(members)),
        )
    return FilterSet(algebra, mask)


def top_filter(algebra: ResiduatedLattice) -> FilterSet:
    return FilterSet(algebra, 1 << algebra.top)


def full_filter(algebra: ResiduatedLattice) -> FilterSet:
    return FilterSet(algebra, algebra.full_mask)


def _sorted(filters: Iterable[FilterSet]) -> list[FilterSet]:
    return sorted(set(filters), key=lambda f: f.sort_key)


def enumerate_filters(algebra: ResiduatedLattice) -> list[FilterSet]:
    """A finite filter is the up-set of its least element, which is idempotent."""
    found = []
    for e in algebra.idempotents:
        mask = algebra.up_masks[e]
        if not is_filter(algebra, mask):
            raise TheoremViolation("up-set of an idempotent is a filter", witness=[e])
        found.append(FilterSet(algebra, mask))
    return _sorted(found)


def enumerate_filters_naive(algebra: ResiduatedLattice) -> list[FilterSet]:
    return _sorted(
        FilterSet(algebra, mask)
        for mask in range(1 << algebra.size)
        if is_filter(algebra, mask)
    )


def generated_filter(algebra: ResiduatedLattice, subset: Iterable[int]) -> FilterSet:
    # The product of the generators, raised until it stabilises, is the least element.
    least = algebra.top
    for x in subset:
        least = algebra.mono[least][x]
    while algebra.mono[least][least] != least:
        least = algebra.mono[least][least]
    return FilterSet(algebra, algebra.up_masks[least])


def _equivalence(algebra: ResiduatedLattice, f: FilterSet, x: int, y: int) -> bool:
    return algebra.mono[algebra.impl[x][y]][algebra.impl[y][x]] in f


def congruence_violation(algebra: ResiduatedLattice, labels: Sequence[int]) -> tuple[str, list[int]] | None:
    """Partition labels are an equivalence by construction; only compatibility can fail."""
    for operation in OPERATIONS:
        table = algebra.table(operation)
        for x1 in algebra.carrier:
            for x2 in algebra.carrier:
                if labels[x1] != labels[x2]:
                    continue
                for y in algebra.carrier:
                    if labels[table[x1][y]] != labels[table[x2][y]]:
                        return operation, [x1, x2, y]
                    if labels[table[y][x1]] != labels[table[y][x2]]:
                        return operation, [y, x1, x2]
    return None


def congruence_of_filter(f: FilterSet) -> CongruenceRelation:
    algebra = f.algebra
    labels = [-1] * algebra.size
    for x in algebra.carrier:
        if labels[x] >= 0:
            continue
        labels[x] = x
        for y in algebra.carrier:
            if labels[y] < 0 and _equivalence(algebra, f, x, y):
                labels[y] = x

    for x in algebra.carrier:
        for y in algebra.carrier:
            if (labels[x] == labels[y]) != _equivalence(algebra, f, x, y):
                raise TheoremViolation("filter relation is transitive", witness=[x, y])

    violation = congruence_violation(algebra, labels)
    if violation is not None:
        operation, witness = violation
        raise TheoremViolation(f"filter relation is compatible with {operation}", witness=witness)
    return CongruenceRelation.from_labels(algebra, labels)


def filter_of_congruence(theta: CongruenceRelation) -> FilterSet:
    algebra = theta.algebra
    if len(theta.partition) != algebra.size:
        raise NotACongruenceError("Partition length does not match the carrier")
    violation = congruence_violation(algebra, theta.partition)
    if violation is not None:
        operation, witness = violation
        raise NotACongruenceError(f"Partition is not compatible with {operation}", witness=witness)
    return FilterSet(algebra, mask_of(theta.block_of(algebra.top)))


def enumerate_congruences(algebra: ResiduatedLattice) -> list[CongruenceRelation]:
    return [
        CongruenceRelation(algebra, labels)
        for labels in set_partitions(algebra.size)
        if congruence_violation(algebra, labels) is None
    ]


def coset(algebra: ResiduatedLattice, f: FilterSet, x: int) -> frozenset[int]:
    return frozenset(y for y in algebra.carrier if _equivalence(algebra, f, x, y))


def quotient(algebra: ResiduatedLattice, f: FilterSet) -> tuple[ResiduatedLattice, Homomorphism]:
    theta = congruence_of_filter(f)
    blocks = list(theta.blocks)
    bottom_block = theta.partition[algebra.bottom]
    top_block = theta.partition[algebra.top]

    # Bottom class first and top class last keeps the quotient normalized.
    ordered = [bottom_block] + [
        b for b in range(len(blocks)) if b not in (bottom_block, top_block)
    ]
    if top_block != bottom_block:
        ordered.append(top_block)
    position = {b: k for k, b in enumerate(ordered)}
    image = tuple(position[theta.partition[x]] for x in algebra.carrier)
    representatives = [blocks[b][0] for b in ordered]

    def table(operation: str) -> list[list[int]]:
        source = algebra.table(operation)
        return [[image[source[r][s]] for s in representatives] for r in representatives]

    size = len(ordered)
    factor = from_tables(
        size,
        meet=table("meet"),
        join=table("join"),
        mono=table("mono"),
        impl=table("impl"),
        bottom=0,
        top=size - 1,
        name=f"{algebra.label()}/{f}",
        normalized=False,
    )
    return factor, Homomorphism(algebra, factor, image)


def is_prime(f: FilterSet) -> bool:
    algebra = f.algebra
    if not f.is_proper:
        return False
    for x in algebra.carrier:
        for y in algebra.carrier:
            if algebra.join[x][y] in f and x not in f and y not in f:
                return False
    return True


def prime_filters(algebra: ResiduatedLattice) -> list[FilterSet]:
    return [f for f in enumerate_filters(algebra) if is_prime(f)]


@dataclass(frozen=True, eq=False)
class FilterLattice:
    algebra: ResiduatedLattice
    filters: tuple[FilterSet, ...]

    def meet(self, first: FilterSet, second: FilterSet) -> FilterSet:
        return first.intersection(second)

    def join(self, first: FilterSet, second: FilterSet) -> FilterSet:
        return generated_filter(self.algebra, first.members + second.members)

    def join_all(self, filters: Iterable[FilterSet]) -> FilterSet:
        members: list[int] = []
        for f in filters:
            members.extend(f.members)
        return generated_filter(self.algebra, members)

    @property
    def bottom(self) -> FilterSet:
        return top_filter(self.algebra)

    @cached_property
    def hasse(self) -> nx.DiGraph:
        inclusion = nx.DiGraph()
        inclusion.add_nodes_from(range(len(self.filters)))
        for i, lower in enumerate(self.filters):
            for j, upper in enumerate(self.filters):
                if i != j and lower.issubset(upper):
                    inclusion.add_edge(i, j)
        return nx.transitive_reduction(inclusion)

    def lower_covers(self, f: FilterSet) -> list[FilterSet]:
        index = self.filters.index(f)
        return [self.filters[i] for i in sorted(self.hasse.predecessors(index))]

    def to_dot(self) -> str:
        dot = Digraph(comment=f"Filter lattice of {self.algebra.label()}", strict=True)
        dot.attr(rankdir="BT")
        for i, f in enumerate(self.filters):
            dot.node(f"F{i}", str(f))
        for i, j in sorted(self.hasse.edges()):
            dot.edge(f"F{i}", f"F{j}")
        return dot.source


def filter_lattice(algebra: ResiduatedLattice) -> FilterLattice:
    if algebra.size > settings.FILTER_LATTICE_MAX_SIZE:
        raise SizeBoundExceededError(
            f"Filter lattices are materialized up to size {settings.FILTER_LATTICE_MAX_SIZE}",
            witness=[algebra.size],
        )
    return FilterLattice(algebra, tuple(enumerate_filters(algebra)))


def _is_join_irreducible(lattice: FilterLattice, f: FilterSet) -> bool:
    if f == lattice.bottom:
        return False
    smaller = [g for g in lattice.filters if g != f and g.issubset(f)]
    for first, second in combinations(smaller, 2):
        if lattice.join(first, second) == f:
            return False
    return True


def join_irreducible_filters(algebra: ResiduatedLattice) -> list[FilterSet]:
    lattice = filter_lattice(algebra)
    return [f for f in lattice.filters if _is_join_irreducible(lattice, f)]


def irredundant_decomposition(algebra: ResiduatedLattice, f: FilterSet) -> list[FilterSet]:
    if f.is_trivial:
        raise PreconditionError("{top} has no irredundant decomposition")

    lattice = filter_lattice(algebra)
    below = [g for g in join_irreducible_filters(algebra) if g.issubset(f)]
    components = [g for g in below if not any(g != h and g.issubset(h) for h in below)]

    if lattice.join_all(components) != f:
        raise TheoremViolation("maximal join-irreducibles join to the filter", witness=f.to_list())
    for dropped in components:
        rest = [g for g in components if g != dropped]
        if rest and lattice.join_all(rest) == f:
            raise TheoremViolation("decomposition is irredundant", witness=dropped.to_list())
    return components


def irredundant_decompositions_naive(algebra: ResiduatedLattice, f: FilterSet) -> list[list[FilterSet]]:
    """Every antichain of join-irreducibles that joins to f with no removable member."""
    lattice = filter_lattice(algebra)
    irreducibles = join_irreducible_filters(algebra)
    found = []
    for size in range(1, len(irreducibles) + 1):
        for chosen in combinations(irreducibles, size):
            if any(a.issubset(b) for a, b in combinations(chosen, 2)) or any(
                b.issubset(a) for a, b in combinations(chosen, 2)
            ):
                continue
            if lattice.join_all(chosen) != f:
                continue
            if any(
                lattice.join_all(c for c in chosen if c != dropped) == f
                for dropped in chosen
                if len(chosen) > 1
            ):
                continue
            found.append(list(chosen))
    return found

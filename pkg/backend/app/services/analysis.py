import logging
from collections.abc import Sequence
from itertools import combinations

import networkx as nx

from app.core.errors import PreconditionError, TheoremViolation
from app.models.reports import (
    ConditionResult,
    DccReport,
    FamilyDccEntry,
    GlobalSystemVerdict,
    HausdorffVerdict,
    IndecomposabilityReport,
    PermutabilityReport,
    StructureReport,
    UniformBaseReport,
)
from app.models.structures import (
    CongruenceRelation,
    FilterSet,
    ResiduatedLattice,
    SystemOfFilters,
    is_down_directed,
)
from app.services.algebra import canonical_key, find_isomorphism, product
from app.services.combinatorics import compose_relations, transitive_closure
from app.services.filters import (
    enumerate_congruences,
    enumerate_filters,
    filter_of_congruence,
    prime_filters,
    quotient,
)
from app.services.topology import (
    finite_index_topology,
    induce_topology,
    is_finitely_approximable,
    separation_axioms,
    simple_topology,
    zltrl_members,
)


logger = logging.getLogger(__name__)

Relation = frozenset[tuple[int, int]]


def _nontrivial_filters(algebra: ResiduatedLattice) -> list[FilterSet]:
    return [f for f in enumerate_filters(algebra) if not f.is_trivial]


def _require_nontrivial(algebra: ResiduatedLattice, operation: str) -> None:
    if algebra.is_trivial:
        raise PreconditionError(f"{operation} needs a nontrivial algebra")


def monolith(algebra: ResiduatedLattice) -> FilterSet | None:
    candidates = _nontrivial_filters(algebra)
    for f in candidates:
        if all(f.issubset(g) for g in candidates):
            return f
    return None


def is_subdirectly_irreducible(algebra: ResiduatedLattice) -> tuple[bool, FilterSet | None]:
    if algebra.is_trivial:
        return True, None
    least = monolith(algebra)
    return least is not None, least


def _relation_join(first: Relation, second: Relation) -> Relation:
    return transitive_closure(first | second)


def factor_congruence_pairs(
    algebra: ResiduatedLattice,
    congruences: Sequence[CongruenceRelation] | None = None,
) -> list[tuple[CongruenceRelation, CongruenceRelation]]:
    congruences = enumerate_congruences(algebra) if congruences is None else congruences
    diagonal = frozenset((x, x) for x in algebra.carrier)
    total = frozenset((x, y) for x in algebra.carrier for y in algebra.carrier)
    proper = [theta for theta in congruences if not theta.is_identity and not theta.is_total]

    pairs = []
    for theta, other in combinations(proper, 2):
        if theta.pairs & other.pairs != diagonal:
            continue
        if _relation_join(theta.pairs, other.pairs) != total:
            continue
        if compose_relations(theta.pairs, other.pairs) != compose_relations(other.pairs, theta.pairs):
            continue
        pairs.append((theta, other))
    return pairs


def _pair_blocks(theta: CongruenceRelation, other: CongruenceRelation) -> tuple[list[list[int]], list[list[int]]]:
    return [list(block) for block in theta.blocks], [list(block) for block in other.blocks]


def _product_decomposition(algebra: ResiduatedLattice) -> tuple[FilterSet, FilterSet] | None:
    candidates = [f for f in _nontrivial_filters(algebra) if f.is_proper]
    for f, g in combinations(candidates, 2):
        left, _ = quotient(algebra, f)
        right, _ = quotient(algebra, g)
        if left.size * right.size != algebra.size:
            continue
        if find_isomorphism(algebra, product(left, right)) is not None:
            return f, g
    return None


def is_directly_indecomposable(algebra: ResiduatedLattice) -> IndecomposabilityReport:
    _require_nontrivial(algebra, "Direct indecomposability")

    nontrivial = _nontrivial_filters(algebra)
    directed = is_down_directed(nontrivial) is None

    meets = {f.mask for f in nontrivial}
    frontier = set(meets)
    while frontier:
        fresh = {a & b for a in frontier for b in meets} - meets
        meets |= fresh
        frontier = fresh
    no_trivial_meet = 1 << algebra.top not in meets

    factor_pairs = factor_congruence_pairs(algebra)
    decomposition = _product_decomposition(algebra)

    report = IndecomposabilityReport(
        verdict=decomposition is None,
        global_system_directed=directed,
        no_trivial_finite_intersection=no_trivial_meet,
        no_factor_congruences=not factor_pairs,
        no_product_decomposition=decomposition is None,
        factor_pairs=[_pair_blocks(theta, other) for theta, other in factor_pairs],
    )
    if factor_pairs:
        theta, other = factor_pairs[0]
        report.factor_pair = (
            filter_of_congruence(theta).to_list(),
            filter_of_congruence(other).to_list(),
        )

    if report.global_system_directed != report.no_trivial_finite_intersection:
        raise TheoremViolation("directedness of nontrivial filters matches their finite meets", witness=report.model_dump())
    if report.no_factor_congruences != report.no_product_decomposition:
        raise TheoremViolation("factor congruences match product decompositions", witness=report.model_dump())
    if report.global_system_directed and not report.verdict:
        raise TheoremViolation("directed nontrivial filters forbid a product decomposition", witness=report.model_dump())
    if report.global_system_directed != report.verdict:
        # Directly indecomposable, yet two nontrivial filters meet in {top}.
        logger.info("%s: indecomposable without a global system of filters", algebra.label())
    return report


def filter_form_agrees(report: IndecomposabilityReport) -> bool:
    return report.global_system_directed == report.verdict


def dimension(algebra: ResiduatedLattice) -> int:
    _require_nontrivial(algebra, "Dimension")
    primes = prime_filters(algebra)
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(primes)))
    for i, p in enumerate(primes):
        for j, q in enumerate(primes):
            if i != j and p.issubset(q):
                graph.add_edge(i, j)
    return nx.dag_longest_path_length(graph)


def structure_report(algebra: ResiduatedLattice) -> StructureReport:
    si, least = is_subdirectly_irreducible(algebra)
    if algebra.is_trivial:
        # Not a product of two nontrivial algebras, vacuously.
        di, pairs, dim = True, [], 0
    else:
        indecomposability = is_directly_indecomposable(algebra)
        di, pairs = indecomposability.verdict, indecomposability.factor_pairs
        dim = dimension(algebra)

    report = StructureReport(
        algebra_id=canonical_key(algebra),
        size=algebra.size,
        trivial=algebra.is_trivial,
        is_simple=not algebra.is_trivial and len(enumerate_filters(algebra)) == 2,
        is_subdirectly_irreducible=si,
        is_directly_indecomposable=di,
        monolith=least.to_list() if least is not None else None,
        dimension=dim,
        factor_pairs=pairs,
    )
    if report.is_subdirectly_irreducible and not report.is_directly_indecomposable:
        raise TheoremViolation("subdirectly irreducible algebras are directly indecomposable", witness=report.algebra_id)
    return report


def global_system_topology_verdict(algebra: ResiduatedLattice) -> GlobalSystemVerdict:
    if algebra.is_trivial:
        return GlobalSystemVerdict(applicable=False, reason="trivial algebra")
    if not is_directly_indecomposable(algebra).verdict:
        return GlobalSystemVerdict(applicable=False, reason="not directly indecomposable")

    nontrivial = _nontrivial_filters(algebra)
    if is_down_directed(nontrivial) is not None:
        return GlobalSystemVerdict(applicable=False, reason="nontrivial filters are not down-directed")

    si, least = is_subdirectly_irreducible(algebra)
    topology = induce_topology(SystemOfFilters(algebra, tuple(nontrivial)))
    non_discrete = not topology.is_discrete

    members = zltrl_members(algebra)
    for f, t_f in members:
        for g, t_g in members:
            if t_f.finer_than(t_g) != f.issubset(g):
                raise TheoremViolation(
                    "simple topologies reverse filter inclusion",
                    witness=[f.to_list(), g.to_list()],
                )

    candidates = [t for _, t in members if not t.is_discrete]
    largest = [t for t in candidates if all(t.finer_than(other) for other in candidates)]
    maximal = [
        t for t in candidates if not any(other != t and other.finer_than(t) for other in candidates)
    ]
    if len(largest) > 1:
        raise TheoremViolation("a largest topology is unique")

    verdict = GlobalSystemVerdict(
        applicable=True,
        subdirectly_irreducible=si,
        global_topology=topology.to_lists(),
        non_discrete=non_discrete,
        largest_non_discrete=largest[0].to_lists() if largest else None,
        maximal_non_discrete_count=len(maximal),
    )
    if not si == non_discrete == bool(largest):
        raise TheoremViolation("irreducible, non-discrete and a largest non-discrete topology agree", witness=verdict.model_dump())
    if largest and least is not None and largest[0] != simple_topology(algebra, least):
        raise TheoremViolation("the largest non-discrete topology is that of the monolith", witness=least.to_list())
    return verdict


def hausdorff_existence_verdict(algebra: ResiduatedLattice) -> HausdorffVerdict:
    if algebra.is_trivial:
        return HausdorffVerdict(skipped=True, note="trivial algebra: every topology is discrete and antidiscrete")

    members = zltrl_members(algebra)
    hausdorff = [t for _, t in members if separation_axioms(t).t2]
    nontrivial = [t for t in hausdorff if not t.is_discrete and not t.is_antidiscrete]
    if any(not t.is_discrete for t in hausdorff):
        raise TheoremViolation("finite Hausdorff linear topologies are discrete")

    finite_index = finite_index_topology(algebra)
    approximable = is_finitely_approximable(algebra)
    verdict = HausdorffVerdict(
        zltrl_count=len(members),
        hausdorff_count=len(hausdorff),
        nontrivial_hausdorff_count=len(nontrivial),
        finite_index_discrete=finite_index.is_discrete,
        finitely_approximable=approximable,
    )

    nontrivial_filters = _nontrivial_filters(algebra)
    if is_down_directed(nontrivial_filters) is None:
        global_topology = induce_topology(SystemOfFilters(algebra, tuple(nontrivial_filters)))
        # Finite spaces are compact.
        verdict.global_system_compact_hausdorff = separation_axioms(global_topology).t2
        if verdict.global_system_compact_hausdorff and not approximable:
            raise TheoremViolation("compact Hausdorff global system forces finite approximability")

    if nontrivial or not finite_index.is_discrete or not approximable:
        raise TheoremViolation("finite algebras are finitely approximable with no non-trivial Hausdorff topology", witness=verdict.model_dump())
    return verdict


def _relation_pairs(relation: Relation) -> list[list[int]]:
    return [list(pair) for pair in sorted(relation)]


def uniform_base_check(n: int, relations: Sequence[Relation]) -> UniformBaseReport:
    diagonal = frozenset((x, x) for x in range(n))

    def first_failure(items, holds) -> ConditionResult:
        for item in items:
            if not holds(*item):
                return ConditionResult(passed=False, witness=[_relation_pairs(r) for r in item])
        return ConditionResult(passed=True)

    def dominated(target: Relation) -> bool:
        return any(w <= target for w in relations)

    singles = [(v,) for v in relations]
    report = UniformBaseReport(
        ok=False,
        diagonal=first_failure(singles, lambda v: diagonal <= v),
        intersection=first_failure(
            [(v, w) for v in relations for w in relations],
            lambda v, w: dominated(v & w),
        ),
        symmetry=first_failure(singles, lambda v: dominated(frozenset((y, x) for x, y in v))),
        composition=first_failure(
            singles,
            lambda v: any(compose_relations(w, w) <= v for w in relations),
        ),
    )
    report.ok = all(
        c.passed for c in (report.diagonal, report.intersection, report.symmetry, report.composition)
    )
    return report


def permutability_check(algebra: ResiduatedLattice) -> PermutabilityReport:
    congruences = enumerate_congruences(algebra)
    for theta, other in combinations(congruences, 2):
        if compose_relations(theta.pairs, other.pairs) != compose_relations(other.pairs, theta.pairs):
            return PermutabilityReport(
                ok=False,
                witness=([list(b) for b in theta.blocks], [list(b) for b in other.blocks]),
            )
    return PermutabilityReport(ok=True)


def _longest_descending_chain(filters: Sequence[FilterSet]) -> int:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(filters)))
    for i, f in enumerate(filters):
        for j, g in enumerate(filters):
            if i != j and g.issubset(f):
                graph.add_edge(i, j)
    return nx.dag_longest_path_length(graph) + 1 if filters else 0


def dcc_report(algebra: ResiduatedLattice, families: Sequence[Sequence[FilterSet]]) -> DccReport:
    entries = []
    systems_ok = True
    minimal_ok = True
    for family in families:
        members = list(dict.fromkeys(family))
        if not members:
            continue
        is_chain = all(f.issubset(g) or g.issubset(f) for f, g in combinations(members, 2))
        minimal = [f for f in members if not any(g != f and g.issubset(f) for g in members)]
        directed = is_down_directed(members) is None
        least = next((f for f in members if all(f.issubset(g) for g in members)), None)

        minimal_ok = minimal_ok and bool(minimal)
        if directed and least is None:
            systems_ok = False
        entries.append(
            FamilyDccEntry(
                family=[f.to_list() for f in members],
                is_chain=is_chain,
                chain_length=len(members) if is_chain else None,
                down_directed=directed,
                minimum=least.to_list() if least is not None else None,
                minimal=[f.to_list() for f in minimal],
            )
        )

    longest = _longest_descending_chain(enumerate_filters(algebra))
    report = DccReport(
        ok=minimal_ok and systems_ok,
        longest_descending_chain=longest,
        minimal_condition=minimal_ok,
        systems_have_minimum=systems_ok,
        families=entries,
    )
    # Finite filter lattices satisfy all three conditions at once.
    if not report.ok:
        raise TheoremViolation("descending chains, minimal condition and minima of systems agree", witness=report.model_dump())
    return report


def subvariety_tags(algebra: ResiduatedLattice) -> list[str]:
    a = algebra
    pairs = [(x, y) for x in a.carrier for y in a.carrier]
    chain = all(a.leq(x, y) or a.leq(y, x) for x, y in pairs)
    heyting = all(a.mono[x][y] == a.meet[x][y] for x, y in pairs)
    prelinear = all(a.join[a.impl[x][y]][a.impl[y][x]] == a.top for x, y in pairs)
    divisible = all(a.meet[x][y] == a.mono[x][a.impl[x][y]] for x, y in pairs)
    involutive = all(a.neg(a.neg(x)) == x for x in a.carrier)
    mv = all(a.impl[a.impl[x][y]][y] == a.impl[a.impl[y][x]][x] for x, y in pairs)
    boolean = heyting and involutive

    tags = []
    if chain:
        tags.append("chain")
    if boolean:
        tags.append("boolean")
    if heyting:
        tags.append("heyting")
    if prelinear:
        tags.append("mtl")
    if prelinear and divisible:
        tags.append("bl")
    if prelinear and divisible and heyting:
        tags.append("goedel")
    if mv:
        tags.append("mv")
    if involutive:
        tags.append("involutive")
    if not a.is_trivial:
        filters = enumerate_filters(a)
        if len(filters) == 2:
            tags.append("simple")
        if monolith(a) is not None:
            tags.append("si")
    return tags


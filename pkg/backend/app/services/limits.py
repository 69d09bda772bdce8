import logging
import random
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from itertools import product as cartesian

import networkx as nx

from app.core.config import settings
from app.core.errors import (
    InvalidSystemError,
    NotCofinalError,
    PreconditionError,
    SizeBoundExceededError,
    TheoremViolation,
)
from app.models.reports import CertificateReport, SubdirectReport
from app.models.structures import (
    OPERATIONS,
    DirectedPoset,
    FilterSet,
    FiniteTopology,
    Homomorphism,
    InverseLimit,
    InverseSystem,
    ResiduatedLattice,
    SystemOfFilters,
    is_down_directed,
)
from app.services.algebra import (
    enumerate_homomorphisms,
    find_isomorphism,
    homomorphism_violation,
    identity_map,
    is_homomorphism,
    kernel,
    product_of,
)
from app.services.combinatorics import nonempty_subfamilies
from app.services.filters import (
    enumerate_filters,
    generated_filter,
    join_irreducible_filters,
    quotient,
    top_filter,
)
from app.services.topology import (
    check_topological_algebra,
    is_continuous_map,
    is_zero_dimensional,
    separation_axioms,
)


logger = logging.getLogger(__name__)


def build_poset(elements: Sequence[str], pairs: Iterable[tuple[str, str]]) -> DirectedPoset:
    """Reflexive-transitive closure of `pairs`, then the directed-poset checks."""
    graph = nx.DiGraph()
    graph.add_nodes_from(elements)
    graph.add_edges_from(pairs)
    closed = nx.transitive_closure(graph, reflexive=True)
    return DirectedPoset(tuple(elements), frozenset(closed.edges()))


def _triangle_witness(i: str, j: str, k: str) -> list[str]:
    return [i, j, k]


def complete_transitions(
    index: DirectedPoset,
    algebras: Mapping[str, ResiduatedLattice],
    given: Mapping[tuple[str, str], Homomorphism],
) -> dict[tuple[str, str], Homomorphism]:
    transitions = dict(given)
    for i in index.elements:
        transitions.setdefault((i, i), identity_map(algebras[i]))

    changed = True
    while changed:
        changed = False
        for i in index.elements:
            for j in index.below(i):
                if (i, j) in transitions:
                    continue
                for k in index.elements:
                    if (i, k) in transitions and (k, j) in transitions and k not in (i, j):
                        transitions[(i, j)] = transitions[(i, k)].compose(transitions[(k, j)])
                        changed = True
                        break

    for i in index.elements:
        for j in index.below(i):
            if (i, j) not in transitions:
                raise InvalidSystemError(f"No transition from {i} to {j}", witness=[i, j])
    return transitions


def validate_system(system: InverseSystem) -> None:
    index = system.index
    for i in index.elements:
        if i not in system.algebras:
            raise InvalidSystemError(f"Index {i} has no algebra", witness=[i])

    for (i, j), h in system.transitions.items():
        if not index.le(j, i):
            raise InvalidSystemError(f"Transition {i} -> {j} goes upward", witness=[i, j])
        if h.source != system.algebras[i]:
            raise InvalidSystemError(f"Transition {i} -> {j} has the wrong source", witness=[i, j])
        if h.target != system.algebras[j]:
            raise InvalidSystemError(f"Transition {i} -> {j} has the wrong target", witness=[i, j])
        violation = homomorphism_violation(h)
        if violation is not None:
            raise InvalidSystemError(
                f"Transition {i} -> {j} does not preserve {violation[0]}",
                witness={"transition": [i, j], "elements": violation[1]},
            )

    for i in index.elements:
        if system.transition(i, i).map != tuple(system.algebras[i].carrier):
            raise InvalidSystemError(f"Transition {i} -> {i} is not the identity", witness=[i, i])
        for j in index.below(i):
            for k in index.below(j):
                direct = system.transition(i, k).map
                composed = system.transition(i, j).compose(system.transition(j, k)).map
                if direct != composed:
                    raise InvalidSystemError(
                        f"Triangle {i} -> {j} -> {k} does not commute",
                        witness=_triangle_witness(i, j, k),
                    )


def make_inverse_system(
    index: DirectedPoset,
    algebras: Mapping[str, ResiduatedLattice],
    transitions: Mapping[tuple[str, str], Homomorphism],
) -> InverseSystem:
    system = InverseSystem(index, dict(algebras), complete_transitions(index, algebras, transitions))
    validate_system(system)
    return system


def _search_order(index: DirectedPoset) -> list[str]:
    """A linear extension listing larger indices first."""
    graph = nx.DiGraph()
    graph.add_nodes_from(index.elements)
    graph.add_edges_from((j, i) for i, j in index.leq if i != j)
    position = {i: k for k, i in enumerate(index.elements)}
    return list(nx.lexicographical_topological_sort(graph, key=position.__getitem__))


def enumerate_threads(system: InverseSystem) -> list[tuple[int, ...]]:
    index = system.index
    order = _search_order(index)
    uppers = {i: [k for k in order[:position] if index.le(i, k)] for position, i in enumerate(order)}
    values: dict[str, int] = {}
    found: list[tuple[int, ...]] = []

    def extend(position: int) -> None:
        if position == len(order):
            found.append(tuple(values[i] for i in index.elements))
            return
        i = order[position]
        above = uppers[i]
        if above:
            forced = {system.transition(k, i).map[values[k]] for k in above}
            if len(forced) != 1:
                return
            options: Iterable[int] = forced
        else:
            options = system.algebras[i].carrier
        for value in options:
            values[i] = value
            extend(position + 1)
        values.pop(i, None)

    extend(0)
    found.sort()
    return found


def naive_threads(system: InverseSystem) -> list[tuple[int, ...]]:
    if system.product_size > settings.NAIVE_THREAD_BOUND:
        raise SizeBoundExceededError(
            f"Naive thread scan is limited to {settings.NAIVE_THREAD_BOUND} tuples",
            witness=[system.product_size],
        )
    index = system.index
    slot = {i: k for k, i in enumerate(index.elements)}
    found = []
    for candidate in cartesian(*(system.algebras[i].carrier for i in index.elements)):
        if all(
            system.transition(i, j).map[candidate[slot[i]]] == candidate[slot[j]]
            for i in index.elements
            for j in index.below(i)
        ):
            found.append(candidate)
    return found


def inverse_limit(system: InverseSystem, bound: int | None = None) -> InverseLimit:
    bound = settings.LIMIT_TUPLE_BOUND if bound is None else bound
    if system.product_size > bound:
        raise SizeBoundExceededError(
            f"Inverse limit would scan {system.product_size} tuples, bound is {bound}",
            witness=[system.product_size, bound],
        )

    index = system.index
    components = [system.algebras[i] for i in index.elements]
    bottom = tuple(a.bottom for a in components)
    top = tuple(a.top for a in components)
    threads = enumerate_threads(system)
    if not threads:
        raise TheoremViolation("inverse limit of nonempty finite algebras is nonempty")
    threads.sort(key=lambda t: (t != bottom, t == top, t))
    position = {t: k for k, t in enumerate(threads)}
    if bottom not in position or top not in position:
        raise TheoremViolation("constant threads belong to the limit")

    tables = {}
    for operation in OPERATIONS:
        rows = []
        for s in threads:
            row = []
            for t in threads:
                combined = tuple(
                    a.table(operation)[x][y] for a, x, y in zip(components, s, t)
                )
                if combined not in position:
                    raise TheoremViolation(f"thread set is closed under {operation}", witness=[list(s), list(t)])
                row.append(position[combined])
            rows.append(tuple(row))
        tables[operation] = tuple(rows)

    algebra = ResiduatedLattice(
        size=len(threads),
        bottom=0,
        top=len(threads) - 1,
        name="lim",
        **tables,
    )
    projections = {
        i: Homomorphism(algebra, system.algebras[i], tuple(t[k] for t in threads))
        for k, i in enumerate(index.elements)
    }
    for i in index.elements:
        if not is_homomorphism(projections[i]):
            raise TheoremViolation("projections are homomorphisms", witness=[i])
        for j in index.below(i):
            if projections[i].compose(system.transition(i, j)).map != projections[j].map:
                raise TheoremViolation("projections commute with transitions", witness=[i, j])

    logger.info("inverse limit over %d indices has %d threads", len(index.elements), len(threads))
    return InverseLimit(system, algebra, index.elements, tuple(threads), projections)


def _subposet(index: DirectedPoset, subset: Sequence[str]) -> DirectedPoset:
    chosen = set(subset)
    return DirectedPoset(
        tuple(i for i in index.elements if i in chosen),
        frozenset((i, j) for i, j in index.leq if i in chosen and j in chosen),
    )


def cofinal_restrict(system: InverseSystem, subset: Sequence[str]) -> InverseSystem:
    index = system.index
    chosen = [i for i in index.elements if i in set(subset)]
    unknown = sorted(set(subset) - set(index.elements))
    if unknown:
        raise NotCofinalError(f"Unknown indices {unknown}", witness=unknown)
    if not chosen:
        raise NotCofinalError("An empty index set is not cofinal")
    for i in chosen:
        for j in chosen:
            if not any(index.le(i, k) and index.le(j, k) for k in chosen):
                raise NotCofinalError(f"{i} and {j} have no upper bound in the subset", witness=[i, j])
    for i in index.elements:
        if not any(index.le(i, k) for k in chosen):
            raise NotCofinalError(f"{i} has no upper bound in the subset", witness=[i])

    restricted = InverseSystem(
        _subposet(index, chosen),
        {i: system.algebras[i] for i in chosen},
        {(i, j): h for (i, j), h in system.transitions.items() if i in chosen and j in chosen},
    )
    validate_system(restricted)
    return restricted


def restriction_isomorphism(full: InverseLimit, restricted: InverseLimit) -> Homomorphism:
    """Forgetting the coordinates outside the subsystem, checked to be an isomorphism."""
    slots = [full.order.index(i) for i in restricted.order]
    position = {t: k for k, t in enumerate(restricted.threads)}
    image = tuple(position[tuple(t[s] for s in slots)] for t in full.threads)
    h = Homomorphism(full.algebra, restricted.algebra, image)
    if not (is_homomorphism(h) and h.is_injective and h.is_surjective):
        raise TheoremViolation("restriction to a cofinal subsystem is an isomorphism")
    if find_isomorphism(full.algebra, restricted.algebra) is None:
        raise TheoremViolation("cofinal limits are isomorphic")
    return h


def filter_label(f: FilterSet) -> str:
    return str(f)


Cone = dict[str, Homomorphism]


def _quotient_transition(
    algebra: ResiduatedLattice,
    finer: Homomorphism,
    coarser: Homomorphism,
) -> Homomorphism:
    """The map x/G -> x/F between two quotients of `algebra` with G inside F."""
    image = [0] * finer.target.size
    for x in algebra.carrier:
        image[finer.map[x]] = coarser.map[x]
    return Homomorphism(finer.target, coarser.target, tuple(image))


def filter_quotient_system(
    algebra: ResiduatedLattice,
    family: Sequence[FilterSet],
) -> tuple[InverseSystem, Cone]:
    """Quotients by a down-directed family indexed by reverse inclusion, with the quotient cone."""
    system = SystemOfFilters(algebra, tuple(dict.fromkeys(family)))
    members = list(system.family)
    labels = [filter_label(f) for f in members]
    cone = {label: quotient(algebra, f)[1] for label, f in zip(labels, members)}

    leq = set()
    transitions = {}
    for f_label, f in zip(labels, members):
        for g_label, g in zip(labels, members):
            if g.issubset(f):
                leq.add((f_label, g_label))
                transitions[(g_label, f_label)] = _quotient_transition(algebra, cone[g_label], cone[f_label])

    result = InverseSystem(
        DirectedPoset(tuple(labels), frozenset(leq)),
        {label: h.target for label, h in cone.items()},
        transitions,
    )
    validate_system(result)
    return result, cone


def canonical_map(algebra: ResiduatedLattice, limit: InverseLimit, cone: Cone) -> Homomorphism:
    """Send a to the thread (cone_i(a))_i."""
    position = {t: k for k, t in enumerate(limit.threads)}
    image = []
    for x in algebra.carrier:
        thread = tuple(cone[label].map[x] for label in limit.order)
        if thread not in position:
            raise TheoremViolation("a cone sends each element to a thread", witness=[x])
        image.append(position[thread])
    return Homomorphism(algebra, limit.algebra, tuple(image))


@dataclass(frozen=True, eq=False)
class Completion:
    algebra: ResiduatedLattice
    system: InverseSystem
    limit: InverseLimit
    embedding: Homomorphism
    cofinal_indices: tuple[str, ...]
    cofinal_limit: InverseLimit
    cofinal_isomorphism: Homomorphism


def profinite_completion(algebra: ResiduatedLattice) -> Completion:
    system, cone = filter_quotient_system(algebra, enumerate_filters(algebra))
    limit = inverse_limit(system)
    embedding = canonical_map(algebra, limit, cone)
    if not (is_homomorphism(embedding) and embedding.is_injective and embedding.is_surjective):
        raise TheoremViolation("a finite algebra is its own profinite completion", witness=list(embedding.map))

    cofinal = dict.fromkeys([top_filter(algebra), *join_irreducible_filters(algebra)])
    cofinal_indices = tuple(filter_label(f) for f in cofinal)
    try:
        restricted = cofinal_restrict(system, cofinal_indices)
    except NotCofinalError as exc:
        raise TheoremViolation("join-irreducible filters with {top} are cofinal", witness=exc.witness) from exc
    cofinal_limit = inverse_limit(restricted)
    isomorphism = restriction_isomorphism(limit, cofinal_limit)

    for label in limit.order:
        if not limit.projections[label].is_surjective:
            raise TheoremViolation("completion projections are surjective", witness=[label])

    return Completion(
        algebra=algebra,
        system=system,
        limit=limit,
        embedding=embedding,
        cofinal_indices=cofinal_indices,
        cofinal_limit=cofinal_limit,
        cofinal_isomorphism=isomorphism,
    )


def subdirect_embedding(
    algebra: ResiduatedLattice,
    family: Sequence[FilterSet],
) -> tuple[Homomorphism, SubdirectReport]:
    if not family:
        raise PreconditionError("Subdirect embedding needs a nonempty family")

    quotients = [quotient(algebra, f) for f in family]
    target = product_of([q for q, _ in quotients])
    image = []
    for x in algebra.carrier:
        position = 0
        for factor, projection in quotients:
            position = position * factor.size + projection.map[x]
        image.append(position)
    h = Homomorphism(algebra, target, tuple(image))
    if not is_homomorphism(h):
        raise TheoremViolation("componentwise quotient map is a homomorphism")

    collision = None
    seen: dict[int, int] = {}
    for x, y in enumerate(image):
        if y in seen:
            collision = [seen[y], x]
            break
        seen[y] = x

    meet = algebra.full_mask
    for f in family:
        meet &= f.mask
    report = SubdirectReport(
        injective=collision is None,
        components_surjective=all(projection.is_surjective for _, projection in quotients),
        image_size=len(seen) if collision is None else len(set(image)),
        product_size=target.size,
        collision=collision,
    )
    if report.injective != (meet == 1 << algebra.top):
        raise TheoremViolation("injective exactly when the family meets in {top}", witness=[f.to_list() for f in family])
    return h, report


def _subalgebra(
    algebra: ResiduatedLattice,
    members: Iterable[int],
    name: str,
) -> tuple[ResiduatedLattice, dict[int, int]]:
    """The subalgebra on `members` renumbered bottom first and top last, with the renumbering."""
    ordered = sorted(set(members), key=lambda x: (x != algebra.bottom, x == algebra.top, x))
    position = {x: k for k, x in enumerate(ordered)}
    tables = {}
    for operation in OPERATIONS:
        source = algebra.table(operation)
        rows = []
        for x in ordered:
            row = []
            for y in ordered:
                if source[x][y] not in position:
                    raise TheoremViolation(f"the image is closed under {operation}", witness=[x, y])
                row.append(position[source[x][y]])
            rows.append(tuple(row))
        tables[operation] = tuple(rows)
    sub = ResiduatedLattice(size=len(ordered), bottom=0, top=len(ordered) - 1, name=name, **tables)
    return sub, position


def restriction_system(algebra: ResiduatedLattice, family: Sequence[FilterSet]) -> InverseSystem:
    """Images of the algebra in the products of quotients over finite subfamilies, ordered by inclusion."""
    members = list(dict.fromkeys(family))
    subfamilies = list(nonempty_subfamilies(range(len(members))))
    labels = ["+".join(str(k) for k in chosen) for chosen in subfamilies]
    quotients = [quotient(algebra, f) for f in members]

    def encode(chosen: Sequence[int], values: Mapping[int, int]) -> int:
        position = 0
        for k in chosen:
            position = position * quotients[k][0].size + values[k]
        return position

    def decode(chosen: Sequence[int], position: int) -> dict[int, int]:
        values = {}
        for k in reversed(chosen):
            position, values[k] = divmod(position, quotients[k][0].size)
        return values

    algebras = {}
    renumbering = {}
    coordinates = {}
    for label, chosen in zip(labels, subfamilies):
        full = product_of([quotients[k][0] for k in chosen])
        image = [encode(chosen, {k: quotients[k][1].map[x] for k in chosen}) for x in algebra.carrier]
        stage, position = _subalgebra(full, image, label)
        algebras[label] = stage
        renumbering[label] = position
        by_index = sorted(position, key=position.__getitem__)
        coordinates[label] = [decode(chosen, p) for p in by_index]

    leq = set()
    transitions = {}
    for small_label, small in zip(labels, subfamilies):
        for big_label, big in zip(labels, subfamilies):
            if not set(small) <= set(big):
                continue
            leq.add((small_label, big_label))
            image = tuple(
                renumbering[small_label][encode(small, values)] for values in coordinates[big_label]
            )
            transitions[(big_label, small_label)] = Homomorphism(
                algebras[big_label], algebras[small_label], image
            )

    system = InverseSystem(DirectedPoset(tuple(labels), frozenset(leq)), algebras, transitions)
    validate_system(system)
    return system


def limit_topology(limit: InverseLimit) -> FiniteTopology:
    """Product of discrete finite factors, restricted to the threads."""
    size = limit.algebra.size
    nbhds = []
    for x in range(size):
        common = set(range(size))
        for label in limit.order:
            projection = limit.projections[label]
            common &= {y for y in range(size) if projection.map[y] == projection.map[x]}
        nbhds.append(frozenset(common))
    return FiniteTopology(size, tuple(nbhds))


def projection_kernel_system(limit: InverseLimit) -> SystemOfFilters:
    kernels = tuple(dict.fromkeys(kernel(limit.projections[label]) for label in limit.order))
    return SystemOfFilters(limit.algebra, kernels)


def _clopen_filters(algebra: ResiduatedLattice, topology: FiniteTopology) -> list[FilterSet]:
    return [
        f
        for f in enumerate_filters(algebra)
        if topology.is_open(f.members) and topology.is_closed(f.members)
    ]


def _separates(algebra: ResiduatedLattice, family: Sequence[FilterSet]) -> bool:
    meet = algebra.full_mask
    for f in family:
        meet &= f.mask
    return meet == 1 << algebra.top


def check_certificate(algebra: ResiduatedLattice, topology: FiniteTopology, family: Sequence[FilterSet]) -> bool:
    if not family:
        return False
    clopen = set(_clopen_filters(algebra, topology))
    return (
        all(f in clopen for f in family)
        and is_down_directed(family) is None
        and _separates(algebra, family)
    )


def is_residually_finite(algebra: ResiduatedLattice, topology: FiniteTopology) -> bool:
    continuous = []
    for f in enumerate_filters(algebra):
        factor, projection = quotient(algebra, f)
        if is_continuous_map(topology, FiniteTopology.discrete(factor.size), projection):
            continuous.append(projection)
    return all(
        any(p.map[x] != p.map[y] for p in continuous)
        for x in algebra.carrier
        for y in algebra.carrier
        if x < y
    )


def profiniteness_certificate(algebra: ResiduatedLattice, topology: FiniteTopology) -> CertificateReport:
    if not check_topological_algebra(algebra, topology):
        raise PreconditionError("Topology does not make the algebra a topological residuated lattice")

    clopen = _clopen_filters(algebra, topology)
    smallest = clopen[0]
    for f in clopen:
        smallest = smallest.intersection(f)
    # Clopen filters are closed under intersection, so the meet is the least one.
    if smallest not in clopen:
        raise TheoremViolation("clopen filters are closed under intersection", witness=smallest.to_list())

    found = smallest.is_trivial
    refutation = None
    if not found:
        x = next(y for y in smallest.members if y != algebra.top)
        refutation = [x, algebra.top]

    _, subdirect = subdirect_embedding(algebra, clopen)
    report = CertificateReport(
        found=found,
        filters=[smallest.to_list()] if found else [],
        refutation=refutation,
        hausdorff=separation_axioms(topology).t2,
        discrete=topology.is_discrete,
        residually_finite=is_residually_finite(algebra, topology),
        subdirect_injective=subdirect.injective,
    )

    if is_zero_dimensional(topology):
        verdicts = {
            report.found,
            report.hausdorff,
            report.discrete,
            report.residually_finite,
            report.subdirect_injective,
        }
        if len(verdicts) != 1:
            raise TheoremViolation("profinite, Hausdorff, discrete and residually finite agree", witness=report.model_dump())

    if found:
        system, cone = filter_quotient_system(algebra, clopen)
        limit = inverse_limit(system)
        embedding = canonical_map(algebra, limit, cone)
        if not (embedding.is_injective and embedding.is_surjective):
            raise TheoremViolation("algebra is the limit of its clopen quotients")
    return report


def random_quotient_system(
    rng: random.Random,
    algebra: ResiduatedLattice,
    max_indices: int = 4,
) -> tuple[InverseSystem, Cone]:
    """A random directed poset carrying quotients of one algebra, with the quotient cone."""
    count = rng.randint(1, max_indices)
    names = [f"i{k}" for k in range(count)]
    pairs = {(names[a], names[b]) for a in range(count) for b in range(a + 1, count) if rng.random() < 0.5}

    graph = nx.DiGraph()
    graph.add_nodes_from(names)
    graph.add_edges_from(pairs)
    closed = set(nx.transitive_closure(graph, reflexive=True).edges())
    directed = all(
        any((a, c) in closed and (b, c) in closed for c in names) for a in names for b in names
    )
    if not directed:
        closed |= {(a, names[-1]) for a in names}
    index = DirectedPoset(tuple(names), frozenset(closed))

    filters = enumerate_filters(algebra)
    chosen: dict[str, FilterSet] = {}
    for name in reversed(names):
        above = [chosen[k] for k in names if k != name and (name, k) in closed]
        floor = generated_filter(algebra, [x for f in above for x in f.members])
        chosen[name] = rng.choice([f for f in filters if floor.issubset(f)])

    cone = {name: quotient(algebra, chosen[name])[1] for name in names}
    transitions = {
        (i, j): _quotient_transition(algebra, cone[i], cone[j]) for i in names for j in index.below(i)
    }

    system = InverseSystem(index, {name: h.target for name, h in cone.items()}, transitions)
    validate_system(system)
    return system, cone


def mediating_maps(
    limit: InverseLimit,
    source: ResiduatedLattice,
    cone: Mapping[str, Homomorphism],
) -> list[Homomorphism]:
    """All homomorphisms into the limit commuting with the cone."""
    candidates = []
    for x in source.carrier:
        candidates.append(
            [
                k
                for k in range(limit.algebra.size)
                if all(limit.projections[i].map[k] == cone[i].map[x] for i in limit.order)
            ]
        )
    found = []
    for image in cartesian(*candidates):
        h = Homomorphism(source, limit.algebra, tuple(image))
        if is_homomorphism(h):
            found.append(h)
    return found


def enumerate_cones(system: InverseSystem, source: ResiduatedLattice) -> list[Cone]:
    """Every compatible family of homomorphisms from `source` into the system."""
    index = system.index
    order = _search_order(index)
    uppers = {i: [k for k in order[:position] if index.le(i, k)] for position, i in enumerate(order)}
    homs = {i: enumerate_homomorphisms(source, system.algebras[i]) for i in order if not uppers[i]}
    chosen: Cone = {}
    found: list[Cone] = []

    def extend(position: int) -> None:
        if position == len(order):
            found.append(dict(chosen))
            return
        i = order[position]
        above = uppers[i]
        if above:
            forced = {chosen[k].compose(system.transition(k, i)).map for k in above}
            if len(forced) != 1:
                return
            options = [Homomorphism(source, system.algebras[i], forced.pop())]
        else:
            options = homs[i]
        for h in options:
            chosen[i] = h
            extend(position + 1)
        chosen.pop(i, None)

    extend(0)
    return found

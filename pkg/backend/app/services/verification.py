import logging
import random
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import combinations

from app.core.config import settings
from app.core.errors import NotCofinalError, TheoremViolation, WorkbenchError
from app.models.reports import SuiteReport, TheoremCheck
from app.models.structures import (
    OPERATIONS,
    FilterSet,
    ResiduatedLattice,
    SystemOfFilters,
    is_down_directed,
)
from app.services.algebra import (
    build_boolean,
    build_goedel_chain,
    build_lukasiewicz_chain,
    canonical_key,
    find_isomorphism,
    kernel,
    product,
    relabel,
    validate,
)
from app.services.analysis import (
    dcc_report,
    dimension,
    filter_form_agrees,
    global_system_topology_verdict,
    hausdorff_existence_verdict,
    is_directly_indecomposable,
    is_subdirectly_irreducible,
    permutability_check,
    structure_report,
    uniform_base_check,
)
from app.services.catalog import AlgebraCatalog, generate, generate_naive
from app.services.combinatorics import nonempty_subfamilies
from app.services.filters import (
    congruence_of_filter,
    enumerate_congruences,
    enumerate_filters,
    enumerate_filters_naive,
    filter_lattice,
    filter_of_congruence,
    irredundant_decomposition,
    irredundant_decompositions_naive,
    is_deductive_system,
    is_filter,
    join_irreducible_filters,
    prime_filters,
    quotient,
)
from app.services.limits import (
    cofinal_restrict,
    enumerate_cones,
    enumerate_threads,
    inverse_limit,
    limit_topology,
    mediating_maps,
    naive_threads,
    profinite_completion,
    profiniteness_certificate,
    projection_kernel_system,
    random_quotient_system,
    restriction_isomorphism,
    restriction_system,
    subdirect_embedding,
)
from app.services.topology import (
    check_topological_algebra,
    coset_openness,
    induce_topology,
    is_hausdorff,
    open_filter_system,
    open_filters,
    separation_class,
    simple_topology,
    sup_topologies,
    systems_equivalent,
    zltrl_members,
)


logger = logging.getLogger(__name__)

SUITES = ("algebra", "filters", "topology", "limits", "analysis", "catalog")


@dataclass(frozen=True)
class AlgebraCheck:
    """A claim checked on each catalog algebra up to `size_cap`; it raises TheoremViolation when false."""

    suite: str
    name: str
    size_cap: int
    run: Callable[[ResiduatedLattice], None]


@dataclass
class SuiteContext:
    catalog: AlgebraCatalog
    size_max: int
    rng: random.Random

    def algebras(self, cap: int | None = None) -> list[ResiduatedLattice]:
        bound = self.size_max if cap is None else min(cap, self.size_max)
        return self.catalog.algebras(bound)


@dataclass(frozen=True)
class GlobalCheck:
    suite: str
    name: str
    run: Callable[[SuiteContext], TheoremCheck]


@dataclass(frozen=True)
class OutOfScope:
    suite: str
    name: str
    note: str


def _violation(claim: str, witness=None) -> TheoremViolation:
    return TheoremViolation(claim, witness=witness)


def _directed_families(algebra: ResiduatedLattice) -> list[tuple[FilterSet, ...]]:
    return [
        family
        for family in nonempty_subfamilies(enumerate_filters(algebra))
        if is_down_directed(family) is None
    ]


# algebra


def check_mutations_rejected(algebra: ResiduatedLattice) -> None:
    for operation in OPERATIONS:
        table = algebra.table(operation)
        for x in algebra.carrier:
            for y in algebra.carrier:
                for value in algebra.carrier:
                    if value == table[x][y]:
                        continue
                    rows = [list(row) for row in table]
                    rows[x][y] = value
                    mutated = replace(algebra, **{operation: tuple(tuple(r) for r in rows)})
                    if validate(mutated).ok:
                        raise _violation("single-entry mutations are rejected", [operation, x, y, value])


def check_residual_is_greatest(algebra: ResiduatedLattice) -> None:
    for y in algebra.carrier:
        for z in algebra.carrier:
            allowed = [x for x in algebra.carrier if algebra.leq(algebra.mono[x][y], z)]
            if algebra.impl[y][z] not in allowed or any(
                not algebra.leq(x, algebra.impl[y][z]) for x in allowed
            ):
                raise _violation("the residual is the greatest solution", [y, z])


def check_canonical_form_invariant(algebra: ResiduatedLattice) -> None:
    middle = [x for x in algebra.carrier if x not in (algebra.bottom, algebra.top)]
    shuffled = list(reversed(middle))
    perm = list(algebra.carrier)
    for x, y in zip(middle, shuffled):
        perm[x] = y
    renamed = relabel(algebra, perm)
    if canonical_key(renamed) != canonical_key(algebra):
        raise _violation("canonical form ignores labels", perm)
    if find_isomorphism(algebra, renamed) is None:
        raise _violation("a relabelling is an isomorphism", perm)


def check_kernels_are_filters(algebra: ResiduatedLattice) -> None:
    for f in enumerate_filters(algebra):
        _, projection = quotient(algebra, f)
        if kernel(projection) != f:
            raise _violation("the kernel of the quotient map is the filter", f.to_list())


def run_builders(context: SuiteContext) -> TheoremCheck:
    built = [build_goedel_chain(n) for n in range(1, 9)]
    built += [build_lukasiewicz_chain(n) for n in range(1, 9)]
    built += [build_boolean(k) for k in range(4)]
    factors = [build_goedel_chain(2), build_goedel_chain(3), build_lukasiewicz_chain(3), build_boolean(2)]
    built += [product(a, b) for a in factors for b in factors if a.size * b.size <= 8]

    failures = []
    for algebra in built:
        report = validate(algebra)
        if not report.ok:
            failures.append({"algebra": algebra.label(), "violations": [v.model_dump() for v in report.violations]})
    return TheoremCheck(
        suite="algebra",
        name="builders produce residuated lattices",
        status="fail" if failures else "pass",
        checked=len(built),
        failures=failures,
    )


# filters


def check_filters_principal(algebra: ResiduatedLattice) -> None:
    if enumerate_filters(algebra) != enumerate_filters_naive(algebra):
        raise _violation("filters are up-sets of idempotents")


def check_deductive_systems(algebra: ResiduatedLattice) -> None:
    for mask in range(1 << algebra.size):
        if is_filter(algebra, mask) != is_deductive_system(algebra, mask):
            raise _violation("filters are the deductive systems", mask)


def check_filter_congruence_bijection(algebra: ResiduatedLattice) -> None:
    filters = enumerate_filters(algebra)
    congruences = enumerate_congruences(algebra)
    if len(filters) != len(congruences):
        raise _violation("as many congruences as filters", [len(filters), len(congruences)])
    for f in filters:
        if filter_of_congruence(congruence_of_filter(f)) != f:
            raise _violation("filter to congruence and back is the identity", f.to_list())
    for theta in congruences:
        if congruence_of_filter(filter_of_congruence(theta)) != theta:
            raise _violation("congruence to filter and back is the identity", list(theta.partition))


def check_prime_separation(algebra: ResiduatedLattice) -> None:
    if algebra.is_trivial:
        return
    primes = prime_filters(algebra)
    for a in algebra.carrier:
        if a != algebra.top and all(a in p for p in primes):
            raise _violation("a prime filter misses each element below top", [a])
    meet = algebra.full_mask
    for p in primes:
        meet &= p.mask
    if meet != 1 << algebra.top:
        raise _violation("prime filters meet in {top}")
    for f in enumerate_filters(algebra):
        if f.mask == algebra.full_mask:
            continue
        above = algebra.full_mask
        for p in primes:
            if f.issubset(p):
                above &= p.mask
        if above != f.mask:
            raise _violation("a proper filter is the meet of the primes above it", f.to_list())


def check_unique_decomposition(algebra: ResiduatedLattice) -> None:
    for f in enumerate_filters(algebra):
        if f.is_trivial:
            continue
        fast = irredundant_decomposition(algebra, f)
        naive = irredundant_decompositions_naive(algebra, f)
        if naive != [fast]:
            raise _violation(
                "irredundant decomposition is unique",
                {"filter": f.to_list(), "found": [[g.to_list() for g in d] for d in naive]},
            )


def check_join_irreducible_covers(algebra: ResiduatedLattice) -> None:
    lattice = filter_lattice(algebra)
    irreducible = set(join_irreducible_filters(algebra))
    for f in lattice.filters:
        if (len(lattice.lower_covers(f)) == 1) != (f in irreducible):
            raise _violation("join-irreducible filters have one lower cover", f.to_list())


def check_filter_lattice_distributive(algebra: ResiduatedLattice) -> None:
    lattice = filter_lattice(algebra)
    for f in lattice.filters:
        for g in lattice.filters:
            for h in lattice.filters:
                left = lattice.meet(f, lattice.join(g, h))
                right = lattice.join(lattice.meet(f, g), lattice.meet(f, h))
                if left != right:
                    raise _violation("the filter lattice is distributive", [f.to_list(), g.to_list(), h.to_list()])


# topology


def check_separation_collapse(algebra: ResiduatedLattice) -> None:
    for family in _directed_families(algebra):
        is_hausdorff(algebra, SystemOfFilters(algebra, family))


def check_simple_topologies_continuous(algebra: ResiduatedLattice) -> None:
    for f in enumerate_filters(algebra):
        report = check_topological_algebra(algebra, simple_topology(algebra, f))
        if not report:
            raise _violation("filter topologies make the operations continuous", report.model_dump())


def check_zltrl_equipotence(algebra: ResiduatedLattice) -> None:
    members = zltrl_members(algebra)
    if len({f for f, _ in members}) != len(members):
        raise _violation("each linear topology comes from exactly one filter")


def check_coset_openness(algebra: ResiduatedLattice) -> None:
    for _, topology in zltrl_members(algebra):
        for f in enumerate_filters(algebra):
            coset_openness(algebra, topology, f)


def check_open_filters_rebuild(algebra: ResiduatedLattice) -> None:
    for _, topology in zltrl_members(algebra):
        if induce_topology(open_filter_system(algebra, topology)) != topology:
            raise _violation("open filters induce the topology", topology.to_lists())
        simple = [simple_topology(algebra, f) for f in open_filters(algebra, topology)]
        if sup_topologies(simple) != topology:
            raise _violation("the topology is the supremum of its open filters", topology.to_lists())
        separation_class(algebra, topology)


def check_meet_topology_is_supremum(algebra: ResiduatedLattice) -> None:
    filters = enumerate_filters(algebra)
    for f, g in combinations(filters, 2):
        joined = sup_topologies([simple_topology(algebra, f), simple_topology(algebra, g)])
        if joined != simple_topology(algebra, f.intersection(g)):
            raise _violation("the topology of a meet is the supremum", [f.to_list(), g.to_list()])


def check_equivalent_systems(algebra: ResiduatedLattice) -> None:
    systems = [SystemOfFilters(algebra, family) for family in _directed_families(algebra)]
    for first, second in combinations(systems, 2):
        systems_equivalent(first, second)


# limits


def check_completion(algebra: ResiduatedLattice) -> None:
    completion = profinite_completion(algebra)
    if not limit_topology(completion.limit).is_discrete:
        raise _violation("the limit of finite discrete algebras carries a discrete topology here")
    limit = completion.limit
    kernels = projection_kernel_system(limit)
    if kernels.intersection_mask != 1 << limit.algebra.top:
        raise _violation("projection kernels meet in {top}")
    opened = open_filters(limit.algebra, limit_topology(limit))
    if set(kernels.family) != set(opened):
        raise _violation(
            "projection kernels are the open filters of the limit",
            {"kernels": [f.to_list() for f in kernels.family], "open": [f.to_list() for f in opened]},
        )
    least = min(opened, key=len)
    if least.mask != kernels.intersection_mask:
        raise _violation("the least open filter is the least kernel", least.to_list())


def check_certificates(algebra: ResiduatedLattice) -> None:
    for _, topology in zltrl_members(algebra):
        profiniteness_certificate(algebra, topology)


def check_restriction_system(algebra: ResiduatedLattice) -> None:
    filters = enumerate_filters(algebra)
    limit = inverse_limit(restriction_system(algebra, filters))
    _, report = subdirect_embedding(algebra, filters)
    if limit.algebra.size != report.image_size:
        raise _violation("the restriction limit is the subdirect image", [limit.algebra.size, report.image_size])


def _random_systems(context: SuiteContext):
    bases = context.algebras(3)
    for _ in range(settings.RANDOM_SYSTEM_COUNT):
        base = context.rng.choice(bases)
        yield base, *random_quotient_system(context.rng, base)


def _tally(suite: str, name: str, checked: int, failures: list[dict]) -> TheoremCheck:
    return TheoremCheck(
        suite=suite,
        name=name,
        status="fail" if failures else "pass",
        checked=checked,
        failures=failures,
    )


def run_random_limits(context: SuiteContext) -> list[TheoremCheck]:
    threads_failures: list[dict] = []
    cofinal_failures: list[dict] = []
    mediating_failures: list[dict] = []
    restrictions = 0
    cones = 0
    count = 0

    for base, system, cone in _random_systems(context):
        count += 1
        if enumerate_threads(system) != naive_threads(system):
            threads_failures.append({"algebra": base.label(), "indices": list(system.index.elements)})
        try:
            limit = inverse_limit(system)
        except WorkbenchError as exc:
            threads_failures.append({"algebra": base.label(), **exc.payload()})
            continue

        maps = mediating_maps(limit, base, cone)
        cones += 1
        if len(maps) != 1:
            mediating_failures.append({"algebra": base.label(), "count": len(maps)})

        # Cones from every stage and from one more catalog algebra.
        sources = [*system.algebras.values(), context.rng.choice(context.algebras(3))]
        for source in sources:
            for other in enumerate_cones(system, source):
                cones += 1
                maps = mediating_maps(limit, source, other)
                if len(maps) != 1:
                    mediating_failures.append(
                        {
                            "algebra": base.label(),
                            "source": source.label(),
                            "cone": {i: list(h.map) for i, h in other.items()},
                            "count": len(maps),
                        }
                    )

        for subset in nonempty_subfamilies(system.index.elements):
            try:
                restricted = cofinal_restrict(system, subset)
            except NotCofinalError:
                continue
            restrictions += 1
            try:
                restriction_isomorphism(limit, inverse_limit(restricted))
            except WorkbenchError as exc:
                cofinal_failures.append({"indices": list(subset), **exc.payload()})

    return [
        _tally("limits", "thread search matches the product scan", count, threads_failures),
        _tally("limits", "cofinal subsystems have isomorphic limits", restrictions, cofinal_failures),
        _tally("limits", "the mediating map into a limit is unique", cones, mediating_failures),
    ]


# analysis


def check_si_implies_di(algebra: ResiduatedLattice) -> None:
    report = structure_report(algebra)
    if (report.monolith is not None) != (report.is_subdirectly_irreducible and not report.trivial):
        raise _violation("a monolith exists exactly for nontrivial irreducible algebras", report.algebra_id)


def check_di_characterizations(algebra: ResiduatedLattice) -> None:
    if not algebra.is_trivial:
        is_directly_indecomposable(algebra)


def check_global_system_topology(algebra: ResiduatedLattice) -> None:
    global_system_topology_verdict(algebra)


def check_no_hausdorff(algebra: ResiduatedLattice) -> None:
    hausdorff_existence_verdict(algebra)


def check_chain_dimension(algebra: ResiduatedLattice) -> None:
    is_chain = all(
        algebra.leq(x, y) or algebra.leq(y, x) for x in algebra.carrier for y in algebra.carrier
    )
    # Every proper filter of a chain is prime, and filters are up-sets of idempotents.
    expected = len(algebra.idempotents) - 2
    if is_chain and algebra.size >= 2 and dimension(algebra) != expected:
        raise _violation("chain dimension is the idempotent count minus two", [expected, dimension(algebra)])


def check_uniform_base(algebra: ResiduatedLattice) -> None:
    relations = [theta.pairs for theta in enumerate_congruences(algebra)]
    report = uniform_base_check(algebra.size, relations)
    if not report.ok:
        raise _violation("congruences form a uniform base", report.model_dump())
    permutability = permutability_check(algebra)
    if not permutability:
        raise _violation("congruences permute", permutability.model_dump())


def check_dcc(algebra: ResiduatedLattice) -> None:
    families = list(nonempty_subfamilies(enumerate_filters(algebra)))
    dcc_report(algebra, families)


def run_indecomposable_witness(context: SuiteContext) -> TheoremCheck:
    algebras = [a for a in context.algebras(5) if not a.is_trivial]
    witnesses = []
    filter_form_mismatches = []
    for algebra in algebras:
        report = is_directly_indecomposable(algebra)
        if report.verdict and not is_subdirectly_irreducible(algebra)[0]:
            witnesses.append(algebra.label())
        if not filter_form_agrees(report):
            filter_form_mismatches.append(algebra.label())

    note = f"indecomposable but reducible: {', '.join(witnesses)}" if witnesses else (
        f"no indecomposable reducible algebra up to size {min(5, context.size_max)}"
    )
    if filter_form_mismatches:
        note += f"; nontrivial filters meeting in {{top}} without a product: {', '.join(filter_form_mismatches)}"
    return TheoremCheck(
        suite="analysis",
        name="directly indecomposable does not imply irreducible",
        status="pass",
        checked=len(algebras),
        note=note,
    )


def run_builder_dimensions(context: SuiteContext) -> TheoremCheck:
    failures = []
    for n in range(2, 9):
        chain = build_goedel_chain(n)
        if dimension(chain) != n - 2:
            failures.append({"algebra": chain.label(), "dimension": dimension(chain)})
    return _tally("analysis", "chains of up to 8 elements have dimension n - 2", 7, failures)


# catalog


def check_catalog_entry(algebra: ResiduatedLattice) -> None:
    report = validate(algebra)
    if not report.ok:
        raise _violation("catalog entries validate", report.model_dump())
    check_residual_is_greatest(algebra)


def run_catalog_keys(context: SuiteContext) -> TheoremCheck:
    items = [item for item in context.catalog if item.algebra.size <= context.size_max]
    keys = [item.key for item in items]
    failures = [{"key": key} for key in sorted(set(keys)) if keys.count(key) > 1]
    failures += [
        {"key": item.key, "stored": True}
        for item in items
        if canonical_key(item.algebra) != item.key
    ]
    return _tally("catalog", "canonical keys are unique and recomputable", len(items), failures)


def run_dual_generators(context: SuiteContext) -> TheoremCheck:
    bound = min(context.size_max, settings.NAIVE_CATALOG_MAX_SIZE)
    failures = []
    for n in range(1, bound + 1):
        fast = generate(n)
        naive = generate_naive(n)
        naive_keys = {canonical_key(a) for a in naive}
        if len(fast) != len(naive) or fast.keys != naive_keys:
            failures.append({"size": n, "generated": len(fast), "naive": len(naive)})
        if generate(n) != fast:
            failures.append({"size": n, "claim": "repeated generation is identical"})
    return _tally("catalog", "orderly and naive generators agree", bound, failures)


def run_catalog_matches_generation(context: SuiteContext) -> TheoremCheck:
    failures = []
    sizes = range(1, min(context.size_max, context.catalog.size_bound) + 1)
    for n in sizes:
        stored = {item.key for item in context.catalog if item.algebra.size == n}
        if stored != generate(n).keys:
            failures.append({"size": n, "stored": len(stored)})
    return _tally("catalog", "stored catalog matches fresh generation", len(sizes), failures)


ALGEBRA_CHECKS: tuple[AlgebraCheck, ...] = (
    AlgebraCheck("algebra", "single-entry mutations are rejected", 4, check_mutations_rejected),
    AlgebraCheck("algebra", "the residual is the greatest solution", 6, check_residual_is_greatest),
    AlgebraCheck("algebra", "canonical form ignores labels", 6, check_canonical_form_invariant),
    AlgebraCheck("algebra", "quotient maps have the filter as kernel", 6, check_kernels_are_filters),
    AlgebraCheck("filters", "filters are up-sets of idempotents", 6, check_filters_principal),
    AlgebraCheck("filters", "filters are the deductive systems", 6, check_deductive_systems),
    AlgebraCheck("filters", "filters correspond to congruences", 5, check_filter_congruence_bijection),
    AlgebraCheck("filters", "prime filters separate points and proper filters", 5, check_prime_separation),
    AlgebraCheck("filters", "irredundant decompositions are unique", 4, check_unique_decomposition),
    AlgebraCheck("filters", "join-irreducible filters have one lower cover", 6, check_join_irreducible_covers),
    AlgebraCheck("filters", "the filter lattice is distributive", 6, check_filter_lattice_distributive),
    AlgebraCheck("topology", "T0, T1, T2 and a trivial meet coincide", 4, check_separation_collapse),
    AlgebraCheck("topology", "filter topologies are continuous", 5, check_simple_topologies_continuous),
    AlgebraCheck("topology", "linear topologies correspond to filters", 5, check_zltrl_equipotence),
    AlgebraCheck("topology", "a filter and its cosets share openness", 5, check_coset_openness),
    AlgebraCheck("topology", "open filters rebuild the topology", 5, check_open_filters_rebuild),
    AlgebraCheck("topology", "the topology of a meet is the supremum", 5, check_meet_topology_is_supremum),
    AlgebraCheck("topology", "equivalent systems induce the same topology", 4, check_equivalent_systems),
    AlgebraCheck("limits", "the completion is the join-irreducible limit", 4, check_completion),
    AlgebraCheck("limits", "profiniteness certificates agree with separation", 5, check_certificates),
    AlgebraCheck("limits", "the restriction limit is the subdirect image", 3, check_restriction_system),
    AlgebraCheck("analysis", "irreducible algebras are indecomposable", 6, check_si_implies_di),
    AlgebraCheck("analysis", "characterizations of indecomposability agree", 5, check_di_characterizations),
    AlgebraCheck("analysis", "irreducible exactly when the global topology is non-discrete", 5, check_global_system_topology),
    AlgebraCheck("analysis", "no non-trivial Hausdorff linear topology", 5, check_no_hausdorff),
    AlgebraCheck("analysis", "chain dimension is the idempotent count minus two", 6, check_chain_dimension),
    AlgebraCheck("analysis", "congruences form a permuting uniform base", 4, check_uniform_base),
    AlgebraCheck("analysis", "descending chains of filters stabilize", 4, check_dcc),
    AlgebraCheck("catalog", "catalog entries validate with greatest residuals", 6, check_catalog_entry),
)

GLOBAL_CHECKS: tuple[GlobalCheck, ...] = (
    GlobalCheck("algebra", "builders produce residuated lattices", run_builders),
    GlobalCheck("analysis", "directly indecomposable does not imply irreducible", run_indecomposable_witness),
    GlobalCheck("analysis", "chains of up to 8 elements have dimension n - 2", run_builder_dimensions),
    GlobalCheck("catalog", "canonical keys are unique and recomputable", run_catalog_keys),
    GlobalCheck("catalog", "orderly and naive generators agree", run_dual_generators),
    GlobalCheck("catalog", "stored catalog matches fresh generation", run_catalog_matches_generation),
)

OUT_OF_SCOPE: tuple[OutOfScope, ...] = (
    OutOfScope(
        "limits",
        "a profinite algebra is finite or uncountable",
        "every limit built here is finite, so only the finite branch is reachable",
    ),
    OutOfScope(
        "analysis",
        "infinite dimension yields a non-trivial Hausdorff topology",
        "finite algebras have finite dimension; the hypothesis never holds on a catalog algebra",
    ),
)


def _algebra_check(suite: str, name: str) -> AlgebraCheck:
    return next(c for c in ALGEBRA_CHECKS if c.suite == suite and c.name == name)


def run_algebra_check(suite: str, name: str, algebra: ResiduatedLattice) -> dict | None:
    """Worker entry point; looks the check up by name so only plain data crosses processes."""
    check = _algebra_check(suite, name)
    try:
        check.run(algebra)
    except WorkbenchError as exc:
        return {"algebra": algebra.label(), **exc.payload()}
    return None


def _run_algebra_checks(
    checks: Sequence[AlgebraCheck],
    context: SuiteContext,
    jobs: int,
) -> list[TheoremCheck]:
    tasks = [
        (check, algebra)
        for check in checks
        for algebra in context.algebras(check.size_cap)
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(run_algebra_check, c.suite, c.name, a) for c, a in tasks]
            outcomes = [future.result() for future in futures]
    else:
        outcomes = [run_algebra_check(c.suite, c.name, a) for c, a in tasks]

    results = []
    for check in checks:
        failures = [
            outcome
            for (task_check, _), outcome in zip(tasks, outcomes)
            if task_check is check and outcome is not None
        ]
        checked = sum(1 for task_check, _ in tasks if task_check is check)
        results.append(_tally(check.suite, check.name, checked, failures))
    return results


def run_suite(
    suite: str,
    catalog: AlgebraCatalog,
    size_max: int,
    seed: int | None = None,
    jobs: int | None = None,
) -> SuiteReport:
    seed = settings.DEFAULT_SEED if seed is None else seed
    jobs = settings.DEFAULT_JOBS if jobs is None else jobs
    context = SuiteContext(catalog=catalog, size_max=size_max, rng=random.Random(seed))

    checks = _run_algebra_checks([c for c in ALGEBRA_CHECKS if c.suite == suite], context, jobs)
    for check in GLOBAL_CHECKS:
        if check.suite == suite:
            checks.append(_capture(check, context))
    if suite == "limits":
        checks.extend(run_random_limits(context))
    for row in OUT_OF_SCOPE:
        if row.suite == suite:
            checks.append(TheoremCheck(suite=suite, name=row.name, status="out-of-scope", note=row.note))

    report = SuiteReport(
        suite=suite,
        size_max=size_max,
        algebra_count=len(context.algebras()),
        seed=seed,
        checks=checks,
    )
    logger.info("suite %s: %d checks, ok=%s", suite, len(checks), report.ok)
    return report


def _capture(check: GlobalCheck, context: SuiteContext) -> TheoremCheck:
    try:
        return check.run(context)
    except WorkbenchError as exc:
        return TheoremCheck(suite=check.suite, name=check.name, status="fail", failures=[exc.payload()])


def run_suites(
    suite: str,
    catalog: AlgebraCatalog,
    size_max: int,
    seed: int | None = None,
    jobs: int | None = None,
) -> list[SuiteReport]:
    names = SUITES if suite == "all" else (suite,)
    return [run_suite(name, catalog, size_max, seed=seed, jobs=jobs) for name in names]

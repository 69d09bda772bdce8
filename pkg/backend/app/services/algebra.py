import logging
from collections.abc import Callable, Sequence
from itertools import permutations
from itertools import product as cartesian

from app.core.errors import NotAHomomorphismError, PreconditionError, StructuralError
from app.models.reports import AxiomViolation, ValidationReport
from app.models.structures import (
    OPERATIONS,
    FilterSet,
    Homomorphism,
    ResiduatedLattice,
    Table,
)


logger = logging.getLogger(__name__)

Law = tuple[str, int, Callable[..., bool]]


def _freeze(rows: Sequence[Sequence[int]]) -> Table:
    return tuple(tuple(int(v) for v in row) for row in rows)


def check_structure(
    size: int,
    tables: dict[str, Sequence[Sequence[int]]],
    bottom: int,
    top: int,
) -> list[str]:
    problems: list[str] = []
    if size < 1:
        return [f"size must be positive, got {size}"]

    for operation in OPERATIONS:
        rows = tables.get(operation)
        if rows is None:
            problems.append(f"{operation}: table missing")
            continue
        if len(rows) != size:
            problems.append(f"{operation}: expected {size} rows, got {len(rows)}")
            continue
        for x, row in enumerate(rows):
            if len(row) != size:
                problems.append(f"{operation}: row {x} has {len(row)} entries, expected {size}")
                continue
            for y, value in enumerate(row):
                if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value < size:
                    problems.append(f"{operation}[{x}][{y}] = {value!r} is outside 0..{size - 1}")

    for constant, value in (("bottom", bottom), ("top", top)):
        if not 0 <= value < size:
            problems.append(f"{constant} = {value} is outside 0..{size - 1}")
    if size > 1 and bottom == top:
        problems.append("bottom and top coincide on a nontrivial carrier")
    return problems


def relabel(algebra: ResiduatedLattice, perm: Sequence[int]) -> ResiduatedLattice:
    """Rename element x to perm[x]."""
    n = algebra.size
    tables = {}
    for operation in OPERATIONS:
        source = algebra.table(operation)
        rows = [[0] * n for _ in range(n)]
        for x in range(n):
            for y in range(n):
                rows[perm[x]][perm[y]] = perm[source[x][y]]
        tables[operation] = _freeze(rows)
    return ResiduatedLattice(
        size=n,
        bottom=perm[algebra.bottom],
        top=perm[algebra.top],
        name=algebra.name,
        **tables,
    )


def normalize(algebra: ResiduatedLattice) -> ResiduatedLattice:
    if algebra.bottom == 0 and algebra.top == algebra.size - 1:
        return algebra

    perm = [0] * algebra.size
    perm[algebra.top] = algebra.size - 1
    perm[algebra.bottom] = 0
    middle = [x for x in algebra.carrier if x not in (algebra.bottom, algebra.top)]
    for position, x in enumerate(middle, start=1):
        perm[x] = position
    return relabel(algebra, perm)


def from_tables(
    size: int,
    meet: Sequence[Sequence[int]],
    join: Sequence[Sequence[int]],
    mono: Sequence[Sequence[int]],
    impl: Sequence[Sequence[int]],
    bottom: int,
    top: int,
    name: str | None = None,
    normalized: bool = True,
) -> ResiduatedLattice:
    tables = {"meet": meet, "join": join, "mono": mono, "impl": impl}
    problems = check_structure(size, tables, bottom, top)
    if problems:
        raise StructuralError("Malformed algebra tables", problems)

    algebra = ResiduatedLattice(
        size=size,
        meet=_freeze(meet),
        join=_freeze(join),
        mono=_freeze(mono),
        impl=_freeze(impl),
        bottom=bottom,
        top=top,
        name=name,
    )
    return normalize(algebra) if normalized else algebra


def _build(
    n: int,
    meet: Callable[[int, int], int],
    join: Callable[[int, int], int],
    mono: Callable[[int, int], int],
    impl: Callable[[int, int], int],
    bottom: int,
    top: int,
    name: str,
) -> ResiduatedLattice:
    def table(fn: Callable[[int, int], int]) -> Table:
        return tuple(tuple(fn(x, y) for y in range(n)) for x in range(n))

    return ResiduatedLattice(
        size=n,
        meet=table(meet),
        join=table(join),
        mono=table(mono),
        impl=table(impl),
        bottom=bottom,
        top=top,
        name=name,
    )


def build_goedel_chain(n: int) -> ResiduatedLattice:
    if n < 1:
        raise PreconditionError(f"A chain needs at least one element, got {n}")
    top = n - 1
    return _build(
        n,
        meet=min,
        join=max,
        mono=min,
        impl=lambda x, y: top if x <= y else y,
        bottom=0,
        top=top,
        name=f"G{n}",
    )


def build_lukasiewicz_chain(n: int) -> ResiduatedLattice:
    if n < 1:
        raise PreconditionError(f"A chain needs at least one element, got {n}")
    top = n - 1
    # Element i stands for i/(n-1).
    return _build(
        n,
        meet=min,
        join=max,
        mono=lambda x, y: max(0, x + y - top),
        impl=lambda x, y: min(top, top - x + y),
        bottom=0,
        top=top,
        name=f"L{n}",
    )


def build_boolean(k: int) -> ResiduatedLattice:
    if k < 0:
        raise PreconditionError(f"A Boolean algebra needs k >= 0 atoms, got {k}")
    full = (1 << k) - 1
    return _build(
        1 << k,
        meet=lambda x, y: x & y,
        join=lambda x, y: x | y,
        mono=lambda x, y: x & y,
        impl=lambda x, y: (~x | y) & full,
        bottom=0,
        top=full,
        name=f"B{1 << k}",
    )


def product(first: ResiduatedLattice, second: ResiduatedLattice) -> ResiduatedLattice:
    """Pairs (a, b) are stored at index a * |second| + b."""
    width = second.size

    def lift(operation: str) -> Callable[[int, int], int]:
        left, right = first.table(operation), second.table(operation)

        def combined(x: int, y: int) -> int:
            a1, b1 = divmod(x, width)
            a2, b2 = divmod(y, width)
            return left[a1][a2] * width + right[b1][b2]

        return combined

    return _build(
        first.size * width,
        meet=lift("meet"),
        join=lift("join"),
        mono=lift("mono"),
        impl=lift("impl"),
        bottom=first.bottom * width + second.bottom,
        top=first.top * width + second.top,
        name=f"{first.label()}x{second.label()}",
    )


def product_of(algebras: Sequence[ResiduatedLattice]) -> ResiduatedLattice:
    if not algebras:
        raise PreconditionError("An empty product has no carrier representation here")
    result = algebras[0]
    for factor in algebras[1:]:
        result = product(result, factor)
    return result


def _lattice_laws(a: ResiduatedLattice) -> list[Law]:
    m, j, bottom, top = a.meet, a.join, a.bottom, a.top
    return [
        ("meet idempotent", 1, lambda x: m[x][x] == x),
        ("meet commutative", 2, lambda x, y: m[x][y] == m[y][x]),
        ("meet associative", 3, lambda x, y, z: m[m[x][y]][z] == m[x][m[y][z]]),
        ("join idempotent", 1, lambda x: j[x][x] == x),
        ("join commutative", 2, lambda x, y: j[x][y] == j[y][x]),
        ("join associative", 3, lambda x, y, z: j[j[x][y]][z] == j[x][j[y][z]]),
        ("absorption", 2, lambda x, y: m[x][j[x][y]] == x and j[x][m[x][y]] == x),
        ("join agrees with order", 2, lambda x, y: (j[x][y] == y) == (m[x][y] == x)),
        ("bottom is least", 1, lambda x: m[bottom][x] == bottom),
        ("top is greatest", 1, lambda x: j[top][x] == top),
    ]


def _monoid_laws(a: ResiduatedLattice) -> list[Law]:
    p, top, le, i = a.mono, a.top, a.leq, a.impl
    return [
        ("mono commutative", 2, lambda x, y: p[x][y] == p[y][x]),
        ("mono associative", 3, lambda x, y, z: p[p[x][y]][z] == p[x][p[y][z]]),
        ("top is the mono unit", 1, lambda x: p[top][x] == x),
        ("residuation", 3, lambda x, y, z: le(p[x][y], z) == le(x, i[y][z])),
    ]


def _power_law(a: ResiduatedLattice, x: int, y: int) -> bool:
    for m_exp in range(1, 4):
        for n_exp in range(1, 4):
            lhs = a.join[a.power(x, m_exp)][a.power(y, n_exp)]
            rhs = a.power(a.join[x][y], m_exp * n_exp)
            if not a.leq(rhs, lhs):
                return False
    return True


def _derived_laws(a: ResiduatedLattice) -> list[Law]:
    m, j, p, i, top, le = a.meet, a.join, a.mono, a.impl, a.top, a.leq
    return [
        ("implication unit", 1, lambda x: i[top][x] == x and i[x][top] == top),
        ("order via implication", 2, lambda x, y: le(x, y) == (i[x][y] == top)),
        (
            "monotonicity",
            3,
            lambda x, y, z: not le(x, y)
            or (le(p[x][z], p[y][z]) and le(i[z][x], i[z][y]) and le(i[y][z], i[x][z])),
        ),
        ("modus ponens", 2, lambda x, y: le(p[x][i[x][y]], y)),
        ("integrality", 2, lambda x, y: le(p[x][y], m[x][y]) and le(x, i[y][x])),
        (
            "exchange",
            3,
            lambda x, y, z: i[x][i[y][z]] == i[p[x][y]][z] == i[y][i[x][z]],
        ),
        ("join distributes over mono", 3, lambda x, y, z: le(p[j[x][y]][j[x][z]], j[x][p[y][z]])),
        ("power law", 2, lambda x, y: _power_law(a, x, y)),
    ]


def _first_witness(a: ResiduatedLattice, arity: int, holds: Callable[..., bool]) -> tuple[int, ...] | None:
    for args in cartesian(a.carrier, repeat=arity):
        if not holds(*args):
            return args
    return None


def validate(algebra: ResiduatedLattice) -> ValidationReport:
    tables = {operation: algebra.table(operation) for operation in OPERATIONS}
    problems = check_structure(algebra.size, tables, algebra.bottom, algebra.top)
    if problems:
        return ValidationReport(ok=False, size=algebra.size, structural_errors=problems)

    violations = []
    for laws in (_lattice_laws, _monoid_laws, _derived_laws):
        for name, arity, holds in laws(algebra):
            witness = _first_witness(algebra, arity, holds)
            if witness is not None:
                violations.append(AxiomViolation(axiom=name, witness=list(witness)))

    report = ValidationReport(
        ok=not violations,
        size=algebra.size,
        trivial=algebra.is_trivial,
        violations=violations,
    )
    logger.debug("validated %s: ok=%s", algebra.label(), report.ok)
    return report


def identity_map(algebra: ResiduatedLattice) -> Homomorphism:
    return Homomorphism(algebra, algebra, tuple(algebra.carrier))


def homomorphism_violation(h: Homomorphism) -> tuple[str, list[int]] | None:
    source, target, image = h.source, h.target, h.map
    if len(image) != source.size or any(not 0 <= y < target.size for y in image):
        return "map shape", []
    if image[source.bottom] != target.bottom:
        return "bottom", [source.bottom]
    if image[source.top] != target.top:
        return "top", [source.top]

    for operation in OPERATIONS:
        left, right = source.table(operation), target.table(operation)
        for x in source.carrier:
            for y in source.carrier:
                if image[left[x][y]] != right[image[x]][image[y]]:
                    return operation, [x, y]
    return None


def is_homomorphism(h: Homomorphism) -> bool:
    return homomorphism_violation(h) is None


def enumerate_homomorphisms(source: ResiduatedLattice, target: ResiduatedLattice) -> list[Homomorphism]:
    """Brute force over maps fixing the constants; meant for small carriers."""
    free = [x for x in source.carrier if x not in (source.bottom, source.top)]
    found = []
    for values in cartesian(target.carrier, repeat=len(free)):
        image = [0] * source.size
        image[source.bottom] = target.bottom
        image[source.top] = target.top
        for x, y in zip(free, values):
            image[x] = y
        h = Homomorphism(source, target, tuple(image))
        if is_homomorphism(h):
            found.append(h)
    return found


def kernel(h: Homomorphism) -> FilterSet:
    violation = homomorphism_violation(h)
    if violation is not None:
        operation, witness = violation
        raise NotAHomomorphismError(f"Map does not preserve {operation}", witness=witness)

    mask = 0
    for x in h.source.carrier:
        if h.map[x] == h.target.top:
            mask |= 1 << x
    return FilterSet(h.source, mask)


def _base_signature(a: ResiduatedLattice, x: int) -> tuple[int, ...]:
    below = sum(1 for y in a.carrier if a.leq(y, x))
    above = sum(1 for y in a.carrier if a.leq(x, y))
    annihilates = sum(1 for y in a.carrier if a.mono[x][y] == a.bottom)
    return (below, above, int(a.mono[x][x] == x), annihilates)


def element_signatures(algebra: ResiduatedLattice) -> list[tuple]:
    """Isomorphism-invariant colour per element, comparable across algebras."""
    base = [_base_signature(algebra, x) for x in algebra.carrier]
    refined = []
    for x in algebra.carrier:
        neighbourhood = sorted(
            (
                base[y],
                base[algebra.mono[x][y]],
                base[algebra.impl[x][y]],
                base[algebra.impl[y][x]],
                algebra.leq(x, y),
            )
            for y in algebra.carrier
        )
        refined.append((base[x], tuple(neighbourhood)))
    return refined


def find_isomorphism(first: ResiduatedLattice, second: ResiduatedLattice) -> Homomorphism | None:
    if first.size != second.size:
        return None

    left_sigs = element_signatures(first)
    right_sigs = element_signatures(second)
    if sorted(left_sigs) != sorted(right_sigs):
        return None

    candidates = {
        x: [y for y in second.carrier if right_sigs[y] == left_sigs[x]] for x in first.carrier
    }
    order = sorted(first.carrier, key=lambda x: (x not in (first.bottom, first.top), len(candidates[x]), x))
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(x: int, y: int) -> bool:
        if x == first.bottom and y != second.bottom:
            return False
        if x == first.top and y != second.top:
            return False
        for a, b in mapping.items():
            for operation in OPERATIONS:
                left, right = first.table(operation), second.table(operation)
                for lhs, rhs in ((left[x][a], right[y][b]), (left[a][x], right[b][y]), (left[x][x], right[y][y])):
                    if lhs in mapping and mapping[lhs] != rhs:
                        return False
        return True

    def search(position: int) -> Homomorphism | None:
        if position == len(order):
            candidate = Homomorphism(first, second, tuple(mapping[x] for x in first.carrier))
            return candidate if is_homomorphism(candidate) else None

        x = order[position]
        for y in candidates[x]:
            if y in used or not consistent(x, y):
                continue
            mapping[x] = y
            used.add(y)
            found = search(position + 1)
            if found is not None:
                return found
            del mapping[x]
            used.discard(y)
        return None

    return search(0)


def _encode(algebra: ResiduatedLattice, order: Sequence[int]) -> bytes:
    """Tables of `algebra` after sending order[k] to k."""
    position = {x: k for k, x in enumerate(order)}
    payload = bytearray([algebra.size])
    for operation in OPERATIONS:
        table = algebra.table(operation)
        for x in order:
            row = table[x]
            payload.extend(position[row[y]] for y in order)
    return bytes(payload)


def _canonical_orders(algebra: ResiduatedLattice):
    signatures = element_signatures(algebra)
    classes: dict[tuple, list[int]] = {}
    for x in algebra.carrier:
        classes.setdefault(signatures[x], []).append(x)
    grouped = [classes[key] for key in sorted(classes)]
    for arrangement in cartesian(*(permutations(group) for group in grouped)):
        yield [x for group in arrangement for x in group]


def canonical_order(algebra: ResiduatedLattice) -> list[int]:
    best_order: list[int] | None = None
    best: bytes | None = None
    for order in _canonical_orders(algebra):
        encoded = _encode(algebra, order)
        if best is None or encoded < best:
            best, best_order = encoded, order
    assert best_order is not None
    return best_order


def canonical_form(algebra: ResiduatedLattice) -> bytes:
    return _encode(algebra, canonical_order(algebra))


def canonical_key(algebra: ResiduatedLattice) -> str:
    return canonical_form(algebra).hex()


def canonical_algebra(algebra: ResiduatedLattice) -> ResiduatedLattice:
    """The representative whose tables are the canonical form."""
    order = canonical_order(algebra)
    perm = [0] * algebra.size
    for k, x in enumerate(order):
        perm[x] = k
    return relabel(algebra, perm)

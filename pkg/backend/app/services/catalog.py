import logging
import time
from collections import Counter
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from itertools import combinations, permutations, product

from app.core.config import settings
from app.core.errors import SizeBoundExceededError, TheoremViolation
from app.models.documents import SizeStatistics
from app.models.reports import StructureReport
from app.models.structures import ResiduatedLattice
from app.services.algebra import (
    canonical_algebra,
    canonical_key,
    find_isomorphism,
    from_tables,
    validate,
)
from app.services.analysis import structure_report, subvariety_tags


logger = logging.getLogger(__name__)

Order = tuple[tuple[bool, ...], ...]
Grid = list[list[int | None]]


@dataclass(frozen=True)
class CatalogItem:
    key: str
    algebra: ResiduatedLattice
    structure: StructureReport
    tags: tuple[str, ...] = ()


@dataclass(frozen=True)
class AlgebraCatalog:
    size_bound: int
    items: tuple[CatalogItem, ...]
    statistics: tuple[SizeStatistics, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[CatalogItem]:
        return iter(self.items)

    @property
    def keys(self) -> set[str]:
        return {item.key for item in self.items}

    def algebras(self, size_max: int | None = None) -> list[ResiduatedLattice]:
        return [
            item.algebra
            for item in self.items
            if size_max is None or item.algebra.size <= size_max
        ]

    def counts_by_size(self) -> dict[int, int]:
        return dict(sorted(Counter(item.algebra.size for item in self.items).items()))

    def counts_by_tag(self) -> dict[str, int]:
        return dict(sorted(Counter(tag for item in self.items for tag in item.tags).items()))


def _entry_order(item: CatalogItem) -> tuple[int, str]:
    return (item.algebra.size, item.key)


def _check_size(n: int, bound: int) -> None:
    if not 1 <= n <= bound:
        raise SizeBoundExceededError(
            f"Catalog generation accepts sizes 1..{bound}, got {n}",
            witness=[n, bound],
        )


# Lattices


def _is_partial_order(leq: Order) -> bool:
    n = len(leq)
    for x in range(n):
        if not leq[x][x]:
            return False
        for y in range(n):
            if x != y and leq[x][y] and leq[y][x]:
                return False
            if leq[x][y]:
                for z in range(n):
                    if leq[y][z] and not leq[x][z]:
                        return False
    return True


def _bounded_order(n: int, middle_pairs: Sequence[tuple[int, int]]) -> Order:
    """Order on 0..n-1 with 0 least, n-1 greatest and the given strict pairs in between."""
    top = n - 1
    rows = [[x == y or x == 0 or y == top for y in range(n)] for x in range(n)]
    for x, y in middle_pairs:
        rows[x][y] = True
    return tuple(tuple(row) for row in rows)


def _lattice_tables(leq: Order) -> tuple[list[list[int]], list[list[int]]] | None:
    n = len(leq)

    def extreme(candidates: list[int], below: bool) -> int | None:
        for c in candidates:
            if all((leq[c][d] if below else leq[d][c]) for d in candidates):
                return c
        return None

    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            upper = [z for z in range(n) if leq[x][z] and leq[y][z]]
            lower = [z for z in range(n) if leq[z][x] and leq[z][y]]
            least, greatest = extreme(upper, True), extreme(lower, False)
            if least is None or greatest is None:
                return None
            join[x][y], meet[x][y] = least, greatest
    return meet, join


def _order_code(n: int, leq: Order) -> int:
    code = 0
    for x in range(1, n - 1):
        for y in range(1, n - 1):
            code = code << 1 | leq[x][y]
    return code


def _relabel_order(leq: Order, perm: Sequence[int]) -> Order:
    n = len(leq)
    rows = [[False] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            rows[perm[x]][perm[y]] = leq[x][y]
    return tuple(tuple(row) for row in rows)


def _is_natural(leq: Order) -> bool:
    n = len(leq)
    return all(not leq[x][y] or x <= y for x in range(n) for y in range(n))


def _is_orderly(leq: Order) -> bool:
    """Keep a natural labelling only if no other natural labelling encodes smaller."""
    n = len(leq)
    own = _order_code(n, leq)
    for arrangement in permutations(range(1, n - 1)):
        perm = [0, *arrangement, n - 1]
        other = _relabel_order(leq, perm)
        if _is_natural(other) and _order_code(n, other) < own:
            return False
    return True


def enumerate_lattices(n: int) -> list[tuple[Order, list[list[int]], list[list[int]]]]:
    """Bounded lattices on n points up to isomorphism, as (order, meet, join)."""
    if n == 1:
        return [(((True,),), [[0]], [[0]])]

    middle = range(1, n - 1)
    candidate_pairs = list(combinations(middle, 2))
    found = []
    for chosen in product((False, True), repeat=len(candidate_pairs)):
        pairs = [pair for pair, keep in zip(candidate_pairs, chosen) if keep]
        leq = _bounded_order(n, pairs)
        if not _is_partial_order(leq) or not _is_orderly(leq):
            continue
        tables = _lattice_tables(leq)
        if tables is not None:
            found.append((leq, *tables))
    return found


def _all_lattices_naive(n: int) -> list[tuple[Order, list[list[int]], list[list[int]]]]:
    """Every labelled bounded lattice on n points, with no isomorphism pruning."""
    if n == 1:
        return [(((True,),), [[0]], [[0]])]
    middle = range(1, n - 1)
    candidate_pairs = [(x, y) for x in middle for y in middle if x != y]
    found = []
    for chosen in product((False, True), repeat=len(candidate_pairs)):
        leq = _bounded_order(n, [pair for pair, keep in zip(candidate_pairs, chosen) if keep])
        if not _is_partial_order(leq):
            continue
        tables = _lattice_tables(leq)
        if tables is not None:
            found.append((leq, *tables))
    return found


# Monoid search


def _boundary_grid(n: int) -> Grid:
    """Entries forced by the unit and by integrality: 1*x = x and 0*x = 0."""
    top = n - 1
    grid: Grid = [[None] * n for _ in range(n)]
    for x in range(n):
        grid[top][x] = grid[x][top] = x
        grid[0][x] = grid[x][0] = 0
    return grid


def _consistent(grid: Grid, leq: Order, join: list[list[int]], x: int, y: int) -> bool:
    """Monotonicity around the cell (x, y), then join preservation and associativity where defined."""
    n = len(grid)
    v = grid[x][y]
    for c in range(n):
        for d in range(n):
            w = grid[c][d]
            if w is None:
                continue
            if leq[x][c] and leq[y][d] and not leq[v][w]:
                return False
            if leq[c][x] and leq[d][y] and not leq[w][v]:
                return False

    for a in range(n):
        row = grid[a]
        for b in range(n):
            ab = row[b]
            if ab is None:
                continue
            for c in range(n):
                ac, abc = row[c], row[join[b][c]]
                if ac is not None and abc is not None and abc != join[ab][ac]:
                    return False
                bc = grid[b][c]
                if bc is None:
                    continue
                left, right = grid[ab][c], grid[a][bc]
                if left is not None and right is not None and left != right:
                    return False
    return True


def _residual(mono: list[list[int]], leq: Order) -> list[list[int]] | None:
    n = len(mono)
    impl = [[0] * n for _ in range(n)]
    for y in range(n):
        for z in range(n):
            allowed = [x for x in range(n) if leq[mono[x][y]][z]]
            greatest = [x for x in allowed if all(leq[w][x] for w in allowed)]
            if not greatest:
                return None
            impl[y][z] = greatest[0]
    return impl


def monoid_tables(
    leq: Order,
    meet: list[list[int]],
    join: list[list[int]],
) -> Iterator[list[list[int]]]:
    """Commutative, associative, integral products on the lattice that distribute over joins."""
    n = len(leq)
    grid = _boundary_grid(n)
    cells = [(x, y) for x in range(1, n - 1) for y in range(x, n - 1)]

    def extend(position: int) -> Iterator[list[list[int]]]:
        if position == len(cells):
            yield [[int(v) for v in row] for row in grid]
            return
        x, y = cells[position]
        bound = meet[x][y]
        for v in range(n):
            if not leq[v][bound]:
                continue
            grid[x][y] = grid[y][x] = v
            if _consistent(grid, leq, join, x, y):
                yield from extend(position + 1)
        grid[x][y] = grid[y][x] = None

    if n == 1:
        yield [[0]]
        return
    yield from extend(0)


def _assemble(
    n: int,
    leq: Order,
    meet: list[list[int]],
    join: list[list[int]],
    mono: list[list[int]],
) -> ResiduatedLattice | None:
    impl = _residual(mono, leq)
    if impl is None:
        return None
    return from_tables(n, meet=meet, join=join, mono=mono, impl=impl, bottom=0, top=n - 1, normalized=False)


def _catalog_item(algebra: ResiduatedLattice) -> CatalogItem:
    representative = canonical_algebra(algebra)
    return CatalogItem(
        key=canonical_key(representative),
        algebra=representative,
        structure=structure_report(representative),
        tags=tuple(subvariety_tags(representative)),
    )


def _name_items(items: Sequence[CatalogItem]) -> tuple[CatalogItem, ...]:
    named = []
    counters: Counter[int] = Counter()
    for item in sorted(items, key=_entry_order):
        size = item.algebra.size
        counters[size] += 1
        algebra = ResiduatedLattice(
            size=size,
            meet=item.algebra.meet,
            join=item.algebra.join,
            mono=item.algebra.mono,
            impl=item.algebra.impl,
            bottom=item.algebra.bottom,
            top=item.algebra.top,
            name=f"RL{size}.{counters[size]}",
        )
        named.append(CatalogItem(item.key, algebra, item.structure, item.tags))
    return tuple(named)


def generate(n: int) -> AlgebraCatalog:
    """All residuated lattices of size n up to isomorphism."""
    _check_size(n, settings.CATALOG_MAX_SIZE)
    started = time.perf_counter()
    stats = SizeStatistics(size=n)
    found: dict[str, ResiduatedLattice] = {}

    for leq, meet, join in enumerate_lattices(n):
        stats.lattices += 1
        for mono in monoid_tables(leq, meet, join):
            stats.mono_candidates += 1
            algebra = _assemble(n, leq, meet, join, mono)
            if algebra is None:
                raise TheoremViolation("join-preserving products have residuals", witness=mono)
            report = validate(algebra)
            if not report.ok:
                raise TheoremViolation("generated tables satisfy the axioms", witness=report.model_dump())
            key = canonical_key(algebra)
            if key in found:
                stats.duplicates += 1
                continue
            found[key] = algebra

    items = [_catalog_item(algebra) for algebra in found.values()]
    stats.accepted = len(items)
    logger.info(
        "size %d: %d lattices, %d products, %d algebras in %.2fs",
        n,
        stats.lattices,
        stats.mono_candidates,
        stats.accepted,
        time.perf_counter() - started,
    )
    return AlgebraCatalog(n, _name_items(items), (stats,))


def generate_up_to(size_bound: int) -> AlgebraCatalog:
    return merge_catalogs([generate(n) for n in range(1, size_bound + 1)])


def _naive_products(n: int, leq: Order, meet: list[list[int]]) -> Iterator[list[list[int]]]:
    top = n - 1
    if n <= 3:
        # Every table, boundary rows included.
        for values in product(range(n), repeat=n * n):
            yield [list(values[row * n:(row + 1) * n]) for row in range(n)]
        return
    middle = list(range(1, n - 1))
    cells = [(x, y) for x in middle for y in middle]
    for values in product(range(n), repeat=len(cells)):
        mono = [[0] * n for _ in range(n)]
        for x in range(n):
            mono[top][x] = mono[x][top] = x
        for (x, y), v in zip(cells, values):
            mono[x][y] = v
        yield mono


def _plausible(mono: list[list[int]], top: int) -> bool:
    n = len(mono)
    if any(mono[top][x] != x or mono[x][y] != mono[y][x] for x in range(n) for y in range(n)):
        return False
    return all(
        mono[mono[x][y]][z] == mono[x][mono[y][z]]
        for x in range(n)
        for y in range(n)
        for z in range(n)
    )


def generate_naive(n: int) -> list[ResiduatedLattice]:
    """Independent oracle: brute-force tables, full validation and pairwise isomorphism tests."""
    _check_size(n, settings.NAIVE_CATALOG_MAX_SIZE)
    representatives: list[ResiduatedLattice] = []
    for leq, meet, join in _all_lattices_naive(n):
        for mono in _naive_products(n, leq, meet):
            if not _plausible(mono, n - 1):
                continue
            algebra = _assemble(n, leq, meet, join, mono)
            if algebra is None or not validate(algebra).ok:
                continue
            if any(find_isomorphism(algebra, known) is not None for known in representatives):
                continue
            representatives.append(algebra)
    logger.info("naive size %d: %d algebras", n, len(representatives))
    return representatives


def merge_catalogs(catalogs: Sequence[AlgebraCatalog]) -> AlgebraCatalog:
    merged: dict[str, CatalogItem] = {}
    statistics: dict[int, SizeStatistics] = {}
    for catalog in catalogs:
        for item in catalog.items:
            known = merged.get(item.key)
            if known is not None and known.algebra != item.algebra:
                raise TheoremViolation("a canonical key names one algebra", witness=item.key)
            merged.setdefault(item.key, item)
        for stats in catalog.statistics:
            statistics.setdefault(stats.size, stats)

    bound = max((c.size_bound for c in catalogs), default=0)
    items = tuple(sorted(merged.values(), key=_entry_order))
    return AlgebraCatalog(bound, items, tuple(statistics[size] for size in sorted(statistics)))

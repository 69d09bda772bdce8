from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property

from app.core.errors import NotDownDirectedError, PreconditionError, StructuralError


Table = tuple[tuple[int, ...], ...]
OPERATIONS = ("meet", "join", "mono", "impl")


def mask_of(members: Iterable[int]) -> int:
    mask = 0
    for x in members:
        mask |= 1 << x
    return mask


def members_of(mask: int) -> tuple[int, ...]:
    members = []
    x = 0
    while mask:
        if mask & 1:
            members.append(x)
        mask >>= 1
        x += 1
    return tuple(members)


def canonical_labels(labels: Iterable[int]) -> tuple[int, ...]:
    """Renumber block labels in order of first occurrence."""
    renumber: dict[int, int] = {}
    return tuple(renumber.setdefault(label, len(renumber)) for label in labels)


@dataclass(frozen=True)
class ResiduatedLattice:
    size: int
    meet: Table
    join: Table
    mono: Table
    impl: Table
    bottom: int
    top: int
    name: str | None = field(default=None, compare=False)

    @property
    def carrier(self) -> range:
        return range(self.size)

    @property
    def is_trivial(self) -> bool:
        return self.size == 1

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def table(self, operation: str) -> Table:
        return getattr(self, operation)

    def leq(self, x: int, y: int) -> bool:
        return self.meet[x][y] == x

    def power(self, x: int, exponent: int) -> int:
        result = self.top
        for _ in range(exponent):
            result = self.mono[result][x]
        return result

    def neg(self, x: int) -> int:
        return self.impl[x][self.bottom]

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        return tuple(
            mask_of(y for y in self.carrier if self.leq(x, y)) for x in self.carrier
        )

    @cached_property
    def idempotents(self) -> tuple[int, ...]:
        return tuple(x for x in self.carrier if self.mono[x][x] == x)

    def label(self) -> str:
        return self.name or f"algebra[{self.size}]"


@dataclass(frozen=True)
class Homomorphism:
    source: ResiduatedLattice
    target: ResiduatedLattice
    map: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.map[x]

    @property
    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    @property
    def is_surjective(self) -> bool:
        return set(self.map) == set(self.target.carrier)

    def compose(self, after: "Homomorphism") -> "Homomorphism":
        """`after` applied to the result of `self`."""
        return Homomorphism(self.source, after.target, tuple(after.map[y] for y in self.map))


@dataclass(frozen=True, order=False)
class FilterSet:
    algebra: ResiduatedLattice = field(compare=False, repr=False)
    mask: int

    @cached_property
    def members(self) -> tuple[int, ...]:
        return members_of(self.mask)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    @property
    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self), self.members)

    @property
    def is_trivial(self) -> bool:
        return self.mask == 1 << self.algebra.top

    @property
    def is_proper(self) -> bool:
        return self.mask != self.algebra.full_mask

    def issubset(self, other: "FilterSet") -> bool:
        return self.mask & ~other.mask == 0

    def intersection(self, other: "FilterSet") -> "FilterSet":
        return FilterSet(self.algebra, self.mask & other.mask)

    def to_list(self) -> list[int]:
        return list(self.members)

    def __str__(self) -> str:
        return "{" + ",".join(str(x) for x in self.members) + "}"


@dataclass(frozen=True)
class CongruenceRelation:
    algebra: ResiduatedLattice = field(compare=False, repr=False)
    partition: tuple[int, ...]

    @classmethod
    def from_labels(cls, algebra: ResiduatedLattice, labels: Iterable[int]) -> "CongruenceRelation":
        return cls(algebra, canonical_labels(labels))

    @cached_property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        grouped: dict[int, list[int]] = {}
        for x, label in enumerate(self.partition):
            grouped.setdefault(label, []).append(x)
        return tuple(tuple(block) for _, block in sorted(grouped.items()))

    @cached_property
    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((x, y) for block in self.blocks for x in block for y in block)

    def related(self, x: int, y: int) -> bool:
        return self.partition[x] == self.partition[y]

    def block_of(self, x: int) -> tuple[int, ...]:
        return self.blocks[self.partition[x]]

    @property
    def is_identity(self) -> bool:
        return len(self.blocks) == len(self.partition)

    @property
    def is_total(self) -> bool:
        return len(self.blocks) == 1


def is_down_directed(family: Iterable[FilterSet]) -> tuple[FilterSet, FilterSet] | None:
    """Return a pair without a common lower member, or None when directed."""
    members = list(family)
    for i, first in enumerate(members):
        for second in members[i:]:
            meet_mask = first.mask & second.mask
            if not any(h.mask & ~meet_mask == 0 for h in members):
                return first, second
    return None


@dataclass(frozen=True)
class SystemOfFilters:
    algebra: ResiduatedLattice = field(compare=False, repr=False)
    family: tuple[FilterSet, ...]

    def __post_init__(self) -> None:
        if not self.family:
            raise PreconditionError("A system of filters must be nonempty")
        witness = is_down_directed(self.family)
        if witness is not None:
            first, second = witness
            raise NotDownDirectedError(
                f"No member of the family lies below {first} and {second}",
                witness=[first.to_list(), second.to_list()],
            )

    @property
    def minimum(self) -> FilterSet:
        smallest = self.family[0]
        for candidate in self.family:
            for lower in self.family:
                if lower.mask & ~(smallest.mask & candidate.mask) == 0:
                    smallest = lower
                    break
        return smallest

    @property
    def intersection_mask(self) -> int:
        mask = self.algebra.full_mask
        for member in self.family:
            mask &= member.mask
        return mask


@dataclass(frozen=True)
class FiniteTopology:
    n: int
    min_nbhd: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        problems = []
        if len(self.min_nbhd) != self.n:
            problems.append(f"expected {self.n} neighbourhoods, got {len(self.min_nbhd)}")
        for x, nbhd in enumerate(self.min_nbhd):
            if x not in nbhd:
                problems.append(f"{x} is missing from its own neighbourhood")
            for y in nbhd:
                if not 0 <= y < self.n:
                    problems.append(f"neighbourhood of {x} names {y} outside the carrier")
                elif not self.min_nbhd[y] <= nbhd:
                    problems.append(f"N({y}) is not contained in N({x})")
        if problems:
            raise StructuralError("Not an Alexandrov neighbourhood map", problems)

    @classmethod
    def discrete(cls, n: int) -> "FiniteTopology":
        return cls(n, tuple(frozenset({x}) for x in range(n)))

    @classmethod
    def antidiscrete(cls, n: int) -> "FiniteTopology":
        everything = frozenset(range(n))
        return cls(n, tuple(everything for _ in range(n)))

    @classmethod
    def from_partition(cls, labels: tuple[int, ...]) -> "FiniteTopology":
        blocks: dict[int, set[int]] = {}
        for x, label in enumerate(labels):
            blocks.setdefault(label, set()).add(x)
        return cls(len(labels), tuple(frozenset(blocks[label]) for label in labels))

    def is_open(self, subset: Iterable[int]) -> bool:
        members = set(subset)
        return all(self.min_nbhd[x] <= members for x in members)

    def is_closed(self, subset: Iterable[int]) -> bool:
        members = set(subset)
        return self.is_open(x for x in range(self.n) if x not in members)

    @property
    def is_discrete(self) -> bool:
        return all(len(nbhd) == 1 for nbhd in self.min_nbhd)

    @property
    def is_antidiscrete(self) -> bool:
        return all(len(nbhd) == self.n for nbhd in self.min_nbhd)

    def finer_than(self, other: "FiniteTopology") -> bool:
        """Every open set of `other` is open here."""
        return all(mine <= theirs for mine, theirs in zip(self.min_nbhd, other.min_nbhd))

    def to_lists(self) -> list[list[int]]:
        return [sorted(nbhd) for nbhd in self.min_nbhd]


@dataclass(frozen=True)
class DirectedPoset:
    elements: tuple[str, ...]
    leq: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        if not self.elements:
            raise PreconditionError("A directed poset must be nonempty")
        known = set(self.elements)
        if len(known) != len(self.elements):
            raise StructuralError("Poset elements must be distinct")
        for i, j in self.leq:
            if i not in known or j not in known:
                raise StructuralError(f"Order pair ({i}, {j}) names an unknown element")
        for i in self.elements:
            if (i, i) not in self.leq:
                raise StructuralError(f"Order is not reflexive at {i}")
        for i, j in self.leq:
            if i != j and (j, i) in self.leq:
                raise StructuralError(f"Order is not antisymmetric on ({i}, {j})")
            for k in self.elements:
                if (j, k) in self.leq and (i, k) not in self.leq:
                    raise StructuralError(f"Order is not transitive on ({i}, {j}, {k})")
        for i in self.elements:
            for j in self.elements:
                if self.upper_bound(i, j) is None:
                    raise StructuralError(f"Elements {i} and {j} have no upper bound")

    def le(self, i: str, j: str) -> bool:
        return (i, j) in self.leq

    def upper_bound(self, i: str, j: str) -> str | None:
        for k in self.elements:
            if (i, k) in self.leq and (j, k) in self.leq:
                return k
        return None

    def below(self, i: str) -> tuple[str, ...]:
        return tuple(j for j in self.elements if (j, i) in self.leq)


@dataclass(frozen=True, eq=False)
class InverseSystem:
    index: DirectedPoset
    algebras: Mapping[str, ResiduatedLattice]
    # (i, j) with j <= i maps algebras[i] to algebras[j]
    transitions: Mapping[tuple[str, str], Homomorphism]

    def transition(self, i: str, j: str) -> Homomorphism:
        return self.transitions[(i, j)]

    @property
    def product_size(self) -> int:
        total = 1
        for algebra in self.algebras.values():
            total *= algebra.size
        return total


@dataclass(frozen=True, eq=False)
class InverseLimit:
    system: InverseSystem
    algebra: ResiduatedLattice
    order: tuple[str, ...]
    threads: tuple[tuple[int, ...], ...]
    projections: Mapping[str, Homomorphism]

    def thread(self, x: int) -> dict[str, int]:
        return dict(zip(self.order, self.threads[x]))

from collections.abc import Iterable, Iterator, Sequence
from itertools import combinations
from typing import TypeVar

import networkx as nx


T = TypeVar("T")


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length n: labels[0] = 0, labels[k] <= 1 + max(labels[:k])."""
    if n == 0:
        yield ()
        return

    labels = [0] * n

    def extend(position: int, highest: int) -> Iterator[tuple[int, ...]]:
        if position == n:
            yield tuple(labels)
            return
        for label in range(highest + 2):
            labels[position] = label
            yield from extend(position + 1, max(highest, label))

    yield from extend(1, 0)


def submasks(mask: int) -> Iterator[int]:
    """All submasks of `mask`, the empty one last."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def nonempty_subfamilies(items: Sequence[T]) -> Iterator[tuple[T, ...]]:
    for size in range(1, len(items) + 1):
        yield from combinations(items, size)


def all_subfamilies(items: Sequence[T]) -> Iterator[tuple[T, ...]]:
    yield ()
    yield from nonempty_subfamilies(items)


def compose_relations(
    first: Iterable[tuple[int, int]],
    second: Iterable[tuple[int, int]],
) -> frozenset[tuple[int, int]]:
    """Pairs (x, z) with x first y and y second z."""
    successors: dict[int, set[int]] = {}
    for y, z in second:
        successors.setdefault(y, set()).add(z)
    return frozenset((x, z) for x, y in first for z in successors.get(y, ()))


def transitive_closure(pairs: Iterable[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    graph = nx.DiGraph()
    graph.add_edges_from(pairs)
    # reflexive=None keeps a loop exactly where a cycle passes through a node.
    return frozenset(nx.transitive_closure(graph, reflexive=None).edges())

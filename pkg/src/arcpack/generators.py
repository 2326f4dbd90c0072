"""Named small digraphs and enumerators used by tests, searches and the CLI."""

from __future__ import annotations

import random
from itertools import permutations
from typing import Iterator

from .digraph import Digraph


def cycle(n: int) -> Digraph:
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


def doubled_cycle(n: int) -> Digraph:
    """Each arc of the directed n-cycle twice; copies are adjacent ids."""
    return Digraph(n, [(i, (i + 1) % n) for i in range(n) for _ in range(2)])


def bidirected_complete(n: int) -> Digraph:
    """All ordered pairs, lexicographic: (0,1), (0,2), ..., (n-1,n-2)."""
    return Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v])


def doubled_digon() -> Digraph:
    """Two vertices with two parallel arcs each way (↔K2 with doubled arcs)."""
    return Digraph(2, [(0, 1), (0, 1), (1, 0), (1, 0)])


def directed_path(n: int) -> Digraph:
    return Digraph(n, [(i, i + 1) for i in range(n - 1)])


def _matrices(n: int, k: int) -> Iterator[list[list[int]]]:
    """Non-negative n×n matrices with zero diagonal and all line sums k."""
    col = [0] * n
    rows: list[list[int]] = []

    def fill_row(i: int, j: int, left: int, row: list[int]):
        if j == n:
            if left == 0:
                yield row
            return
        if j == i:
            yield from fill_row(i, j + 1, left, row + [0])
            return
        top = min(left, k - col[j])
        for c in range(top, -1, -1):
            col[j] += c
            yield from fill_row(i, j + 1, left - c, row + [c])
            col[j] -= c

    def rec(i: int):
        if i == n:
            if all(c == k for c in col):
                yield [r[:] for r in rows]
            return
        for row in fill_row(i, 0, k, []):
            rows.append(row)
            yield from rec(i + 1)
            rows.pop()

    yield from rec(0)


def all_regular_digraphs(n: int, k: int) -> Iterator[Digraph]:
    """Every labelled loopless k-regular multidigraph on n vertices.

    Parallel arcs get consecutive ids; arcs are listed by (tail, head).
    """
    for mat in _matrices(n, k):
        arcs = [(u, v) for u in range(n) for v in range(n) for _ in range(mat[u][v])]
        yield Digraph(n, arcs)


def _derangement(n: int, rng: random.Random) -> list[int]:
    while True:
        p = list(range(n))
        rng.shuffle(p)
        if all(p[i] != i for i in range(n)):
            return p


def random_regular_digraph(n: int, k: int, rng: random.Random) -> Digraph:
    """Union of k random derangements, arcs sorted by (tail, head)."""
    arcs = []
    for _ in range(k):
        p = _derangement(n, rng)
        arcs.extend((i, p[i]) for i in range(n))
    return Digraph(n, sorted(arcs))


def random_multidigraph(n: int, m: int, rng: random.Random) -> Digraph:
    arcs = []
    for _ in range(m):
        u, v = rng.sample(range(n), 2)
        arcs.append((u, v))
    return Digraph(n, arcs)


def derangement_pairs(n: int) -> Iterator[Digraph]:
    """2-regular digraphs as unions of two derangements (duplicates possible)."""
    ders = [p for p in permutations(range(n)) if all(p[i] != i for i in range(n))]
    for a in ders:
        for b in ders:
            yield Digraph(n, sorted([(i, a[i]) for i in range(n)] + [(i, b[i]) for i in range(n)]))


def strong_two_regular_hosts(max_n: int) -> list[Digraph]:
    """2-regular 2-arc-strong digraphs with 2..max_n vertices, one per isomorphism class."""
    from .digraph import arc_connectivity_at_least, is_isomorphic

    hosts: list[Digraph] = []
    for n in range(2, max_n + 1):
        for D in all_regular_digraphs(n, 2):
            if arc_connectivity_at_least(D, 2)[0] and not any(is_isomorphic(D, H) for H in hosts):
                hosts.append(D)
    return hosts

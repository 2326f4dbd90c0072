"""Edge-disjoint spanning tree packing in the underlying multigraph.

Each arc is treated as an undirected edge with the same id. The packing is
grown as a union of k graphic matroids: arcs are offered in id order and
inserted along a shortest path of the exchange graph. When the union stops
short of k(n-1) arcs, the elements that cannot reach a free slot span a
vertex partition violating the Tutte/Nash-Williams inequality.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .digraph import Digraph, DigraphError, Partition, check_arc_ids, weak_components


@dataclass(frozen=True)
class TreePacking:
    trees: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {"kind": "trees", "trees": [list(t) for t in self.trees]}


@dataclass(frozen=True)
class PartitionCertificate:
    partition: Partition
    k: int
    deficiency: int

    def to_json(self) -> dict:
        return {"kind": "tutte", "k": self.k,
                "blocks": [list(b) for b in self.partition.blocks],
                "deficiency": self.deficiency}


class CertificateDefect(RuntimeError):
    """An internally produced certificate failed its own check."""


def tutte_deficiency(D: Digraph, F: Partition | Iterable[Iterable[int]], k: int) -> int:
    """``k(t-1) - e_F``; positive values witness that k trees do not fit."""
    if not isinstance(F, Partition):
        F = Partition.of(D, F)
    return k * (F.t - 1) - F.crossing


class _Forest:
    """Adjacency view of one forest, for tree-path queries."""

    def __init__(self, D: Digraph):
        self.D = D
        self.arcs: set[int] = set()
        self.adj: list[set[int]] = [set() for _ in range(D.n)]

    def add(self, a: int) -> None:
        u, v = self.D.arcs[a]
        self.arcs.add(a)
        self.adj[u].add(a)
        self.adj[v].add(a)

    def remove(self, a: int) -> None:
        u, v = self.D.arcs[a]
        self.arcs.discard(a)
        self.adj[u].discard(a)
        self.adj[v].discard(a)

    def path(self, x: int, y: int) -> list[int] | None:
        """Arc ids on the forest path between x and y, or None if separated."""
        if x == y:
            return []
        pred = {x: -1}
        queue = deque([x])
        while queue:
            w = queue.popleft()
            for a in sorted(self.adj[w]):
                u, v = self.D.arcs[a]
                z = v if u == w else u
                if z not in pred:
                    pred[z] = a
                    if z == y:
                        out = []
                        while z != x:
                            b = pred[z]
                            out.append(b)
                            p, q = self.D.arcs[b]
                            z = p if q == z else q
                        return out
                    queue.append(z)
        return None


def _augment(D: Digraph, forests: list[_Forest], owner: dict[int, int], e: int) -> bool:
    """Try to insert arc ``e`` via a shortest exchange path."""
    k = len(forests)
    parent: dict[int, tuple[int, int]] = {e: (-1, -1)}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        u, v = D.arcs[x]
        home = owner.get(x, -1)
        for i in range(k):
            if i == home:
                continue
            cyc = forests[i].path(u, v)
            if cyc is None:
                # x goes into forest i; unwind the swaps back to e
                target = i
                while x != -1:
                    prev, into = parent[x]
                    if x in owner:
                        forests[owner[x]].remove(x)
                    forests[target].add(x)
                    owner[x] = target
                    x, target = prev, into
                return True
            for y in sorted(cyc):
                if y not in parent:
                    parent[y] = (x, i)
                    queue.append(y)
    return False


def _is_forest(D: Digraph, arcs: Iterable[int]) -> bool:
    parent = list(range(D.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in arcs:
        u, v = D.arcs[a]
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def _blocked_partition(D: Digraph, forests: list[_Forest], owner: dict[int, int]) -> Partition:
    """Partition from the elements that cannot reach a free slot.

    Elements of the union from which an exchange path reaches a forest with
    room form T; everything else (A) is spanned inside every forest by its
    own forest arcs, so the components of A give a tight rank certificate.
    """
    k = len(forests)
    free: set[int] = set()
    succ: dict[int, list[int]] = {}
    for x in range(D.m):
        u, v = D.arcs[x]
        home = owner.get(x, -1)
        out: list[int] = []
        for i in range(k):
            if i == home:
                continue
            cyc = forests[i].path(u, v)
            if cyc is None:
                free.add(x)
            else:
                out.extend(cyc)
        succ[x] = out
    pred: dict[int, list[int]] = {x: [] for x in range(D.m)}
    for x, ys in succ.items():
        for y in ys:
            pred[y].append(x)
    reach = set(free)
    stack = list(free)
    while stack:
        y = stack.pop()
        for x in pred[y]:
            if x not in reach:
                reach.add(x)
                stack.append(x)
    blocked = [D.arcs[x] for x in range(D.m) if x not in reach]
    return Partition.of(D, weak_components(D.n, blocked))


def _set_partitions(items: Sequence[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def exhaustive_deficient_partition(D: Digraph, k: int) -> Partition | None:
    """First partition (in generation order) with positive deficiency."""
    for blocks in _set_partitions(list(range(D.n))):
        P = Partition.of(D, blocks)
        if tutte_deficiency(D, P, k) > 0:
            return P
    return None


def pack_spanning_trees(D: Digraph, k: int) -> TreePacking | PartitionCertificate:
    """Return k edge-disjoint spanning trees of UG(D) or a Tutte certificate."""
    if k <= 0:
        raise DigraphError("k must be positive")
    if D.n < 1:
        raise DigraphError("tree packing needs at least one vertex")
    target = k * (D.n - 1)
    forests = [_Forest(D) for _ in range(k)]
    owner: dict[int, int] = {}
    if target > 0:
        for e in range(D.m):
            if _augment(D, forests, owner, e) and len(owner) == target:
                break
    for f in forests:
        if not _is_forest(D, f.arcs):
            raise CertificateDefect("exchange step produced a cycle")
    if len(owner) == target:
        return TreePacking(tuple(tuple(sorted(f.arcs)) for f in forests))

    P = _blocked_partition(D, forests, owner)
    d = tutte_deficiency(D, P, k)
    if d < 1:
        if D.n > 10:
            raise CertificateDefect(f"extracted partition has deficiency {d}")
        P = exhaustive_deficient_partition(D, k)
        if P is None:
            raise CertificateDefect("packing failed but no deficient partition exists")
        d = tutte_deficiency(D, P, k)
    return PartitionCertificate(P, k, d)


def tree_packing_violations(D: Digraph, trees: Sequence[Sequence[int]]) -> list[str]:
    """Human-readable list of broken invariants; empty means valid."""
    for t in trees:
        check_arc_ids(D, t)
    problems = []
    seen: dict[int, int] = {}
    for i, t in enumerate(trees):
        if len(set(t)) != len(t):
            problems.append(f"tree {i} repeats an arc id")
        if len(t) != D.n - 1:
            problems.append(f"tree {i} has {len(t)} arcs, expected {D.n - 1}")
        elif not _is_forest(D, t):
            problems.append(f"tree {i} contains an undirected cycle")
        for a in t:
            if a in seen and seen[a] != i:
                problems.append(f"arc {a} used by trees {seen[a]} and {i}")
            seen[a] = i
    return problems


def verify_tree_packing(D: Digraph, P: TreePacking | Sequence[Sequence[int]]) -> bool:
    trees = P.trees if isinstance(P, TreePacking) else P
    return not tree_packing_violations(D, trees)


def spanning_tree_subsets(D: Digraph, available: Sequence[int]):
    """All (n-1)-subsets of ``available`` forming a spanning tree, lexicographic."""
    for combo in combinations(available, D.n - 1):
        if _is_forest(D, combo):
            yield combo

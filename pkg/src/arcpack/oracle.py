"""Exponential ground-truth deciders for small instances.

Every oracle enumerates candidate structures in a fixed order (vertex id,
then arc id) and refuses inputs beyond its budget. Where a requirement is
monotone under arc removal (connectivity, reachability), partial candidates
whose remainder already fails are cut off; this never changes the answer.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from .branchings import RootVector
from .cnf import Cnf
from .digraph import (
    Digraph, Partition, degrees, is_eulerian_balanced, is_strongly_connected,
    is_weakly_connected, reachable,
)
from .trees import _set_partitions, spanning_tree_subsets, tutte_deficiency


class BudgetExceeded(RuntimeError):
    """The oracle refused or abandoned an instance over its budget."""


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 16
    max_arcs: int = 48
    time_limit: float = 120.0

    def __post_init__(self):
        if self.max_vertices <= 0 or self.max_arcs <= 0 or self.time_limit <= 0:
            raise ValueError("budget fields must be positive")

    def admit(self, D: Digraph, what: str) -> _Clock:
        if D.n > self.max_vertices or D.m > self.max_arcs:
            raise BudgetExceeded(
                f"{what}: instance with n={D.n}, m={D.m} exceeds budget "
                f"(max_vertices={self.max_vertices}, max_arcs={self.max_arcs})")
        return _Clock(self.time_limit, what)


class _Clock:
    def __init__(self, limit: float, what: str):
        self.deadline = time.monotonic() + limit
        self.what = what
        self.ticks = 0

    def tick(self) -> None:
        self.ticks += 1
        if self.ticks & 1023 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded(f"{self.what}: time limit exceeded")


DEFAULT = OracleBudget()
PATH_BUDGET = OracleBudget(max_vertices=256, max_arcs=512, time_limit=300.0)


# Hamiltonian structures --------------------------------------------------------

def hamiltonian_paths(D: Digraph, start: int | None = None, end: int | None = None,
                      clock: _Clock | None = None) -> Iterator[tuple[int, ...]]:
    """Hamiltonian paths as arc-id sequences, by start vertex then arc id."""
    n = D.n
    starts = range(n) if start is None else [start]
    for s in starts:
        on = [False] * n
        on[s] = True
        path: list[int] = []

        def extend(x: int, depth: int):
            if clock:
                clock.tick()
            if depth == n:
                if end is None or x == end:
                    yield tuple(path)
                return
            for a in D.out_arcs(x):
                y = D.arcs[a][1]
                if on[y] or (y == end and depth < n - 1):
                    continue
                on[y] = True
                path.append(a)
                yield from extend(y, depth + 1)
                path.pop()
                on[y] = False

        yield from extend(s, 1)


def hamiltonian_cycles(D: Digraph, clock: _Clock | None = None) -> Iterator[tuple[int, ...]]:
    """Hamiltonian cycles through vertex 0, as arc-id sequences starting at 0."""
    if D.n < 2:
        return
    for p in hamiltonian_paths(D, start=0, clock=clock):
        last = D.arcs[p[-1]][1] if p else 0
        for a in D.out_arcs(last):
            if D.arcs[a][1] == 0:
                yield p + (a,)


def oracle_ham_pairs(D: Digraph, mode: str = "cycles",
                     endpoints: Sequence[tuple[int | None, int | None] | None] | None = None,
                     budget: OracleBudget = DEFAULT):
    """Two arc-disjoint Hamiltonian cycles or paths.

    ``endpoints`` (paths only) is a pair of ``(start, end)`` constraints, one
    per path, with ``None`` meaning free. Returns ``(found, (first, second))``.
    """
    clock = budget.admit(D, "ham-pair")
    if mode == "cycles":
        if endpoints:
            raise ValueError("endpoint constraints apply to paths only")
        firsts = seconds = list(hamiltonian_cycles(D, clock))
    elif mode == "paths":
        (s1, e1), (s2, e2) = endpoints or ((None, None), (None, None))
        firsts = list(hamiltonian_paths(D, s1, e1, clock))
        seconds = firsts if (s1, e1) == (s2, e2) else list(hamiltonian_paths(D, s2, e2, clock))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    masks = [sum(1 << a for a in p) for p in seconds]
    for p in firsts:
        pm = sum(1 << a for a in p)
        for q, qm in zip(seconds, masks):
            clock.tick()
            if not pm & qm:
                return True, (p, q)
    return False, None


# branchings ------------------------------------------------------------------

def out_branchings(D: Digraph, root: int, removed: frozenset[int] = frozenset(),
                   clock: _Clock | None = None, prune=None) -> Iterator[tuple[int, ...]]:
    """All out-branchings rooted at ``root`` avoiding ``removed``.

    Backtracks over one entering arc per non-root vertex; an arc is rejected
    when following parents from its tail returns to its head. ``prune`` gets
    the partial parent-arc list and may veto the subtree.
    """
    n = D.n
    order = [v for v in range(n) if v != root]
    parent_arc = [-1] * n

    def closes_cycle(u: int, v: int) -> bool:
        x = u
        while x != root and parent_arc[x] != -1:
            if x == v:
                return True
            x = D.arcs[parent_arc[x]][0]
        return x == v

    def rec(i: int):
        if clock:
            clock.tick()
        if i == len(order):
            yield tuple(sorted(parent_arc[v] for v in order))
            return
        v = order[i]
        for a in D.in_arcs(v):
            if a in removed:
                continue
            u = D.arcs[a][0]
            if closes_cycle(u, v):
                continue
            parent_arc[v] = a
            if prune is None or not prune(parent_arc, order[:i + 1]):
                yield from rec(i + 1)
            parent_arc[v] = -1

    if n == 1:
        yield ()
        return
    yield from rec(0)


def _bfs_tree(D: Digraph, root: int, removed: set[int], backward: bool) -> tuple[int, ...] | None:
    """Spanning out-(in-)tree from ``root`` in D - removed, smallest ids first."""
    seen = {root}
    frontier = [root]
    tree = []
    while frontier:
        nxt = []
        for x in frontier:
            for a in (D.in_arcs(x) if backward else D.out_arcs(x)):
                if a in removed:
                    continue
                y = D.arcs[a][0 if backward else 1]
                if y not in seen:
                    seen.add(y)
                    tree.append(a)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(tree)) if len(seen) == D.n else None


def _roots_spanning(D: Digraph, removed: set[int], backward: bool) -> list[int]:
    return [w for w in range(D.n) if len(reachable(D, w, removed, backward)) == D.n]


def oracle_inout_pair(D: Digraph, u: int | None = None, v: int | None = None,
                      budget: OracleBudget = DEFAULT):
    """Arc-disjoint out-branching rooted at u and in-branching rooted at v.

    Out-branchings are enumerated exhaustively; for each one, whether the
    remaining arcs contain an in-branching is a reachability question. A
    vertex whose every leaving arc lies in the out-branching can only be the
    in-branching's root, which prunes most partial candidates.
    Returns ``(found, witness)`` with ``witness = (u, B_out, v, B_in)``.
    """
    clock = budget.admit(D, "inout-pair")
    outdeg = [D.out_degree(x) for x in range(D.n)]

    def prune(parent_arc, assigned):
        used = [0] * D.n
        for x in assigned:
            used[D.arcs[parent_arc[x]][0]] += 1
        full = [x for x in range(D.n) if used[x] == outdeg[x] and outdeg[x] > 0]
        if len(full) > 1:
            return True
        return v is not None and bool(full) and full[0] != v

    for root in (range(D.n) if u is None else [u]):
        for B in out_branchings(D, root, clock=clock, prune=prune):
            used = set(B)
            sinks = [v] if v is not None else range(D.n)
            for w in sinks:
                T = _bfs_tree(D, w, used, backward=True)
                if T is not None:
                    return True, (root, B, w, T)
    return False, None


def oracle_out_branchings(D: Digraph, k: int = 2, roots: Sequence[int | None] | None = None,
                          budget: OracleBudget = DEFAULT):
    """k pairwise arc-disjoint out-branchings with optional fixed roots.

    The first k-1 are enumerated; the last is found by reachability in the
    remainder. Returns ``(found, [(root, arcs), ...])``.
    """
    clock = budget.admit(D, "out-branchings")
    roots = list(roots) if roots is not None else [None] * k
    if len(roots) != k:
        raise ValueError("roots must have length k")

    def rec(i: int, removed: frozenset[int]):
        if i == k - 1:
            cand = range(D.n) if roots[i] is None else [roots[i]]
            for w in cand:
                T = _bfs_tree(D, w, set(removed), backward=False)
                if T is not None:
                    return [(w, T)]
            return None
        cand = range(D.n) if roots[i] is None else [roots[i]]
        for w in cand:
            for B in out_branchings(D, w, removed, clock):
                rest = rec(i + 1, removed | frozenset(B))
                if rest is not None:
                    return [(w, B)] + rest
        return None

    found = rec(0, frozenset())
    return found is not None, found


def oracle_branching_tree(D: Digraph, root: int | None = None,
                          budget: OracleBudget = DEFAULT):
    """Out-branching B (rooted at ``root`` or anywhere) with D - A(B) connected.

    Returns ``(found, (root, B, T))`` where T is a spanning tree of the
    remainder's underlying graph.
    """
    clock = budget.admit(D, "branching-tree")

    def prune(parent_arc, assigned):
        return not is_weakly_connected(D, {parent_arc[x] for x in assigned})

    for w in (range(D.n) if root is None else [root]):
        for B in out_branchings(D, w, clock=clock, prune=prune):
            used = set(B)
            if is_weakly_connected(D, used):
                return True, (w, B, _undirected_tree(D, used))
    return False, None


def _undirected_tree(D: Digraph, removed: set[int]) -> tuple[int, ...]:
    parent = list(range(D.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = []
    for a, (x, y) in enumerate(D.arcs):
        if a in removed:
            continue
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry
            tree.append(a)
    return tuple(tree)


# (s,t)-paths with a remainder requirement --------------------------------------

REQUIREMENTS = ("connected", "strong", "outbranching_from_s")


def _remainder_ok(D: Digraph, removed: set[int], requirement: str, s: int) -> bool:
    if requirement == "connected":
        return is_weakly_connected(D, removed)
    if requirement == "strong":
        return is_strongly_connected(D, removed)
    if requirement == "outbranching_from_s":
        return len(reachable(D, s, removed)) == D.n
    raise ValueError(f"unknown requirement {requirement!r}")


def remainder_paths(D: Digraph, s: int, t: int, requirement: str,
                    clock: _Clock | None = None,
                    removed: frozenset[int] = frozenset()) -> Iterator[tuple[int, ...]]:
    """Directed (s,t)-paths P whose remainder D - removed - A(P) meets ``requirement``."""
    if requirement not in REQUIREMENTS:
        raise ValueError(f"unknown requirement {requirement!r}")
    on = {s}
    path: list[int] = []
    used: set[int] = set(removed)

    def rec(x: int):
        if clock:
            clock.tick()
        if x == t:
            yield tuple(path)
            return
        for a in D.out_arcs(x):
            y = D.arcs[a][1]
            if y in on or a in used:
                continue
            used.add(a)
            if _remainder_ok(D, used, requirement, s):
                on.add(y)
                path.append(a)
                yield from rec(y)
                path.pop()
                on.discard(y)
            used.discard(a)

    if s == t:
        raise ValueError("s and t must be distinct")
    if not _remainder_ok(D, used, requirement, s):
        return
    yield from rec(s)


def oracle_remainder_path(D: Digraph, s: int, t: int, requirement: str = "connected",
                          budget: OracleBudget = PATH_BUDGET):
    """Is there an (s,t)-path P with D - A(P) connected / strong / rooted at s?"""
    clock = budget.admit(D, f"remainder-path[{requirement}]")
    for P in remainder_paths(D, s, t, requirement, clock):
        return True, P
    return False, None


def oracle_remainder_cycle(D: Digraph, s: int, requirement: str = "connected",
                           budget: OracleBudget = PATH_BUDGET):
    """Is there a directed cycle C through s with D - A(C) meeting ``requirement``?

    Each arc (x, s) closes the paths from s to x. Returns ``(found, arcs)``
    with the cycle's arcs in traversal order.
    """
    clock = budget.admit(D, f"remainder-cycle[{requirement}]")
    for a in D.in_arcs(s):
        x = D.arcs[a][0]
        for P in remainder_paths(D, s, x, requirement, clock, frozenset([a])):
            return True, P + (a,)
    return False, None


# trees, root vectors, SAT ------------------------------------------------------

def oracle_tree_packing(D: Digraph, k: int, method: str = "partitions",
                        budget: OracleBudget = OracleBudget(max_vertices=8, max_arcs=64)) -> bool:
    """Tutte's condition over all partitions, or explicit tree families.

    ``method="both"`` runs the two and insists they agree (tree families
    only when m <= 14).
    """
    clock = budget.admit(D, "trees")
    if k < 1:
        raise ValueError("k must be positive")
    by_partition = by_trees = None
    if method in ("partitions", "both"):
        by_partition = True
        for blocks in _set_partitions(list(range(D.n))):
            clock.tick()
            if tutte_deficiency(D, Partition.of(D, blocks), k) > 0:
                by_partition = False
                break
    if method in ("trees", "both") and (method == "trees" or D.m <= 14):
        by_trees = _tree_families(D, k, tuple(range(D.m)), clock)
    if method not in ("partitions", "trees", "both"):
        raise ValueError(f"unknown method {method!r}")
    if by_partition is not None and by_trees is not None and by_partition != by_trees:
        raise AssertionError("partition and tree-family oracles disagree")
    return by_partition if by_partition is not None else by_trees


def _tree_families(D: Digraph, k: int, available: tuple[int, ...], clock: _Clock) -> bool:
    if k == 0:
        return True
    if len(available) < k * (D.n - 1):
        return False
    for T in spanning_tree_subsets(D, available):
        clock.tick()
        # trees are produced in lexicographic order, so requiring the next
        # tree to start after this one's first arc removes permutations
        rest = tuple(a for a in available if a not in T and a > T[0]) if T else available
        if _tree_families(D, k - 1, rest, clock):
            return True
    return False


def oracle_root_vector(D: Digraph, r: RootVector,
                       budget: OracleBudget = OracleBudget(max_vertices=6, max_arcs=64)):
    """Direct subset scan of ``d^-(X) >= k - r(X)``; returns ``(ok, X)``."""
    clock = budget.admit(D, "root-vector")
    for mask in range(1, 1 << D.n):
        clock.tick()
        X = [v for v in range(D.n) if mask >> v & 1]
        if degrees(D, X)[0] < r.k - r.of(X):
            return False, X
    return True, None


def oracle_sat(F: Cnf, max_variables: int = 20):
    """Exhaustive assignment scan; returns ``(sat, assignment)``.

    Assignments are tried as binary counters with variable 0 most
    significant and ``True`` first.
    """
    if F.variable_count > max_variables:
        raise BudgetExceeded(f"sat: {F.variable_count} variables exceeds {max_variables}")
    for bits in product((True, False), repeat=F.variable_count):
        if F.satisfied_by(bits):
            return True, list(bits)
    return False, None


# searches ----------------------------------------------------------------------

@dataclass
class EulerianCounterexample:
    digraph: Digraph
    branching_tree: tuple          # (root, out-branching arcs, tree arcs of remainder)


def _balanced_digraphs(n: int, max_mult: int) -> Iterator[Digraph]:
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    for mult in product(range(max_mult + 1), repeat=len(pairs)):
        bal = [0] * n
        for (u, v), c in zip(pairs, mult):
            bal[u] += c
            bal[v] -= c
        if any(bal):
            continue
        arcs = [p for p, c in zip(pairs, mult) for _ in range(c)]
        yield Digraph(n, arcs)


def search_eulerian_counterexample(max_n: int = 6, max_mult: int = 2,
                                   budget: OracleBudget = DEFAULT):
    """First Eulerian digraph with an out-branching leaving a connected
    remainder but no two arc-disjoint out-branchings.

    Searches n = 2..max_n, simple digraphs before multidigraphs. Returns an
    :class:`EulerianCounterexample` or ``None``.
    """
    deadline = time.monotonic() + budget.time_limit
    for n in range(2, max_n + 1):
        for mult in range(1, max_mult + 1):
            if n >= 5 and mult > 1:
                continue
            for D in _balanced_digraphs(n, mult):
                if time.monotonic() > deadline:
                    raise BudgetExceeded("eulerian search: time limit exceeded")
                if D.m < 2 * n - 2 or not is_weakly_connected(D):
                    continue
                found, witness = oracle_branching_tree(D, budget=budget)
                if not found:
                    continue
                pair, _ = oracle_out_branchings(D, 2, budget=budget)
                if not pair:
                    assert is_eulerian_balanced(D)
                    return EulerianCounterexample(D, witness)
    return None


def search_fixed_root_counterexample(max_n: int = 6, budget: OracleBudget = DEFAULT):
    """2-regular digraph and vertex s where free roots work but s does not.

    Free roots: two arc-disjoint out-branchings exist. Fixed root: no
    out-branching rooted at s leaves a connected remainder. Returns
    ``(D, s, free_witness)`` or ``None``.
    """
    from .generators import derangement_pairs

    seen: set[Digraph] = set()
    for n in range(2, max_n + 1):
        for D in derangement_pairs(n):
            if D in seen:
                continue
            seen.add(D)
            if not is_weakly_connected(D):
                continue
            ok, witness = oracle_out_branchings(D, 2, budget=budget)
            if not ok:
                continue
            for s in range(n):
                if not oracle_branching_tree(D, root=s, budget=budget)[0]:
                    return D, s, witness
    return None

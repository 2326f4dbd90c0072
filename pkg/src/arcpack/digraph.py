"""Directed multigraphs with stable arc ids.

Arcs are numbered densely in insertion order and every substructure in the
package (paths, trees, branchings) is a set of those ids, so parallel arcs
stay distinguishable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class DigraphError(ValueError):
    """Raised for malformed digraphs or invalid arguments."""


class Digraph:
    """Immutable loopless directed multigraph on vertices ``0..n-1``."""

    __slots__ = ("n", "arcs", "labels", "_out", "_in")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]],
                 labels: Sequence[str] | None = None):
        if n < 0:
            raise DigraphError(f"negative vertex count {n}")
        arcs = tuple((int(u), int(v)) for u, v in arcs)
        out: list[list[int]] = [[] for _ in range(n)]
        inc: list[list[int]] = [[] for _ in range(n)]
        for i, (u, v) in enumerate(arcs):
            if not (0 <= u < n and 0 <= v < n):
                raise DigraphError(f"arc {i} ({u},{v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise DigraphError(f"arc {i} ({u},{v}) is a self-loop")
            out[u].append(i)
            inc[v].append(i)
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise DigraphError(f"expected {n} labels, got {len(labels)}")
        self.n = n
        self.arcs = arcs
        self.labels = labels
        self._out = tuple(tuple(a) for a in out)
        self._in = tuple(tuple(a) for a in inc)

    @property
    def m(self) -> int:
        return len(self.arcs)

    def out_arcs(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def in_arcs(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def out_degree(self, v: int) -> int:
        return len(self._out[v])

    def in_degree(self, v: int) -> int:
        return len(self._in[v])

    def tail(self, a: int) -> int:
        return self.arcs[a][0]

    def head(self, a: int) -> int:
        return self.arcs[a][1]

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def reverse(self) -> Digraph:
        """Same vertices, every arc flipped; arc ids are preserved."""
        return Digraph(self.n, [(v, u) for u, v in self.arcs], self.labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"


def build_digraph(n: int, arc_list: Iterable[tuple[int, int]],
                  labels: Sequence[str] | None = None) -> Digraph:
    return Digraph(n, arc_list, labels)


def check_arc_ids(D: Digraph, ids: Iterable[int]) -> None:
    for a in ids:
        if not isinstance(a, int) or not 0 <= a < D.m:
            raise DigraphError(f"arc id {a!r} out of range for a digraph with {D.m} arcs")


def arc_set(D: Digraph, ids: Iterable[int]) -> tuple[int, ...]:
    """Validate ``ids`` against ``D`` and return them sorted without duplicates."""
    ids = list(ids)
    check_arc_ids(D, ids)
    if len(set(ids)) != len(ids):
        raise DigraphError("arc set contains duplicate ids")
    return tuple(sorted(ids))


def degrees(D: Digraph, X: Iterable[int]) -> tuple[int, int, int]:
    """Return ``(d_in, d_out, inside)`` for the vertex set ``X``.

    ``d_in`` counts arcs entering X, ``d_out`` arcs leaving X and ``inside``
    arcs with both ends in X.
    """
    X = set(X)
    if not X:
        raise DigraphError("vertex set must be non-empty")
    for v in X:
        if not 0 <= v < D.n:
            raise DigraphError(f"vertex {v} out of range")
    d_in = d_out = inside = 0
    for u, v in D.arcs:
        if u in X and v in X:
            inside += 1
        elif v in X:
            d_in += 1
        elif u in X:
            d_out += 1
    return d_in, d_out, inside


def is_k_regular(D: Digraph, k: int) -> bool:
    return all(D.in_degree(v) == k and D.out_degree(v) == k for v in range(D.n))


def regular_degree(D: Digraph) -> int | None:
    """Common in/out-degree if ``D`` is regular, else ``None``."""
    if D.n == 0:
        return None
    k = D.out_degree(0)
    return k if is_k_regular(D, k) else None


def is_eulerian_balanced(D: Digraph) -> bool:
    return all(D.in_degree(v) == D.out_degree(v) for v in range(D.n))


def reachable(D: Digraph, start: int, removed: frozenset[int] | set[int] = frozenset(),
              backward: bool = False) -> set[int]:
    """Vertices reachable from ``start`` using arcs not in ``removed``.

    With ``backward`` the arcs are followed against their direction.
    """
    seen = {start}
    stack = [start]
    adj = D._in if backward else D._out
    end = 0 if backward else 1
    while stack:
        x = stack.pop()
        for a in adj[x]:
            if a in removed:
                continue
            y = D.arcs[a][end]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def weak_components(n: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    """Connected components of the undirected multigraph on ``0..n-1``.

    Components are sorted lists, ordered by their smallest vertex.
    """
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def is_weakly_connected(D: Digraph, removed: frozenset[int] | set[int] = frozenset()) -> bool:
    if D.n <= 1:
        return True
    edges = (arc for i, arc in enumerate(D.arcs) if i not in removed)
    return len(weak_components(D.n, edges)) == 1


def is_strongly_connected(D: Digraph, removed: frozenset[int] | set[int] = frozenset()) -> bool:
    if D.n <= 1:
        return True
    return (len(reachable(D, 0, removed)) == D.n
            and len(reachable(D, 0, removed, backward=True)) == D.n)


def connectivity(D: Digraph) -> tuple[bool, bool]:
    """``(weakly_connected, strongly_connected)``."""
    if D.n < 1:
        raise DigraphError("connectivity needs at least one vertex")
    return is_weakly_connected(D), is_strongly_connected(D)


# unit-capacity max flow ----------------------------------------------------

def max_flow(n: int, arcs: Sequence[tuple[int, int]], s: int, t: int,
             limit: int | None = None) -> tuple[int, set[int]]:
    """Unit-capacity maximum flow from ``s`` to ``t``.

    Returns ``(value, source_side)``. Augmentation stops once ``limit`` units
    are routed; ``source_side`` is the residual reachability set from ``s``
    after the last (failed or stopped) search, so it is a minimum cut only
    when the value is below ``limit``.
    """
    out: list[list[int]] = [[] for _ in range(n)]
    inc: list[list[int]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(arcs):
        out[u].append(i)
        inc[v].append(i)
    flow = bytearray(len(arcs))
    value = 0
    while limit is None or value < limit:
        pred: dict[int, tuple[int, bool]] = {s: (-1, True)}
        queue = deque([s])
        while queue and t not in pred:
            x = queue.popleft()
            for a in out[x]:
                y = arcs[a][1]
                if not flow[a] and y not in pred:
                    pred[y] = (a, True)
                    queue.append(y)
            for a in inc[x]:
                y = arcs[a][0]
                if flow[a] and y not in pred:
                    pred[y] = (a, False)
                    queue.append(y)
        if t not in pred:
            return value, set(pred)
        x = t
        while x != s:
            a, forward = pred[x]
            flow[a] = 1 if forward else 0
            x = arcs[a][0] if forward else arcs[a][1]
        value += 1
    return value, set()


def arc_connectivity_at_least(D: Digraph, k: int) -> tuple[bool, set[int] | None]:
    """Decide whether ``D`` is k-arc-strong.

    On failure the second component is a non-empty proper vertex set X with
    ``d^+(X) < k``, taken from the source side of a deficient minimum cut.
    """
    if D.n < 2:
        raise DigraphError("arc-strength needs at least two vertices")
    if k < 1:
        raise DigraphError("k must be positive")
    for v in range(1, D.n):
        for s, t in ((0, v), (v, 0)):
            value, side = max_flow(D.n, D.arcs, s, t, limit=k)
            if value < k:
                return False, side
    return True, None


def split_vertex(D: Digraph, v: int) -> tuple[Digraph, int, int]:
    """Split ``v`` into an in-part and an out-part.

    The in-part keeps the id ``v`` and absorbs every arc entering v; the
    out-part is the new vertex ``n`` and emits every arc leaving v. Arc ids
    are unchanged. Returns ``(digraph, v_minus, v_plus)``.
    """
    if not 0 <= v < D.n:
        raise DigraphError(f"vertex {v} out of range")
    plus = D.n
    arcs = [(plus if a == v else a, b) for a, b in D.arcs]
    labels = None
    if D.labels is not None:
        labels = list(D.labels)
        labels[v] = D.labels[v] + "-"
        labels.append(D.labels[v] + "+")
    return Digraph(D.n + 1, arcs, labels), v, plus


def identify_vertices(D: Digraph, keep: int, drop: int) -> Digraph:
    """Merge ``drop`` into ``keep``; later vertices shift down by one."""
    if keep == drop:
        raise DigraphError("cannot identify a vertex with itself")

    def f(x: int) -> int:
        x = keep if x == drop else x
        return x - 1 if x > drop else x

    return Digraph(D.n - 1, [(f(u), f(v)) for u, v in D.arcs])


def disjoint_union(*parts: Digraph) -> tuple[Digraph, list[int]]:
    """Place the digraphs side by side; returns the vertex offset of each."""
    offsets, arcs, n = [], [], 0
    for P in parts:
        offsets.append(n)
        arcs.extend((u + n, v + n) for u, v in P.arcs)
        n += P.n
    return Digraph(n, arcs), offsets


def is_isomorphic(D: Digraph, E: Digraph) -> bool:
    """Brute-force multidigraph isomorphism, intended for tiny inputs."""
    from collections import Counter
    from itertools import permutations

    if D.n != E.n or D.m != E.m:
        return False
    target = Counter(E.arcs)
    sig_d = sorted((D.in_degree(v), D.out_degree(v)) for v in range(D.n))
    sig_e = sorted((E.in_degree(v), E.out_degree(v)) for v in range(E.n))
    if sig_d != sig_e:
        return False
    for perm in permutations(range(D.n)):
        if Counter((perm[u], perm[v]) for u, v in D.arcs) == target:
            return True
    return False


@dataclass(frozen=True)
class Partition:
    """A partition of the vertices of ``D`` with its crossing-arc count cached."""

    blocks: tuple[tuple[int, ...], ...]
    crossing: int = field(compare=False)

    @classmethod
    def of(cls, D: Digraph, blocks: Iterable[Iterable[int]]) -> Partition:
        blocks = tuple(tuple(sorted(b)) for b in blocks)
        seen: dict[int, int] = {}
        for i, b in enumerate(blocks):
            if not b:
                raise DigraphError("partition blocks must be non-empty")
            for v in b:
                if not 0 <= v < D.n:
                    raise DigraphError(f"vertex {v} out of range")
                if v in seen:
                    raise DigraphError(f"vertex {v} appears in two blocks")
                seen[v] = i
        if len(seen) != D.n:
            missing = sorted(set(range(D.n)) - set(seen))
            raise DigraphError(f"partition misses vertices {missing}")
        if not blocks:
            raise DigraphError("partition needs at least one block")
        crossing = sum(1 for u, v in D.arcs if seen[u] != seen[v])
        return cls(tuple(sorted(blocks)), crossing)

    @property
    def t(self) -> int:
        return len(self.blocks)


# text format / DOT -----------------------------------------------------------

def parse_digraph(text: str) -> Digraph:
    """Parse the ``n m`` header + ``tail head`` lines format."""
    rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append((lineno, line.split()))
    if not rows:
        raise DigraphError("line 1: missing 'n m' header")
    lineno, head = rows[0]
    try:
        n, m = (int(x) for x in head)
    except ValueError:
        raise DigraphError(f"line {lineno}: expected 'n m', got {' '.join(head)!r}") from None
    if len(rows) - 1 != m:
        last = rows[-1][0]
        raise DigraphError(f"line {last}: header declares {m} arcs, found {len(rows) - 1}")
    arcs = []
    for lineno, parts in rows[1:]:
        try:
            u, v = (int(x) for x in parts)
        except ValueError:
            raise DigraphError(f"line {lineno}: expected 'tail head', got {' '.join(parts)!r}") from None
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise DigraphError(f"line {lineno}: invalid arc ({u},{v}) for n={n}")
        arcs.append((u, v))
    return Digraph(n, arcs)


def format_digraph(D: Digraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{D.n} {D.m}")
    lines.extend(f"{u} {v}" for u, v in D.arcs)
    return "\n".join(lines) + "\n"


def read_digraph(path) -> Digraph:
    with open(path, encoding="utf-8") as fh:
        return parse_digraph(fh.read())


def write_digraph(D: Digraph, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_digraph(D, comment))


def to_dot(D: Digraph, name: str = "D", highlight: Sequence[Iterable[int]] = ()) -> str:
    """DOT text with arc ids as edge labels; ``highlight`` arc sets get colours."""
    palette = ["red", "blue", "darkgreen", "orange", "purple", "brown"]
    colour: dict[int, str] = {}
    for i, ids in enumerate(highlight):
        for a in ids:
            colour[a] = palette[i % len(palette)]
    lines = [f"digraph {name} {{"]
    for v in range(D.n):
        lines.append(f'  {v} [label="{D.label(v)}"];')
    for i, (u, v) in enumerate(D.arcs):
        extra = f', color="{colour[i]}"' if i in colour else ""
        lines.append(f'  {u} -> {v} [label="{i}"{extra}];')
    lines.append("}")
    return "\n".join(lines) + "\n"

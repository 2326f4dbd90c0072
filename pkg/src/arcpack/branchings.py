"""Root vectors and arc-disjoint out-/in-branchings.

Feasibility of a root vector is decided with a super-root: a new vertex
carrying ``r(v)`` parallel arcs to every v, from which every original vertex
must receive k arc-disjoint paths. Construction follows Lovász's proof of
Edmonds' branching theorem, growing one arborescence at a time and only
admitting arcs that keep the remaining connectivity intact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .digraph import Digraph, DigraphError, check_arc_ids, degrees, max_flow


@dataclass(frozen=True)
class RootVector:
    multiplicities: Mapping[int, int]
    k: int = field(default=-1)

    def __post_init__(self):
        mult = {int(v): int(c) for v, c in self.multiplicities.items() if c}
        if any(c < 0 for c in mult.values()):
            raise DigraphError("root multiplicities must be non-negative")
        total = sum(mult.values())
        k = total if self.k == -1 else self.k
        if k < 1:
            raise DigraphError("a root vector needs k >= 1")
        if total != k:
            raise DigraphError(f"root multiplicities sum to {total}, expected k={k}")
        object.__setattr__(self, "multiplicities", dict(sorted(mult.items())))
        object.__setattr__(self, "k", k)

    def __getitem__(self, v: int) -> int:
        return self.multiplicities.get(v, 0)

    def of(self, X: Iterable[int]) -> int:
        return sum(self[v] for v in X)

    def roots(self) -> list[int]:
        """Roots as a sorted multiset."""
        return [v for v, c in self.multiplicities.items() for _ in range(c)]

    @classmethod
    def parse(cls, text: str, k: int | None = None) -> RootVector:
        """Parse ``"v:count,v:count"``."""
        mult: dict[int, int] = {}
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            v, _, c = item.partition(":")
            try:
                mult[int(v)] = mult.get(int(v), 0) + int(c or 1)
            except ValueError:
                raise DigraphError(f"bad root spec {item!r}; expected v:count") from None
        return cls(mult, -1 if k is None else k)


@dataclass(frozen=True)
class BranchingSet:
    branchings: tuple[tuple[int, ...], ...]
    roots: tuple[int, ...]

    def to_json(self) -> dict:
        return {"kind": "branchings", "roots": list(self.roots),
                "branchings": [list(b) for b in self.branchings]}


class RootVectorViolation(DigraphError):
    """Raised when a root vector is infeasible; carries the violating set."""

    def __init__(self, X: Iterable[int], r: RootVector, reversed_: bool = False):
        self.X = sorted(X)
        self.r = r
        where = " in the reversed digraph" if reversed_ else ""
        super().__init__(f"root vector violated by X={self.X}{where}")

    def to_json(self) -> dict:
        return {"kind": "rootvector-violation", "X": self.X, "k": self.r.k,
                "roots": {str(v): c for v, c in self.r.multiplicities.items()}}


def _augmented(D: Digraph, r: RootVector) -> tuple[int, list[tuple[int, int]]]:
    """Digraph arcs with super-root ``n`` appended after the original ids."""
    rho = D.n
    arcs = list(D.arcs)
    for v, c in r.multiplicities.items():
        arcs.extend((rho, v) for _ in range(c))
    return rho, arcs


def _check_r(D: Digraph, r: RootVector) -> None:
    for v in r.multiplicities:
        if not 0 <= v < D.n:
            raise DigraphError(f"root vertex {v} out of range")


def check_root_vector(D: Digraph, r: RootVector) -> tuple[bool, list[int] | None]:
    """Decide ``d^-(X) >= k - r(X)`` for all non-empty X.

    Returns ``(True, None)`` or ``(False, X)`` where X is the sink side of a
    deficient minimum cut in the super-root digraph. Each deficient vertex
    contributes its smallest such sink side (found by a flow on the reversed
    arcs); the smallest of these is reported.
    """
    _check_r(D, r)
    rho, arcs = _augmented(D, r)
    back = [(v, u) for u, v in arcs]
    best = None
    for v in range(D.n):
        value, _ = max_flow(D.n + 1, arcs, rho, v, limit=r.k)
        if value < r.k:
            _, side = max_flow(D.n + 1, back, v, rho, limit=r.k)
            X = sorted(side)
            assert degrees(D, X)[0] < r.k - r.of(X), "min-cut witness does not violate the inequality"
            if best is None or (len(X), X) < (len(best), best):
                best = X
    return (True, None) if best is None else (False, best)


def _connected_enough(n: int, arcs: Sequence[tuple[int, int]], dead: bytearray,
                      rho: int, need: int) -> bool:
    if need == 0:
        return True
    live = [a for i, a in enumerate(arcs) if not dead[i]]
    for v in range(n):
        if v != rho and max_flow(n, live, rho, v, limit=need)[0] < need:
            return False
    return True


def pack_out_branchings(D: Digraph, r: RootVector) -> BranchingSet:
    """k arc-disjoint out-branchings with vertex v rooting exactly r(v) of them."""
    ok, X = check_root_vector(D, r)
    if not ok:
        raise RootVectorViolation(X, r)
    rho, arcs = _augmented(D, r)
    n = D.n + 1
    used = bytearray(len(arcs))
    out: list[list[int]] = [[] for _ in range(n)]
    for i, (u, _) in enumerate(arcs):
        out[u].append(i)

    result: list[tuple[int, tuple[int, ...]]] = []
    for j in range(r.k):
        remaining = r.k - j - 1
        covered = {rho}
        chosen: list[int] = []
        while len(covered) < n:
            picked = None
            for x in sorted(covered):
                for a in out[x]:
                    if used[a] or arcs[a][1] in covered:
                        continue
                    if picked is not None and a > picked:
                        continue
                    used[a] = 1
                    ok = _connected_enough(n, arcs, used, rho, remaining)
                    used[a] = 0
                    if ok:
                        picked = a
                        break
            if picked is None:
                raise RuntimeError("no admissible arc; branching construction invariant broken")
            used[picked] = 1
            chosen.append(picked)
            covered.add(arcs[picked][1])
        root_arcs = [a for a in chosen if arcs[a][0] == rho]
        if len(root_arcs) != 1:
            raise RuntimeError("an arborescence used more than one super-root arc")
        root = arcs[root_arcs[0]][1]
        result.append((root, tuple(sorted(a for a in chosen if a < D.m))))

    result.sort(key=lambda rb: rb[0])
    B = BranchingSet(tuple(b for _, b in result), tuple(v for v, _ in result))
    return B


def pack_in_branchings(D: Digraph, r: RootVector) -> BranchingSet:
    """In-branchings via the reversed digraph; arc ids are shared with ``D``."""
    R = D.reverse()
    ok, X = check_root_vector(R, r)
    if not ok:
        raise RootVectorViolation(X, r, reversed_=True)
    return pack_out_branchings(R, r)


def branching_violations(D: Digraph, B: BranchingSet | Sequence[Sequence[int]],
                         roots: Sequence[int] | None = None, inward: bool = False,
                         r: RootVector | None = None) -> list[str]:
    """Broken invariants of a branching family; empty means valid.

    With ``inward`` the sets are checked as in-branchings.
    """
    if isinstance(B, BranchingSet):
        sets, roots = B.branchings, B.roots
    else:
        sets = B
    if roots is None or len(roots) != len(sets):
        return ["roots and branchings are not aligned"]
    problems = []
    owner: dict[int, int] = {}
    for i, (ids, root) in enumerate(zip(sets, roots)):
        try:
            check_arc_ids(D, ids)
        except DigraphError as exc:
            problems.append(f"branching {i}: {exc}")
            continue
        if not 0 <= root < D.n:
            problems.append(f"branching {i}: root {root} out of range")
            continue
        for a in ids:
            if a in owner:
                problems.append(f"arc {a} used by branchings {owner[a]} and {i}")
            owner.setdefault(a, i)
        problems.extend(f"branching {i}: {p}" for p in _single_violations(D, ids, root, inward))
    if r is not None and sorted(roots) != r.roots():
        problems.append(f"roots {sorted(roots)} do not match root vector {r.roots()}")
    return problems


def _single_violations(D: Digraph, ids: Sequence[int], root: int, inward: bool) -> list[str]:
    end = 0 if inward else 1
    word = "leaving" if inward else "entering"
    count = [0] * D.n
    for a in ids:
        count[D.arcs[a][end]] += 1
    problems = []
    if len(set(ids)) != len(ids):
        problems.append("repeated arc id")
    if count[root]:
        problems.append(f"root {root} has {count[root]} arcs {word} it")
    bad = [v for v in range(D.n) if v != root and count[v] != 1]
    if bad:
        problems.append(f"vertices {bad} do not have exactly one arc {word} them")
    arcset = set(ids)
    reach = _reach_within(D, root, arcset, backward=inward)
    if len(reach) != D.n:
        problems.append(f"not spanning from root {root}")
    return problems


def _reach_within(D: Digraph, start: int, arcset: set[int], backward: bool) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for a in (D.in_arcs(x) if backward else D.out_arcs(x)):
            if a in arcset:
                y = D.arcs[a][0 if backward else 1]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return seen


def verify_branching_set(D: Digraph, B: BranchingSet, r: RootVector | None = None,
                         inward: bool = False) -> bool:
    return not branching_violations(D, B, inward=inward, r=r)


def is_out_branching(D: Digraph, ids: Sequence[int], root: int) -> bool:
    return not _single_violations(D, ids, root, inward=False)


def is_in_branching(D: Digraph, ids: Sequence[int], root: int) -> bool:
    return not _single_violations(D, ids, root, inward=True)

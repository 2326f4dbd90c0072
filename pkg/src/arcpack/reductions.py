"""Gadget constructions behind the hardness results.

* the Cycle Breaker gadget and its property checker,
* Hamiltonian cycles -> Hamiltonian paths (one gadget),
* Hamiltonian cycles -> arc-disjoint in-/out-branching pair (two gadgets),
* 2-regular -> k-regular expansion preserving in/out-branching pairs,
* 3-SAT -> (s,t)-path with connected / strong / rooted remainder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .cnf import Cnf
from .digraph import (
    Digraph, DigraphError, arc_connectivity_at_least, is_k_regular,
    is_strongly_connected, split_vertex, weak_components,
)
from .generators import bidirected_complete

MAX_GADGET_VERTICES = 12


@dataclass(frozen=True)
class Gadget:
    digraph: Digraph
    ports: Mapping[str, int]
    fragment_P: tuple[int, ...]
    fragment_Q: tuple[int, ...]


# s=0, t=1. Two spanning (s,t)-paths exist (s,2,5,3,4,t and s,3,4,2,5,t);
# deleting either strands two internal vertices.
_CB_ARCS = ((0, 2), (0, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 1), (4, 2), (5, 1), (5, 3))
_CB_PORTS = {"s": 0, "t": 1, "b": 5, "c": 2, "d": 4, "e": 3}
# P = (d,t) + (s,e) pieces, Q = (b,t) + (s,c) pieces
_CB_P = (0, 3, 6, 9)
_CB_Q = (1, 4, 7, 8)


def cycle_breaker() -> Gadget:
    return Gadget(Digraph(6, _CB_ARCS, ["s", "t", "c", "e", "d", "b"]),
                  dict(_CB_PORTS), _CB_P, _CB_Q)


@dataclass
class CycleBreakerReport:
    degrees: bool                 # G1
    host_insertion: bool          # G2
    no_connected_remainder: bool  # G3
    fragments: bool               # G4
    spanning_path_exists: bool    # G5
    spanning_paths: int = 0
    stranded: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all((self.degrees, self.host_insertion, self.no_connected_remainder,
                    self.fragments, self.spanning_path_exists))

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        return {"G1": self.degrees, "G2": self.host_insertion,
                "G3": self.no_connected_remainder, "G4": self.fragments,
                "G5": self.spanning_path_exists, "spanning_paths": self.spanning_paths,
                "stranded": self.stranded, "notes": self.notes}


def _st_spanning_paths(G: Digraph, s: int, t: int):
    from .oracle import hamiltonian_paths
    return list(hamiltonian_paths(G, s, t))


def _ham_path_with_virtual(G: Digraph, frag: Sequence[int], s: int, t: int,
                           start: int, end: int) -> bool:
    """Does ``frag`` plus a virtual arc t->s form a Hamiltonian (start,end)-path?"""
    V = Digraph(G.n, list(G.arcs) + [(t, s)])
    ids = list(frag) + [G.m]
    if len(set(ids)) != len(ids) or len(ids) != G.n - 1:
        return False
    succ: dict[int, int] = {}
    indeg = [0] * G.n
    for a in ids:
        u, v = V.arcs[a]
        if u in succ:
            return False
        succ[u] = v
        indeg[v] += 1
    if indeg[start] or any(indeg[v] != 1 for v in range(G.n) if v != start):
        return False
    walk, x = [start], start
    while x in succ:
        x = succ[x]
        walk.append(x)
    return len(walk) == G.n and x == end


def insert_gadget(host: Digraph, a: int, G: Digraph, s: int, t: int) -> tuple[Digraph, dict[int, int]]:
    """Split ``a``, glue ``s`` onto a^- and ``t`` onto a^+.

    Host arc ids are kept; gadget arcs follow. Returns the digraph and the
    gadget-vertex -> new-vertex map.
    """
    Dp, am, ap = split_vertex(host, a)
    mp = {s: am, t: ap}
    nxt = Dp.n
    for v in range(G.n):
        if v not in mp:
            mp[v] = nxt
            nxt += 1
    arcs = list(Dp.arcs) + [(mp[u], mp[v]) for u, v in G.arcs]
    return Digraph(nxt, arcs), mp


def verify_cycle_breaker(G: Gadget) -> CycleBreakerReport:
    """Check the gadget exhaustively.

    G1  internal vertices have in- and out-degree 2; s is a 2-source, t a 2-sink.
    G2  inserting it into the bidirected triangle gives a 2-regular 2-arc-strong digraph.
    G3  no spanning (s,t)-path leaves the gadget connected once s and t are identified.
    G4  the fragments are disjoint, cover every vertex and extend host paths as required.
    G5  some spanning (s,t)-path exists.
    """
    D = G.digraph
    if D.n > MAX_GADGET_VERTICES:
        raise DigraphError(f"gadget has {D.n} vertices; exhaustive checks stop at {MAX_GADGET_VERTICES}")
    s, t = G.ports["s"], G.ports["t"]
    notes = []

    g1 = (D.out_degree(s) == 2 and D.in_degree(s) == 0
          and D.in_degree(t) == 2 and D.out_degree(t) == 0
          and all(D.in_degree(v) == 2 and D.out_degree(v) == 2
                  for v in range(D.n) if v not in (s, t)))
    if not g1:
        notes.append("G1: port or internal degrees wrong")

    g2 = False
    if g1:
        host = bidirected_complete(3)
        Dpp, _ = insert_gadget(host, 0, D, s, t)
        g2 = is_k_regular(Dpp, 2) and arc_connectivity_at_least(Dpp, 2)[0]
    if not g2:
        notes.append("G2: insertion into the bidirected triangle is not 2-regular and 2-arc-strong")

    paths = _st_spanning_paths(D, s, t)
    stranded = []
    g3 = True
    for R in paths:
        used = set(R)
        # the host always joins s and t, so treat them as one vertex
        rest = [(s if u == t else u, s if v == t else v)
                for i, (u, v) in enumerate(D.arcs) if i not in used]
        comps = weak_components(D.n, rest + [(t, s)])
        cut = [c for c in comps if s not in c]
        if not cut:
            g3 = False
            notes.append(f"G3: spanning path {list(R)} leaves the gadget connected")
        stranded.append(sum(len(c) for c in cut))
    g5 = bool(paths)
    if not g5:
        notes.append("G5: no spanning (s,t)-path")

    P, Q = G.fragment_P, G.fragment_Q
    g4 = (bool(P) and bool(Q) and not set(P) & set(Q)
          and all(0 <= a < D.m for a in (*P, *Q))
          and _ham_path_with_virtual(D, P, s, t, G.ports["d"], G.ports["e"])
          and _ham_path_with_virtual(D, Q, s, t, G.ports["b"], G.ports["c"]))
    if not g4:
        notes.append("G4: fragments do not extend a host path to Hamiltonian (d,e)/(b,c)-paths")
    return CycleBreakerReport(g1, g2, g3, g4, g5, len(paths), stranded, notes)


# Hamiltonian-cycle reductions ------------------------------------------------

@dataclass(frozen=True)
class HamReduction:
    """Output of a gadget insertion, with enough data to lift host solutions."""

    digraph: Digraph
    host: Digraph
    a: int
    a_minus: int
    a_plus: int
    ports: Mapping[str, int]
    fragments: Mapping[str, tuple[int, ...]]
    roots: Mapping[str, int] = field(default_factory=dict)
    provenance: str = ""

    def to_json(self) -> dict:
        return {"provenance": self.provenance, "a": self.a,
                "a_minus": self.a_minus, "a_plus": self.a_plus,
                "ports": dict(self.ports),
                "fragments": {k: list(v) for k, v in self.fragments.items()},
                "roots": dict(self.roots)}


def _require_2reg_2strong(D: Digraph, a: int) -> None:
    if not is_k_regular(D, 2):
        raise DigraphError("host must be 2-regular")
    if D.n < 2 or not arc_connectivity_at_least(D, 2)[0]:
        raise DigraphError("host must be 2-arc-strong")
    if not 0 <= a < D.n:
        raise DigraphError(f"vertex {a} out of range")


def ham_cycle_to_ham_path(D: Digraph, a: int) -> HamReduction:
    """Split ``a`` and plug in one Cycle Breaker (a^- = s, t = a^+).

    Host arc ids are unchanged; gadget arc i becomes id ``D.m + i``.
    """
    _require_2reg_2strong(D, a)
    G = cycle_breaker()
    s, t = G.ports["s"], G.ports["t"]
    out, mp = insert_gadget(D, a, G.digraph, s, t)
    assert is_k_regular(out, 2) and arc_connectivity_at_least(out, 2)[0]
    shift = D.m
    return HamReduction(
        out, D, a, mp[s], mp[t],
        {k: mp[v] for k, v in G.ports.items()},
        {"P": tuple(shift + i for i in G.fragment_P), "Q": tuple(shift + i for i in G.fragment_Q)},
        provenance="ham-path")


def lift_ham_cycles(R: HamReduction, C1: Sequence[int], C2: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Two host Hamiltonian cycles -> two arc-disjoint Hamiltonian paths of R."""
    return (tuple(sorted((*C1, *R.fragments["P"]))), tuple(sorted((*C2, *R.fragments["Q"]))))


# Doubled gadget: G on {s=0, t=1, 2..5}, G' on {s'=1, 6..9, t'=10}; arcs of G
# are ids 0..9 and of G' ids 10..19. Fragments were found by exhaustive search
# with a virtual host arc t'->s and are rechecked by verify_double_gadget.
_DOUBLE_FRAGMENTS = {
    "same": {"out_root": 1, "in_root": 1,
             "Q": (0, 3, 4, 9, 10, 11, 12, 15, 16),
             "P": (1, 2, 5, 6, 8, 13, 14, 17, 18)},
    "distinct": {"out_root": 1, "in_root": 6,
                 "Q": (0, 3, 4, 9, 10, 12, 13, 16, 19),
                 "P": (1, 2, 5, 6, 8, 11, 14, 17, 18)},
}


def double_gadget() -> tuple[Digraph, int, int]:
    """Two Cycle Breakers chained t = s'; returns ``(digraph, s, t')``."""
    G = cycle_breaker().digraph
    h = G.n - 2
    first = {0: 0, 1: 1, **{i: i for i in range(2, G.n)}}
    second = {0: 1, 1: 2 + 2 * h, **{i: i + h for i in range(2, G.n)}}
    arcs = [(first[u], first[v]) for u, v in G.arcs] + [(second[u], second[v]) for u, v in G.arcs]
    return Digraph(3 + 2 * h, arcs), 0, 2 + 2 * h


def verify_double_gadget(variant: str) -> bool:
    """Fragments plus a virtual host arc form an out-/in-branching pair."""
    from .branchings import is_in_branching, is_out_branching

    GG, s, t2 = double_gadget()
    f = _DOUBLE_FRAGMENTS[variant]
    V = Digraph(GG.n, list(GG.arcs) + [(t2, s), (t2, s)])
    out = list(f["Q"]) + [GG.m]
    inn = list(f["P"]) + [GG.m + 1]
    return (not set(out) & set(inn)
            and is_out_branching(V, out, f["out_root"])
            and is_in_branching(V, inn, f["in_root"])
            and (f["out_root"] == f["in_root"]) == (variant == "same"))


def ham_cycle_to_inout(D: Digraph, a: int, distinct_roots: bool = False) -> HamReduction:
    """Split ``a`` and plug in two chained Cycle Breakers (a^- = s, t = s', t' = a^+).

    ``distinct_roots`` selects which stored fragment pair is reported for
    lifting host solutions; the digraph is the same either way.
    """
    _require_2reg_2strong(D, a)
    GG, s, t2 = double_gadget()
    out, mp = insert_gadget(D, a, GG, s, t2)
    assert is_k_regular(out, 2) and arc_connectivity_at_least(out, 2)[0]
    variant = "distinct" if distinct_roots else "same"
    f = _DOUBLE_FRAGMENTS[variant]
    shift = D.m
    return HamReduction(
        out, D, a, mp[s], mp[t2],
        {"s": mp[s], "t": mp[1], "s'": mp[1], "t'": mp[t2]},
        {"P": tuple(shift + i for i in f["P"]), "Q": tuple(shift + i for i in f["Q"])},
        roots={"u": mp[f["out_root"]], "v": mp[f["in_root"]]},
        provenance=f"ham-inout[{variant}]")


def lift_inout(R: HamReduction, C1: Sequence[int], C2: Sequence[int]):
    """Host Hamiltonian cycles -> ``(u, B_out, v, B_in)`` in R.

    After the split each host cycle is a Hamiltonian (a^+, a^-)-path of the
    host part; it plays the role of the virtual arc the fragments were
    built around.
    """
    B_out = tuple(sorted((*C1, *R.fragments["Q"])))
    B_in = tuple(sorted((*C2, *R.fragments["P"])))
    return R.roots["u"], B_out, R.roots["v"], B_in


def k_expand(D: Digraph, k: int) -> Digraph:
    """Replace each vertex a by a^-, a^+ and a copy of H = {b, c}.

    Vertex layout: a^- = 4a, a^+ = 4a+1, b = 4a+2, c = 4a+3. Original arc ids
    are preserved (u^+ -> v^-); per-vertex arcs follow in vertex order.
    """
    if k < 3:
        raise DigraphError("k must be at least 3")
    if not is_k_regular(D, 2) or D.n < 2 or not arc_connectivity_at_least(D, 2)[0]:
        raise DigraphError("input must be 2-regular and 2-arc-strong")
    arcs = [(4 * u + 1, 4 * v) for u, v in D.arcs]
    labels = []
    for a in range(D.n):
        am, ap, b, c = 4 * a, 4 * a + 1, 4 * a + 2, 4 * a + 3
        labels += [f"{a}-", f"{a}+", f"b{a}", f"c{a}"]
        arcs += [(am, ap)] * 2
        arcs += [(b, c), (b, c), (c, b), (c, b)]
        for _ in range(k - 2):
            arcs += [(am, b), (b, ap), (ap, c), (c, am)]
    out = Digraph(4 * D.n, arcs, labels)
    assert is_k_regular(out, k) and arc_connectivity_at_least(out, 2)[0]
    return out


# 3-SAT -------------------------------------------------------------------------

# F = complete digraph on alpha, beta, gamma minus the arc beta->alpha
_ALPHA, _BETA, _GAMMA = 0, 1, 2
_F_ARCS = ((_ALPHA, _BETA), (_BETA, _GAMMA), (_GAMMA, _ALPHA), (_ALPHA, _GAMMA), (_GAMMA, _BETA))


@dataclass(frozen=True)
class ReductionInstance:
    digraph: Digraph
    s: int
    t: int
    literal_map: Mapping[tuple[int, int], int]
    variable_routes: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    clause_gadgets: tuple[tuple[int, int, int], ...]
    provenance: str
    formula: Cnf

    def gadget_vertices(self) -> set[int]:
        return {v for g in self.clause_gadgets for v in g}

    def to_json(self) -> dict:
        return {"provenance": self.provenance, "s": self.s, "t": self.t,
                "literal_map": {f"{i},{h}": v for (i, h), v in sorted(self.literal_map.items())},
                "variable_routes": [[list(y), list(z)] for y, z in self.variable_routes],
                "clause_gadgets": [list(g) for g in self.clause_gadgets]}


def instance_size(F: Cnf, cycle_variant: bool = False) -> tuple[int, int]:
    pos, neg = F.occurrence_counts()
    n = (F.variable_count + 1) + sum(pos) + sum(neg) + 9 * F.m + (3 if cycle_variant else 6)
    return n, 2 * n


def sat_to_instance(F: Cnf, cycle_variant: bool = False) -> ReductionInstance:
    """Variable chain W[u_i, v_i, p_i, q_i], clause triangles F and terminals.

    Vertex 0 is s and the last vertex is t. With ``cycle_variant`` the
    terminal copy F_1 is replaced by the arc t->s.
    """
    nvar = F.variable_count
    if nvar == 0:
        raise DigraphError("formula has no variables")
    pos, neg = F.occurrence_counts()

    labels: list[str] = []

    def new(label: str) -> int:
        labels.append(label)
        return len(labels) - 1

    arcs: list[tuple[int, int]] = []
    s = new("s")
    ys: list[list[int]] = []
    zs: list[list[int]] = []
    u = s
    chain_ends = []
    for i in range(nvar):
        ys.append([new(f"y{i + 1},{r + 1}") for r in range(pos[i])])
        zs.append([new(f"z{i + 1},{g + 1}") for g in range(neg[i])])
        chain_ends.append(u)
        if i < nvar - 1:
            u = new(f"u{i + 2}")
    clause_gadgets = []
    clause_vertices = []
    for ci in range(F.m):
        trip = []
        for h in range(3):
            trip.append(tuple(new(f"{g}{ci + 1},{h + 1}") for g in ("alpha", "beta", "gamma")))
        clause_vertices.append(trip)
        clause_gadgets.extend(trip)
    terminals = []
    for j in ((2,) if cycle_variant else (1, 2)):
        terminals.append(tuple(new(f"{g}{j}") for g in ("alpha", "beta", "gamma")))
    t = new("t")

    routes = []
    for i in range(nvar):
        start = chain_ends[i]
        end = chain_ends[i + 1] if i < nvar - 1 else t
        side_routes = []
        for side in (ys[i], zs[i]):
            seq = [start, *side, end]
            first = len(arcs)
            arcs.extend(zip(seq, seq[1:]))
            side_routes.append(tuple(range(first, len(arcs))))
        routes.append(tuple(side_routes))

    literal_map: dict[tuple[int, int], int] = {}
    seen_pos = [0] * nvar
    seen_neg = [0] * nvar
    for ci, clause in enumerate(F.clauses):
        for h, lit in enumerate(clause):
            if lit.negated:
                literal_map[(ci, h)] = zs[lit.var][seen_neg[lit.var]]
                seen_neg[lit.var] += 1
            else:
                literal_map[(ci, h)] = ys[lit.var][seen_pos[lit.var]]
                seen_pos[lit.var] += 1

    for ci in range(F.m):
        for alpha, beta, gamma in clause_vertices[ci]:
            arcs.extend(((alpha, beta), (beta, gamma), (gamma, alpha), (alpha, gamma), (gamma, beta)))
        for h in range(3):
            a_h = literal_map[(ci, h)]
            a_next = literal_map[(ci, (h + 1) % 3)]
            alpha, beta, _ = clause_vertices[ci][h]
            arcs.append((a_h, alpha))
            arcs.append((beta, a_next))
    for alpha, beta, gamma in terminals:
        arcs.extend(((alpha, beta), (beta, gamma), (gamma, alpha), (alpha, gamma), (gamma, beta)))
    for alpha, beta, _ in terminals:
        arcs.append((t, alpha))
    for alpha, beta, _ in terminals:
        arcs.append((beta, s))
    if cycle_variant:
        arcs.append((t, s))

    D = Digraph(len(labels), arcs, labels)
    if not is_k_regular(D, 2):
        raise AssertionError("SAT reduction produced a non-2-regular digraph")
    expected = instance_size(F, cycle_variant)
    assert (D.n, D.m) == expected, (D.n, D.m, expected)
    return ReductionInstance(D, s, t, literal_map, tuple(routes),
                             tuple(clause_gadgets) + tuple(terminals),
                             "sat-cycle" if cycle_variant else "sat", F)


def assignment_to_path(R: ReductionInstance, assignment: Sequence[bool] | Mapping[int, bool]) -> tuple[int, ...]:
    """Chain (s,t)-path through the literals the assignment makes false.

    A false variable routes through its positive occurrences (y side), a true
    one through its negated occurrences (z side).
    """
    arcs: list[int] = []
    for i, (y, z) in enumerate(R.variable_routes):
        arcs.extend(z if assignment[i] else y)
    return tuple(sorted(arcs))


def path_to_assignment(R: ReductionInstance, P: Sequence[int]) -> list[bool]:
    used = set(P)
    values = []
    for i, (y, z) in enumerate(R.variable_routes):
        if set(y) <= used and not used & set(z):
            values.append(False)
        elif set(z) <= used and not used & set(y):
            values.append(True)
        else:
            raise DigraphError(f"arc set does not follow exactly one side of variable {i + 1}")
        used -= set(y) | set(z)
    if used:
        raise DigraphError(f"arcs {sorted(used)} lie outside the variable chain")
    return values


def path_vertices(D: Digraph, P: Sequence[int]) -> set[int]:
    return {v for a in P for v in D.arcs[a]}

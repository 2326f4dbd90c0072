"""Free-root out-branchings and mixed packings in k-regular digraphs.

In a k-regular digraph, k edge-disjoint spanning trees leave exactly k arcs
unused. Taking the heads of those arcs as roots (with multiplicity) always
yields a feasible root vector for the union of the trees, so the tree
packing converts into k arc-disjoint out-branchings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .branchings import BranchingSet, RootVector, check_root_vector, pack_out_branchings, verify_branching_set
from .digraph import Digraph, DigraphError, is_k_regular, regular_degree
from .trees import PartitionCertificate, TreePacking, pack_spanning_trees, verify_tree_packing


class PipelineDefect(RuntimeError):
    """A step that cannot fail on valid input did fail."""


@dataclass(frozen=True)
class EquivalenceResult:
    feasible: bool
    k: int
    branchings: BranchingSet | None = None
    certificate: PartitionCertificate | None = None
    missing_arcs: tuple[int, ...] = ()
    root_vector: RootVector | None = field(default=None)

    def to_json(self) -> dict:
        out: dict = {"kind": "equivalence", "feasible": self.feasible, "k": self.k}
        if self.feasible:
            out.update(self.branchings.to_json())
            out["kind"] = "equivalence"
        else:
            out["certificate"] = self.certificate.to_json()
        out["pipeline-trace"] = {
            "missing_arcs": list(self.missing_arcs),
            "root_vector": ({str(v): c for v, c in self.root_vector.multiplicities.items()}
                            if self.root_vector else None),
        }
        return out


@dataclass(frozen=True)
class MixedSolution:
    out_branchings: BranchingSet
    trees: tuple[tuple[int, ...], ...]
    l: int
    k: int

    def to_json(self) -> dict:
        return {"kind": "mixed", "l": self.l, "k": self.k,
                "roots": list(self.out_branchings.roots),
                "branchings": [list(b) for b in self.out_branchings.branchings],
                "trees": [list(t) for t in self.trees]}


def _require_regular(D: Digraph) -> int:
    k = regular_degree(D)
    if k is None or k < 1:
        if D.n == 0:
            raise DigraphError("empty digraph")
        k0 = D.out_degree(0)
        for v in range(D.n):
            if D.out_degree(v) != k0 or D.in_degree(v) != k0:
                raise DigraphError(
                    f"digraph is not regular: vertex {v} has in-degree {D.in_degree(v)} "
                    f"and out-degree {D.out_degree(v)}, expected {k0} and {k0}")
        raise DigraphError("digraph is 0-regular")
    return k


def missing_arcs(D: Digraph, P: TreePacking) -> tuple[int, ...]:
    used = {a for t in P.trees for a in t}
    return tuple(a for a in range(D.m) if a not in used)


def derive_root_vector(D: Digraph, P: TreePacking) -> RootVector:
    """Root multiplicity = number of unused arcs entering each vertex."""
    k = len(P.trees)
    if not is_k_regular(D, k):
        raise DigraphError(f"digraph is not {k}-regular")
    if not verify_tree_packing(D, P):
        raise DigraphError("invalid tree packing")
    mult: dict[int, int] = {}
    for a in missing_arcs(D, P):
        v = D.head(a)
        mult[v] = mult.get(v, 0) + 1
    return RootVector(mult, k)


def decide_equivalence(D: Digraph) -> EquivalenceResult:
    """k arc-disjoint out-branchings (free roots) in a k-regular digraph, or a
    partition showing not even k edge-disjoint spanning trees exist."""
    k = _require_regular(D)
    P = pack_spanning_trees(D, k)
    if isinstance(P, PartitionCertificate):
        return EquivalenceResult(False, k, certificate=P)
    r = derive_root_vector(D, P)
    gone = missing_arcs(D, P)
    # branchings are packed inside the union of the trees; ids map back via sub_arcs
    sub_arcs = [a for a in range(D.m) if a not in set(gone)]
    sub = Digraph(D.n, [D.arcs[a] for a in sub_arcs])
    ok, X = check_root_vector(sub, r)
    if not ok:
        raise PipelineDefect(f"derived root vector violated by X={X} on the tree union")
    B = pack_out_branchings(sub, r)
    mapped = BranchingSet(tuple(tuple(sorted(sub_arcs[a] for a in b)) for b in B.branchings), B.roots)
    if not verify_branching_set(D, mapped, r):
        raise PipelineDefect("constructed branchings failed verification")
    return EquivalenceResult(True, k, branchings=mapped, missing_arcs=gone, root_vector=r)


def solve_mixed(D: Digraph, l: int) -> MixedSolution | PartitionCertificate:
    """l out-branchings plus k-l spanning trees, all pairwise arc-disjoint."""
    k = _require_regular(D)
    if not 0 < l <= k:
        raise DigraphError(f"l must satisfy 0 < l <= k={k}, got {l}")
    res = decide_equivalence(D)
    if not res.feasible:
        return res.certificate
    B = res.branchings
    head = BranchingSet(B.branchings[:l], B.roots[:l])
    return MixedSolution(head, tuple(B.branchings[l:]), l, k)


def mixed_violations(D: Digraph, S: MixedSolution) -> list[str]:
    from .branchings import branching_violations
    from .trees import tree_packing_violations

    problems = []
    if len(S.out_branchings.branchings) != S.l:
        problems.append(f"expected {S.l} out-branchings")
    if len(S.out_branchings.branchings) + len(S.trees) != S.k:
        problems.append(f"expected {S.k} structures in total")
    problems += branching_violations(D, S.out_branchings)
    problems += tree_packing_violations(D, list(S.out_branchings.branchings) + list(S.trees))
    return problems

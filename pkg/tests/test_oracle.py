import pytest

from arcpack.branchings import (
    BranchingSet, RootVector, is_in_branching, is_out_branching, verify_branching_set,
)
from arcpack.cnf import Cnf
from arcpack.digraph import Digraph, degrees, is_eulerian_balanced, is_weakly_connected
from arcpack.generators import bidirected_complete, cycle, directed_path, doubled_cycle
from arcpack.oracle import (
    BudgetExceeded, OracleBudget, hamiltonian_cycles, hamiltonian_paths, oracle_branching_tree,
    oracle_ham_pairs, oracle_inout_pair, oracle_out_branchings, oracle_remainder_cycle,
    oracle_remainder_path, oracle_root_vector, oracle_sat, oracle_tree_packing,
    search_eulerian_counterexample, search_fixed_root_counterexample,
)
from arcpack.reductions import sat_to_instance
from arcpack.trees import verify_tree_packing


def is_ham_cycle(D, arcs):
    if len(arcs) != D.n:
        return False
    seen = [D.arcs[a][0] for a in arcs]
    chained = all(D.arcs[a][1] == D.arcs[b][0] for a, b in zip(arcs, arcs[1:] + arcs[:1]))
    return chained and sorted(seen) == list(range(D.n))


class TestHamPairs:
    def test_bidirected_triangle(self):
        ok, (C1, C2) = oracle_ham_pairs(bidirected_complete(3))
        assert ok
        assert (C1, C2) == ((0, 3, 4), (1, 5, 2))

    def test_single_cycle(self):
        assert oracle_ham_pairs(cycle(3)) == (False, None)

    def test_doubled_cycle_uses_parallel_copies(self):
        D = doubled_cycle(3)
        ok, (C1, C2) = oracle_ham_pairs(D)
        assert ok and not set(C1) & set(C2)
        assert is_ham_cycle(D, C1) and is_ham_cycle(D, C2)

    def test_cycle_count(self):
        assert len(list(hamiltonian_cycles(bidirected_complete(4)))) == 6
        assert len(list(hamiltonian_cycles(doubled_cycle(3)))) == 8

    def test_paths_with_endpoints(self):
        D = bidirected_complete(3)
        ok, (P, Q) = oracle_ham_pairs(D, "paths", [(0, 2), (2, 0)])
        assert ok
        assert D.arcs[P[0]][0] == 0 and D.arcs[P[-1]][1] == 2
        assert D.arcs[Q[0]][0] == 2 and D.arcs[Q[-1]][1] == 0
        assert not oracle_ham_pairs(directed_path(3), "paths")[0]

    def test_path_enumeration_order(self):
        assert list(hamiltonian_paths(directed_path(3))) == [(0, 1)]
        assert list(hamiltonian_paths(cycle(3), start=1)) == [(1, 2)]

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            oracle_ham_pairs(cycle(3), "walks")
        with pytest.raises(ValueError):
            oracle_ham_pairs(cycle(3), "cycles", [(0, 1), (0, 1)])


class TestInout:
    def test_bidirected_triangle(self):
        D = bidirected_complete(3)
        ok, (u, Bo, v, Bi) = oracle_inout_pair(D)
        assert ok and not set(Bo) & set(Bi)
        assert is_out_branching(D, Bo, u) and is_in_branching(D, Bi, v)

    def test_single_cycle(self):
        assert oracle_inout_pair(cycle(3)) == (False, None)

    def test_doubled_cycle_fixed_roots(self):
        D = doubled_cycle(3)
        ok, (u, Bo, v, Bi) = oracle_inout_pair(D, 0, 0)
        assert ok and u == v == 0
        assert is_out_branching(D, Bo, 0) and is_in_branching(D, Bi, 0)

    def test_fixed_root_respected(self):
        for v in range(3):
            ok, w = oracle_inout_pair(bidirected_complete(3), u=1, v=v)
            assert ok and w[0] == 1 and w[2] == v


class TestOutBranchings:
    def test_free_roots(self):
        D = bidirected_complete(3)
        ok, fam = oracle_out_branchings(D, 2)
        assert ok
        B = BranchingSet(tuple(b for _, b in fam), tuple(r for r, _ in fam))
        assert verify_branching_set(D, B)

    def test_cycle(self):
        assert not oracle_out_branchings(cycle(3), 2)[0]
        assert oracle_out_branchings(cycle(3), 1)[0]

    def test_fixed_roots(self):
        ok, fam = oracle_out_branchings(doubled_cycle(3), 2, roots=[1, 1])
        assert ok and [r for r, _ in fam] == [1, 1]
        with pytest.raises(ValueError):
            oracle_out_branchings(cycle(3), 2, roots=[0])


class TestBranchingTree:
    def test_doubled_cycle(self):
        D = doubled_cycle(3)
        ok, (w, B, T) = oracle_branching_tree(D)
        assert ok and is_out_branching(D, B, w)
        assert verify_tree_packing(D, [T]) and not set(B) & set(T)

    def test_cycle(self):
        assert oracle_branching_tree(cycle(3)) == (False, None)


@pytest.fixture(scope="module")
def instance():
    return sat_to_instance(Cnf.from_ints([[1, 2, 3]]))


class TestRemainder:
    def test_one_clause_connected(self, instance):
        ok, P = oracle_remainder_path(instance.digraph, instance.s, instance.t, "connected")
        assert ok
        D = instance.digraph
        assert D.arcs[P[0]][0] == instance.s and D.arcs[P[-1]][1] == instance.t
        assert is_weakly_connected(D, set(P))

    def test_requirements_agree(self, instance):
        D, s, t = instance.digraph, instance.s, instance.t
        answers = {req: oracle_remainder_path(D, s, t, req)[0]
                   for req in ("connected", "strong", "outbranching_from_s")}
        assert set(answers.values()) == {True}

    def test_unsat_formula(self):
        full = [[a, 2 * b, 3 * c] for a in (1, -1) for b in (1, -1) for c in (1, -1)]
        R = sat_to_instance(Cnf.from_ints(full))
        for req in ("connected", "strong", "outbranching_from_s"):
            assert oracle_remainder_path(R.digraph, R.s, R.t, req) == (False, None)

    def test_cycle_variant(self):
        R = sat_to_instance(Cnf.from_ints([[1, 2, 3]]), cycle_variant=True)
        ok, C = oracle_remainder_cycle(R.digraph, R.s)
        assert ok
        D = R.digraph
        assert D.arcs[C[0]][0] == R.s and D.arcs[C[-1]][1] == R.s
        assert is_weakly_connected(D, set(C))

    def test_doubled_cycle_paths(self):
        D = doubled_cycle(3)
        ok, P = oracle_remainder_path(D, 0, 2, "strong")
        assert ok and len(P) == 2
        assert not oracle_remainder_path(cycle(3), 0, 2)[0]

    def test_bad_requirement(self):
        with pytest.raises(ValueError):
            oracle_remainder_path(doubled_cycle(3), 0, 1, "acyclic")
        with pytest.raises(ValueError):
            oracle_remainder_path(doubled_cycle(3), 0, 0)


class TestTrees:
    @pytest.mark.parametrize("D,k,expected", [
        (bidirected_complete(3), 2, True),
        (cycle(3), 2, False),
        (bidirected_complete(4), 2, True),
    ])
    def test_examples(self, D, k, expected):
        assert oracle_tree_packing(D, k) is expected
        assert oracle_tree_packing(D, k, method="trees") is expected

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            oracle_tree_packing(cycle(9), 1)

    def test_bad_method(self):
        with pytest.raises(ValueError):
            oracle_tree_packing(cycle(3), 1, method="guess")


class TestRootVector:
    def test_cycle(self):
        assert oracle_root_vector(cycle(3), RootVector({0: 1})) == (True, None)

    def test_path(self):
        D, r = directed_path(3), RootVector({1: 1})
        ok, X = oracle_root_vector(D, r)
        assert not ok and X == [0]
        assert degrees(D, X)[0] < r.k - r.of(X)

    def test_doubled_cycle_split(self):
        assert oracle_root_vector(doubled_cycle(3), RootVector({0: 1, 1: 1})) == (True, None)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            oracle_root_vector(cycle(7), RootVector({0: 1}))


class TestSat:
    def test_examples(self):
        assert oracle_sat(Cnf.from_ints([[1, 2, 3]])) == (True, [True, True, True])
        full = [[a, 2 * b, 3 * c] for a in (1, -1) for b in (1, -1) for c in (1, -1)]
        assert oracle_sat(Cnf.from_ints(full)) == (False, None)
        assert oracle_sat(Cnf(0, ()))[0]

    def test_witness_satisfies(self):
        F = Cnf.from_ints([[-1, -2, -3], [1, -2, 3]])
        ok, a = oracle_sat(F)
        assert ok and F.satisfied_by(a)


class TestSearches:
    def test_eulerian_counterexample(self):
        found = search_eulerian_counterexample(max_n=6)
        assert found is not None
        D = found.digraph
        assert is_eulerian_balanced(D) and is_weakly_connected(D)
        w, B, T = found.branching_tree
        assert is_out_branching(D, B, w) and verify_tree_packing(D, [T])
        assert not set(B) & set(T)
        assert oracle_branching_tree(D)[0]
        assert not oracle_out_branchings(D, 2)[0]

    def test_fixed_root_counterexample(self):
        assert search_fixed_root_counterexample(max_n=5) is None
        D, s, fam = search_fixed_root_counterexample(max_n=6)
        assert D.n == 6 and oracle_out_branchings(D, 2)[0]
        assert all(is_out_branching(D, b, r) for r, b in fam)
        assert not oracle_branching_tree(D, root=s)[0]


class TestBudget:
    def test_refusal(self):
        small = OracleBudget(max_vertices=3, max_arcs=10)
        with pytest.raises(BudgetExceeded, match="exceeds budget"):
            oracle_ham_pairs(cycle(4), budget=small)
        with pytest.raises(BudgetExceeded):
            oracle_inout_pair(doubled_cycle(4), budget=small)
        with pytest.raises(BudgetExceeded):
            oracle_out_branchings(doubled_cycle(6), budget=OracleBudget(max_arcs=11))

    def test_time_limit(self):
        with pytest.raises(BudgetExceeded, match="time limit"):
            oracle_ham_pairs(Digraph(12, [(u, v) for u in range(12) for v in range(12) if u != v]),
                             budget=OracleBudget(max_vertices=12, max_arcs=200, time_limit=0.01))

    def test_non_positive(self):
        with pytest.raises(ValueError):
            OracleBudget(max_vertices=0)

    def test_sat(self):
        with pytest.raises(BudgetExceeded):
            oracle_sat(Cnf.from_ints([[1, 2, 3], [4, 5, 6]]), max_variables=5)


def test_deterministic_witnesses():
    D = bidirected_complete(4)
    assert oracle_inout_pair(D) == oracle_inout_pair(D)
    assert oracle_ham_pairs(D) == oracle_ham_pairs(D)
    assert oracle_out_branchings(D, 3) == oracle_out_branchings(D, 3)

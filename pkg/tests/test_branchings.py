import pytest

from arcpack.branchings import (
    BranchingSet, RootVector, RootVectorViolation, branching_violations, check_root_vector,
    pack_in_branchings, pack_out_branchings, verify_branching_set,
)
from arcpack.digraph import DigraphError, degrees
from arcpack.generators import bidirected_complete, cycle, directed_path, doubled_cycle
from arcpack.oracle import oracle_root_vector


class TestRootVector:
    def test_sum_must_match_k(self):
        with pytest.raises(DigraphError):
            RootVector({0: 1}, 2)

    def test_parse(self):
        r = RootVector.parse("0:1, 2:2")
        assert r.k == 3 and r.roots() == [0, 2, 2]
        assert r.of([2, 5]) == 2

    def test_parse_errors(self):
        with pytest.raises(DigraphError):
            RootVector.parse("a:b")
        with pytest.raises(DigraphError):
            RootVector.parse("0:1", 3)

    def test_negative(self):
        with pytest.raises(DigraphError):
            RootVector({0: -1, 1: 2})


class TestCheck:
    def test_cycle(self):
        assert check_root_vector(cycle(3), RootVector({0: 1})) == (True, None)

    def test_path_violation(self):
        D = directed_path(3)
        ok, X = check_root_vector(D, RootVector({1: 1}))
        assert not ok and X == [0]
        assert degrees(D, X)[0] == 0

    def test_doubled_cycle(self):
        D, r = doubled_cycle(3), RootVector({0: 2})
        assert check_root_vector(D, r)[0]
        assert oracle_root_vector(D, r)[0]

    def test_doubled_cycle_split_roots(self):
        D, r = doubled_cycle(3), RootVector({0: 1, 1: 1})
        assert oracle_root_vector(D, r) == (True, None)
        assert check_root_vector(D, r) == (True, None)

    def test_root_out_of_range(self):
        with pytest.raises(DigraphError):
            check_root_vector(cycle(3), RootVector({5: 1}))


class TestPackOut:
    def test_cycle(self):
        B = pack_out_branchings(cycle(3), RootVector({0: 1}))
        assert B.branchings == ((0, 1),) and B.roots == (0,)

    def test_doubled_cycle(self):
        D = doubled_cycle(3)
        B = pack_out_branchings(D, RootVector({0: 2}))
        # one copy each of 0->1 and 1->2 per branching
        assert sorted(B.branchings) == [(0, 2), (1, 3)]
        assert verify_branching_set(D, B, RootVector({0: 2}))

    def test_bidirected_triangle(self):
        D, r = bidirected_complete(3), RootVector({0: 1, 1: 1})
        B = pack_out_branchings(D, r)
        assert B.branchings == ((0, 1), (2, 3))
        assert B.roots == (0, 1)
        assert verify_branching_set(D, B, r)

    def test_infeasible_carries_x(self):
        with pytest.raises(RootVectorViolation) as exc:
            pack_out_branchings(directed_path(3), RootVector({1: 1}))
        assert exc.value.X == [0]
        assert exc.value.to_json()["kind"] == "rootvector-violation"


class TestPackIn:
    def test_cycle(self):
        D = cycle(3)
        B = pack_in_branchings(D, RootVector({2: 1}))
        assert B.branchings == ((0, 1),)
        assert verify_branching_set(D, B, inward=True)

    def test_bidirected_triangle(self):
        D, r = bidirected_complete(3), RootVector({0: 2})
        B = pack_in_branchings(D, r)
        assert len(B.branchings) == 2
        assert verify_branching_set(D, B, r, inward=True)

    def test_path_violation(self):
        with pytest.raises(RootVectorViolation) as exc:
            pack_in_branchings(directed_path(3), RootVector({0: 1}))
        assert exc.value.X == [2]
        assert "reversed" in str(exc.value)


class TestVerify:
    def test_root_with_incoming_arc(self):
        D = cycle(3)
        B = BranchingSet(((1, 2),), (0,))
        assert not verify_branching_set(D, B)

    def test_shared_arc(self):
        D = doubled_cycle(3)
        B = BranchingSet(((0, 2), (0, 3)), (0, 0))
        problems = branching_violations(D, B)
        assert any("arc 0 used by" in p for p in problems)

    def test_root_multiset(self):
        D = doubled_cycle(3)
        B = pack_out_branchings(D, RootVector({0: 2}))
        assert not verify_branching_set(D, B, RootVector({0: 1, 1: 1}))

    def test_misaligned(self):
        assert branching_violations(cycle(3), [(0, 1)], roots=[]) == ["roots and branchings are not aligned"]


def test_reversal_duality():
    D = directed_path(4)
    for v in range(4):
        r = RootVector({v: 1})
        ok_in = check_root_vector(D.reverse(), r)[0]
        try:
            pack_in_branchings(D, r)
            got = True
        except RootVectorViolation:
            got = False
        assert got is ok_in

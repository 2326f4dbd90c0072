import json

import pytest

from arcpack.cli import main
from arcpack.digraph import format_digraph, is_k_regular, read_digraph
from arcpack.generators import bidirected_complete, cycle, directed_path, doubled_cycle
from arcpack.reductions import ham_cycle_to_ham_path


@pytest.fixture
def files(tmp_path):
    def write(name, D):
        path = tmp_path / name
        path.write_text(format_digraph(D))
        return str(path)

    return {
        "k3bi": write("k3bi.dg", bidirected_complete(3)),
        "c3": write("c3.dg", cycle(3)),
        "path": write("path.dg", directed_path(3)),
        "dc3": write("dc3.dg", doubled_cycle(3)),
        "dir": tmp_path,
    }


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip().startswith("{") else out), err


def save(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


class TestPack:
    def test_equivalence(self, capsys, files):
        code, out, _ = run(capsys, "pack", "equivalence", files["k3bi"])
        assert code == 0 and out["schema"] == "1"
        assert len(out["branchings"]) == 2 and out["feasible"] is True

    def test_trees_infeasible(self, capsys, files):
        code, out, _ = run(capsys, "pack", "trees", "-k", 2, files["c3"])
        assert code == 1 and out["kind"] == "tutte"

    def test_branchings_violation(self, capsys, files):
        code, out, _ = run(capsys, "pack", "branchings", "-k", 1, "--roots", "1:1", files["path"])
        assert code == 1 and out["X"] == [0]

    def test_in_branchings(self, capsys, files):
        code, out, _ = run(capsys, "pack", "branchings", "--roots", "0:2", "--in", files["k3bi"])
        assert code == 0 and out["inward"] is True

    def test_mixed(self, capsys, files):
        code, out, _ = run(capsys, "pack", "mixed", "-l", 1, files["k3bi"])
        assert code == 0 and out["kind"] == "mixed"

    def test_not_regular(self, capsys, files):
        code, _, err = run(capsys, "pack", "equivalence", files["path"])
        assert code == 2 and "not regular" in err

    def test_parse_error_names_line(self, capsys, tmp_path):
        bad = tmp_path / "bad.dg"
        bad.write_text("3 2\n0 1\n1 x\n")
        code, _, err = run(capsys, "pack", "trees", "-k", 1, bad)
        assert code == 2 and "line 3" in err

    def test_missing_flag(self, capsys, files):
        assert main(["pack", "branchings", files["k3bi"]]) == 2
        capsys.readouterr()


class TestReduce:
    def test_sat(self, capsys, tmp_path):
        cnf = tmp_path / "one-clause.cnf"
        cnf.write_text("p cnf 3 1\n1 2 3 0\n")
        code, out, _ = run(capsys, "reduce", "sat", cnf)
        assert code == 0
        assert (out["n"], out["m"]) == (22, 44)
        assert out["regular_degree"] == 2 and out["two_arc_strong"] is False
        D = read_digraph(out["digraph"])
        assert (D.n, D.m) == (22, 44)
        side = json.loads((tmp_path / "one-clause.sat.json").read_text())
        assert side["schema"] == "1" and side["s"] == 0 and side["t"] == 21

    def test_k_expand(self, capsys, files):
        code, out, _ = run(capsys, "reduce", "k-expand", "-k", 3, files["k3bi"])
        assert code == 0 and (out["n"], out["m"]) == (12, 36)
        assert out["regular_degree"] == 3

    def test_ham_inout(self, capsys, files, tmp_path):
        base = tmp_path / "inout"
        code, out, _ = run(capsys, "reduce", "ham-inout", "--vertex", 0, files["k3bi"], "-o", base)
        assert code == 0 and out["regular_degree"] == 2
        assert is_k_regular(read_digraph(str(base) + ".dg"), 2)

    def test_round_trip(self, capsys, files, tmp_path):
        base = tmp_path / "hp"
        run(capsys, "reduce", "ham-path", files["dc3"], "-o", base)
        D = read_digraph(str(base) + ".dg")
        expected = ham_cycle_to_ham_path(doubled_cycle(3), 0).digraph
        assert D == expected and D.arcs == expected.arcs

    def test_precondition(self, capsys, files):
        code, _, err = run(capsys, "reduce", "ham-path", files["path"])
        assert code == 2 and err.startswith("error:")


class TestOracle:
    def test_ham_pair(self, capsys, files):
        code, out, _ = run(capsys, "oracle", "ham-pair", "--mode", "cycles", files["k3bi"])
        assert code == 0 and len(out["witness"]) == 2

    def test_p1_on_reduction(self, capsys, tmp_path):
        cnf = tmp_path / "f.cnf"
        cnf.write_text("p cnf 3 1\n1 2 3 0\n")
        run(capsys, "reduce", "sat", cnf, "-o", tmp_path / "reduced")
        code, out, _ = run(capsys, "oracle", "p1", "-s", 0, "-t", 21, tmp_path / "reduced.dg")
        assert code == 0 and out["answer"] is True

    def test_inout_no(self, capsys, files):
        code, out, _ = run(capsys, "oracle", "inout-pair", files["c3"])
        assert code == 1 and out["answer"] is False

    def test_root_vector(self, capsys, files):
        code, out, _ = run(capsys, "oracle", "root-vector", "--roots", "1:1", files["path"])
        assert code == 1 and out["witness"] == [0]

    def test_budget_refusal(self, capsys, files):
        code, _, err = run(capsys, "oracle", "ham-pair", "--max-vertices", 2, files["k3bi"])
        assert code == 3 and "budget" in err

    def test_sat(self, capsys, tmp_path):
        cnf = tmp_path / "f.cnf"
        cnf.write_text("p cnf 3 1\n-1 2 3 0\n")
        code, out, _ = run(capsys, "oracle", "sat", cnf)
        assert code == 0 and out["witness"] == [True, True, True]

    def test_counterexample(self, capsys):
        code, out, _ = run(capsys, "oracle", "counterexample", "--max-n", 4)
        assert code == 0 and out["witness"]["digraph"].startswith("4 6")


class TestVerify:
    def test_trees_valid(self, capsys, files):
        _, cert, _ = run(capsys, "pack", "trees", "-k", 2, files["k3bi"])
        path = save(files["dir"], "t.json", cert)
        code, out, _ = run(capsys, "verify", path, files["k3bi"])
        assert code == 0 and out["valid"] is True

    def test_corrupted(self, capsys, files):
        _, cert, _ = run(capsys, "pack", "trees", "-k", 2, files["k3bi"])
        cert["trees"][1][0] = cert["trees"][0][0]
        path = save(files["dir"], "t.json", cert)
        code, _, err = run(capsys, "verify", path, files["k3bi"])
        assert code == 2 and "used by trees" in err

    def test_tutte(self, capsys, files):
        _, cert, _ = run(capsys, "pack", "trees", "-k", 2, files["c3"])
        path = save(files["dir"], "c.json", cert)
        assert run(capsys, "verify", path, files["c3"])[0] == 0
        assert run(capsys, "verify", path, files["k3bi"])[0] == 2

    @pytest.mark.parametrize("argv,name", [
        (("pack", "equivalence", "k3bi"), "k3bi"),
        (("pack", "equivalence", "dc3"), "dc3"),
        (("pack", "branchings", "--roots", "0:1,1:1", "k3bi"), "k3bi"),
        (("pack", "branchings", "--roots", "1:1", "path"), "path"),
        (("pack", "branchings", "--roots", "0:2", "--in", "k3bi"), "k3bi"),
        (("pack", "mixed", "-l", 1, "k3bi"), "k3bi"),
    ])
    def test_pack_output_verifies(self, capsys, files, argv, name):
        argv = [files.get(a, a) if isinstance(a, str) else a for a in argv]
        _, cert, _ = run(capsys, *argv)
        path = save(files["dir"], "cert.json", cert)
        assert run(capsys, "verify", path, files[name])[0] == 0

    def test_unknown_kind(self, capsys, files):
        path = save(files["dir"], "u.json", {"schema": "1", "kind": "mystery"})
        code, _, err = run(capsys, "verify", path, files["c3"])
        assert code == 2 and "unknown certificate kind" in err

    def test_wrong_schema(self, capsys, files):
        path = save(files["dir"], "s.json", {"schema": "0", "kind": "trees"})
        assert run(capsys, "verify", path, files["c3"])[0] == 2


class TestMisc:
    def test_export_dot(self, capsys, files):
        _, cert, _ = run(capsys, "pack", "trees", "-k", 2, files["k3bi"])
        path = save(files["dir"], "t.json", cert)
        code, out, _ = run(capsys, "export-dot", files["k3bi"], "--highlight", path)
        assert code == 0 and out.startswith("digraph") and "color" in out

    def test_generate_seeded(self, capsys):
        _, a, _ = run(capsys, "generate", "random-regular", "-n", 5, "-k", 2, "--seed", 7)
        _, b, _ = run(capsys, "generate", "random-regular", "-n", 5, "-k", 2, "--seed", 7)
        assert a == b and a.startswith("5 10")

    def test_help(self, capsys):
        assert main(["--help"]) == 0
        capsys.readouterr()

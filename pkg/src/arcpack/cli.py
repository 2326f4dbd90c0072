"""Command-line interface.

Exit codes: 0 yes / success, 1 no (a certificate is printed), 2 usage or
input error, 3 oracle budget refusal. Payloads are JSON on stdout and carry
``"schema": "1"``; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import generators, oracle
from .branchings import (
    BranchingSet, RootVector, RootVectorViolation, branching_violations,
    check_root_vector, pack_in_branchings, pack_out_branchings,
)
from .cnf import parse_dimacs
from .digraph import (
    Digraph, DigraphError, Partition, arc_connectivity_at_least, degrees, format_digraph,
    read_digraph, regular_degree, to_dot, write_digraph,
)
from .mixed import MixedSolution, decide_equivalence, mixed_violations, solve_mixed
from .reductions import ham_cycle_to_ham_path, ham_cycle_to_inout, k_expand, sat_to_instance
from .trees import PartitionCertificate, pack_spanning_trees, tree_packing_violations, tutte_deficiency

SCHEMA = "1"
YES, NO, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def emit(payload: dict) -> None:
    print(json.dumps({"schema": SCHEMA, **payload}, indent=2))


# pack ------------------------------------------------------------------------

def cmd_pack(args) -> int:
    D = read_digraph(args.input)
    if args.problem == "trees":
        res = pack_spanning_trees(D, args.k)
        emit(res.to_json())
        return NO if isinstance(res, PartitionCertificate) else YES
    if args.problem == "branchings":
        r = RootVector.parse(args.roots, args.k)
        try:
            B = pack_in_branchings(D, r) if args.inward else pack_out_branchings(D, r)
        except RootVectorViolation as exc:
            emit({**exc.to_json(), "inward": args.inward})
            return NO
        emit({**B.to_json(), "inward": args.inward})
        return YES
    if args.problem == "mixed":
        res = solve_mixed(D, args.l)
        emit(res.to_json())
        return NO if isinstance(res, PartitionCertificate) else YES
    res = decide_equivalence(D)
    emit(res.to_json())
    return YES if res.feasible else NO


# reduce ----------------------------------------------------------------------

def _outputs(args, tag: str) -> tuple[Path, Path]:
    src = Path(args.input)
    base = Path(args.output) if args.output else src.with_name(f"{src.stem}.{tag}")
    return base.with_name(base.name + ".dg"), base.with_name(base.name + ".json")


def cmd_reduce(args) -> int:
    kind = args.kind
    if kind in ("sat", "sat-cycle"):
        F = parse_dimacs(Path(args.input).read_text(encoding="utf-8"))
        R = sat_to_instance(F, cycle_variant=(kind == "sat-cycle"))
        D, side = R.digraph, R.to_json()
    else:
        host = read_digraph(args.input)
        if kind == "ham-path":
            R = ham_cycle_to_ham_path(host, args.vertex)
            D, side = R.digraph, R.to_json()
        elif kind == "ham-inout":
            R = ham_cycle_to_inout(host, args.vertex, args.distinct_roots)
            D, side = R.digraph, R.to_json()
        else:
            D = k_expand(host, args.k)
            side = {"provenance": "k-expand", "k": args.k,
                    "layout": {str(a): {"minus": 4 * a, "plus": 4 * a + 1,
                                        "b": 4 * a + 2, "c": 4 * a + 3} for a in range(host.n)}}
    dg, js = _outputs(args, kind)
    write_digraph(D, dg, comment=f"{kind} reduction of {Path(args.input).name}")
    js.write_text(json.dumps({"schema": SCHEMA, **side}, indent=2) + "\n", encoding="utf-8")
    emit({"kind": "reduction", "provenance": side["provenance"], "n": D.n, "m": D.m,
          "regular_degree": regular_degree(D),
          "two_arc_strong": D.n > 1 and arc_connectivity_at_least(D, 2)[0],
          "digraph": str(dg), "sidecar": str(js)})
    return YES


# oracle ----------------------------------------------------------------------

def _budget(args, default: oracle.OracleBudget) -> oracle.OracleBudget:
    return oracle.OracleBudget(
        args.max_vertices or default.max_vertices,
        args.max_arcs or default.max_arcs,
        args.time_limit or default.time_limit)


def _listify(x):
    if isinstance(x, (tuple, list)):
        return [_listify(y) for y in x]
    return x


def cmd_oracle(args) -> int:
    p = args.problem
    if p == "sat":
        F = parse_dimacs(Path(args.input).read_text(encoding="utf-8"))
        ok, w = oracle.oracle_sat(F, max_variables=args.max_variables)
        emit({"kind": "oracle", "problem": p, "answer": ok, "witness": w})
        return YES if ok else NO
    if p == "counterexample":
        budget = _budget(args, oracle.DEFAULT)
        if args.variant == "eulerian":
            found = oracle.search_eulerian_counterexample(args.max_n, budget=budget)
            payload = None
            if found:
                root, B, T = found.branching_tree
                payload = {"digraph": format_digraph(found.digraph), "root": root,
                           "branching": list(B), "remainder_tree": list(T)}
        else:
            found = oracle.search_fixed_root_counterexample(args.max_n, budget=budget)
            payload = None
            if found:
                D, s, w = found
                payload = {"digraph": format_digraph(D), "fixed_root": s,
                           "free_root_branchings": _listify(w)}
        emit({"kind": "oracle", "problem": f"counterexample[{args.variant}]",
              "answer": found is not None, "witness": payload})
        return YES if found else NO

    D = read_digraph(args.input)
    if p == "ham-pair":
        ok, w = oracle.oracle_ham_pairs(D, args.mode, budget=_budget(args, oracle.DEFAULT))
    elif p == "inout-pair":
        ok, w = oracle.oracle_inout_pair(D, args.u, args.v, budget=_budget(args, oracle.DEFAULT))
    elif p in ("p1", "p2", "p3"):
        req = {"p1": "connected", "p2": "strong", "p3": "outbranching_from_s"}[p]
        ok, w = oracle.oracle_remainder_path(D, args.s, args.t, req,
                                             budget=_budget(args, oracle.PATH_BUDGET))
    elif p == "trees":
        ok = oracle.oracle_tree_packing(
            D, args.k, budget=_budget(args, oracle.OracleBudget(8, 64)))
        w = None
    elif p == "root-vector":
        r = RootVector.parse(args.roots, args.k)
        ok, w = oracle.oracle_root_vector(D, r, budget=_budget(args, oracle.OracleBudget(6, 64)))
    elif p == "out-branchings":
        ok, w = oracle.oracle_out_branchings(D, args.k, budget=_budget(args, oracle.DEFAULT))
    else:
        ok, w = oracle.oracle_branching_tree(D, args.root, budget=_budget(args, oracle.DEFAULT))
    emit({"kind": "oracle", "problem": p, "answer": ok, "witness": _listify(w)})
    return YES if ok else NO


# verify ----------------------------------------------------------------------

def certificate_violations(cert: dict, D: Digraph) -> list[str]:
    """Re-check any certificate this tool emits; empty list means valid."""
    kind = cert.get("kind")
    if kind == "trees":
        return tree_packing_violations(D, cert["trees"])
    if kind == "tutte":
        P = Partition.of(D, cert["blocks"])
        d = tutte_deficiency(D, P, cert["k"])
        problems = []
        if d < 1:
            problems.append(f"partition is not deficient (deficiency {d})")
        if "deficiency" in cert and cert["deficiency"] != d:
            problems.append(f"claimed deficiency {cert['deficiency']}, actual {d}")
        return problems
    if kind in ("branchings", "equivalence"):
        if kind == "equivalence" and not cert.get("feasible"):
            return certificate_violations(cert["certificate"], D)
        B = BranchingSet(tuple(tuple(b) for b in cert["branchings"]), tuple(cert["roots"]))
        return branching_violations(D, B, inward=bool(cert.get("inward")))
    if kind == "rootvector-violation":
        r = RootVector({int(v): c for v, c in cert["roots"].items()}, cert["k"])
        X = cert["X"]
        d_in = degrees(D, X)[0] if not cert.get("inward") else degrees(D, X)[1]
        if d_in < r.k - r.of(X):
            return []
        return [f"X={X} satisfies d(X)={d_in} >= k - r(X)={r.k - r.of(X)}"]
    if kind == "mixed":
        S = MixedSolution(BranchingSet(tuple(tuple(b) for b in cert["branchings"]), tuple(cert["roots"])),
                          tuple(tuple(t) for t in cert["trees"]), cert["l"], cert["k"])
        return mixed_violations(D, S)
    raise UsageError(f"unknown certificate kind {kind!r}")


def cmd_verify(args) -> int:
    D = read_digraph(args.digraph)
    try:
        cert = json.loads(Path(args.certificate).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.certificate}: not JSON ({exc})") from None
    if cert.get("schema") != SCHEMA:
        raise UsageError(f"unsupported schema {cert.get('schema')!r}")
    try:
        problems = certificate_violations(cert, D)
    except KeyError as exc:
        raise UsageError(f"certificate lacks field {exc}") from None
    if problems:
        for p in problems:
            print(f"invalid: {p}", file=sys.stderr)
        return USAGE
    emit({"kind": "verification", "certificate": cert["kind"], "valid": True})
    return YES


# misc ------------------------------------------------------------------------

def cmd_export_dot(args) -> int:
    D = read_digraph(args.input)
    highlight = []
    if args.highlight:
        cert = json.loads(Path(args.highlight).read_text(encoding="utf-8"))
        for key in ("trees", "branchings"):
            highlight.extend(cert.get(key, []))
    sys.stdout.write(to_dot(D, args.name, highlight))
    return YES


def cmd_generate(args) -> int:
    rng = random.Random(args.seed)
    fam = args.family
    if fam == "cycle":
        D = generators.cycle(args.n)
    elif fam == "doubled-cycle":
        D = generators.doubled_cycle(args.n)
    elif fam == "bidirected":
        D = generators.bidirected_complete(args.n)
    elif fam == "path":
        D = generators.directed_path(args.n)
    else:
        D = generators.random_regular_digraph(args.n, args.k, rng)
    sys.stdout.write(format_digraph(D))
    return YES


# parser ----------------------------------------------------------------------

def _add_budget(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-vertices", type=int, help="oracle vertex budget")
    p.add_argument("--max-arcs", type=int, help="oracle arc budget")
    p.add_argument("--time-limit", type=float, help="oracle time budget in seconds")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="arcpack", description="Arc-disjoint branchings and spanning trees.")
    sub = ap.add_subparsers(dest="command", required=True)

    pack = sub.add_parser("pack", help="polynomial packing algorithms")
    psub = pack.add_subparsers(dest="problem", required=True)
    p = psub.add_parser("trees", help="k edge-disjoint spanning trees or a deficient partition")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("input")
    p = psub.add_parser("branchings", help="arc-disjoint branchings with prescribed roots")
    p.add_argument("-k", type=int, help="number of branchings (defaults to the root count)")
    p.add_argument("--roots", required=True, help="v:count[,v:count...]")
    p.add_argument("--in", dest="inward", action="store_true", help="in-branchings")
    p.add_argument("input")
    p = psub.add_parser("mixed", help="l out-branchings plus k-l spanning trees in a k-regular digraph")
    p.add_argument("-l", type=int, required=True)
    p.add_argument("input")
    p = psub.add_parser("equivalence", help="k free-root out-branchings in a k-regular digraph")
    p.add_argument("input")
    pack.set_defaults(func=cmd_pack)

    red = sub.add_parser("reduce", help="build reduction instances")
    red.add_argument("kind", choices=["sat", "sat-cycle", "ham-path", "ham-inout", "k-expand"])
    red.add_argument("input")
    red.add_argument("--vertex", type=int, default=0, help="host vertex to split (ham kinds)")
    red.add_argument("--distinct-roots", action="store_true",
                     help="ham-inout: report the distinct-root fragment pair")
    red.add_argument("-k", type=int, default=3, help="target degree (k-expand)")
    red.add_argument("-o", "--output", help="output base path; writes BASE.dg and BASE.json")
    red.set_defaults(func=cmd_reduce)

    orc = sub.add_parser("oracle", help="exponential ground-truth deciders")
    osub = orc.add_subparsers(dest="problem", required=True)
    p = osub.add_parser("ham-pair", help="two arc-disjoint Hamiltonian cycles or paths")
    p.add_argument("--mode", choices=["cycles", "paths"], default="cycles")
    p.add_argument("input")
    p = osub.add_parser("inout-pair", help="arc-disjoint out- and in-branching")
    p.add_argument("-u", type=int, help="out-branching root")
    p.add_argument("-v", type=int, help="in-branching root")
    p.add_argument("input")
    for name, what in (("p1", "connected"), ("p2", "strongly connected"),
                       ("p3", "containing an out-branching from s")):
        p = osub.add_parser(name, help=f"(s,t)-path whose removal leaves D {what}")
        p.add_argument("-s", type=int, required=True)
        p.add_argument("-t", type=int, required=True)
        p.add_argument("input")
    p = osub.add_parser("trees", help="Tutte condition over all partitions")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("input")
    p = osub.add_parser("root-vector", help="subset scan of the root-vector condition")
    p.add_argument("--roots", required=True)
    p.add_argument("-k", type=int)
    p.add_argument("input")
    p = osub.add_parser("out-branchings", help="k arc-disjoint out-branchings, free roots")
    p.add_argument("-k", type=int, default=2)
    p.add_argument("input")
    p = osub.add_parser("branching-tree", help="out-branching whose removal leaves D connected")
    p.add_argument("--root", type=int)
    p.add_argument("input")
    p = osub.add_parser("sat", help="exhaustive satisfiability")
    p.add_argument("--max-variables", type=int, default=20)
    p.add_argument("input")
    p = osub.add_parser("counterexample", help="search small digraphs for a counterexample")
    p.add_argument("--variant", choices=["eulerian", "fixed-root"], default="eulerian")
    p.add_argument("--max-n", type=int, default=6)
    for p in osub.choices.values():
        _add_budget(p)
    orc.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="re-check a certificate against a digraph")
    p.add_argument("certificate")
    p.add_argument("digraph")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-dot", help="DOT text for a digraph")
    p.add_argument("input")
    p.add_argument("--name", default="D")
    p.add_argument("--highlight", help="certificate whose arc sets get coloured")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("generate", help="write a named or random digraph")
    p.add_argument("family", choices=["cycle", "doubled-cycle", "bidirected", "path", "random-regular"])
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, default=2)
    p.add_argument("--seed", type=int, default=20240601)
    p.set_defaults(func=cmd_generate)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else YES
    try:
        return args.func(args)
    except oracle.BudgetExceeded as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return BUDGET
    except (DigraphError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())

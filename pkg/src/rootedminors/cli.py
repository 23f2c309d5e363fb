"""Command line front end: detect, reduce, generate, verify-model, crosscheck.

Exit codes: 0 minor found (or check passed), 1 no minor (or check failed),
2 unknown within budget, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys

from .connectivity import DomainError, vertex_connectivity
from .graph_core import (
    Graph,
    Graph6Error,
    GraphError,
    MinorModel,
    RootedGraph,
    encode_graph6,
    is_connected,
    parse_edge_list,
    parse_graph6,
)
from .minor_oracle import DEFAULT_BUDGET, decide, find_rooted_minor, get_pattern, verify_model, BudgetExhausted
from .reductions import Instance, fixpoint_reduce

EXIT_YES, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3
DEFAULT_SEED = 0
MAX_CROSSCHECK_N = 10
MINORS = ("k4x", "w4x", "k24x", "k22x", "lx", "lprimex")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


# ------------------------------------------------------------------ input

def read_graph(path: str, fmt: str | None = None) -> Graph:
    text = sys.stdin.read() if path == "-" else open(path).read()
    if fmt is None:
        fmt = "edges" if path.endswith((".edges", ".txt")) else "g6"
    if fmt == "g6":
        lines = [ln for ln in text.split() if ln]
        if len(lines) != 1:
            raise UsageError("expected exactly one graph6 string")
        return parse_graph6(lines[0])
    return parse_edge_list(text)


def parse_roots(text: str, g: Graph, minor: str) -> tuple:
    try:
        roots = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad root list {text!r}") from None
    need = get_pattern(minor).arity
    if len(roots) != need:
        raise UsageError(f"{minor} needs {need} roots, got {len(roots)}")
    return RootedGraph(g, roots).roots


def resolve_budget(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("RMK_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _load_instance(args) -> RootedGraph:
    g = read_graph(args.graph, args.format)
    return RootedGraph(g, parse_roots(args.roots, g, args.minor))


def _load_cert(path):
    if not path:
        return None
    from .structure.webs import Certificate

    with open(path) as fh:
        return Certificate.from_json(json.load(fh))


def _emit(report: dict, args) -> None:
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        for k in sorted(report):
            v = report[k]
            print(f"{k}: {json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}")


# ------------------------------------------------------------------ detect

def _structural(rg: RootedGraph, minor: str, cert, budget: int, report: dict):
    """Structural decider for certified instances, or None when none applies."""
    from .structure.k24 import decide_k24
    from .structure.ltheory import decide_lx
    from .structure.obstructions import decide_w4_by_obstructions

    if cert is None:
        return None
    info = {}
    if minor == "k24x":
        ans = decide_k24(rg, cert, budget, info)
    elif minor == "lx":
        ans = decide_lx(rg, cert, budget, info, rules="safe")
    elif minor == "w4x" and cert.cls == "D":
        v = decide_w4_by_obstructions(rg, check_k4=False, budget=budget)
        report["obstruction"] = v.to_json()
        ans = v.w4_free
        ans = None if ans is None else not ans
        info["method"] = "structural"
    else:
        return None
    report["structural_method"] = info.get("method")
    return ans


def _w4_obstruction(rg: RootedGraph, budget: int):
    from .structure.obstructions import decide_w4_by_obstructions

    if vertex_connectivity(rg.graph) < 2:
        return None
    try:
        v = decide_w4_by_obstructions(rg, budget=budget)
    except DomainError:
        return None
    return v.to_json() if v.status == "w4-free" else None


def run_detect(args) -> int:
    rg = _load_instance(args)
    budget = resolve_budget(args.budget)
    cert = _load_cert(args.cert)
    inst = Instance.of(rg, args.minor)
    report = {"minor": args.minor, "graph6": encode_graph6(rg.graph), "roots": list(rg.roots)}

    _, tree, trace = fixpoint_reduce(inst)
    leaves = tree.leaves()
    ans = None
    if not leaves:
        ans = tree.fold(lambda leaf: None)
        report["method"] = "reduced"
    if ans is None:
        ans = _structural(rg, args.minor, cert, budget, report)
        if ans is not None:
            report["method"] = "structural"
    if ans is None:
        ans = tree.fold(lambda leaf: leaf.decide(budget))
        report["method"] = "reduced+oracle" if trace.steps else "oracle"
    report["steps"] = [s["lemma"] for s in trace.steps]
    if ans is False and args.minor == "w4x":
        obs = _w4_obstruction(rg, budget)
        if obs is not None:
            report["obstruction"] = obs
    if ans is True and args.emit:
        try:
            model = find_rooted_minor(rg, get_pattern(args.minor), budget)
        except BudgetExhausted:
            model = None
        if model is not None:
            with open(args.emit, "w") as fh:
                fh.write(model.to_json() + "\n")
            report["model"] = args.emit
    report["answer"] = {True: "yes", False: "no", None: "unknown"}[ans]
    _emit(report, args)
    return {True: EXIT_YES, False: EXIT_NO, None: EXIT_UNKNOWN}[ans]


# ------------------------------------------------------------------ reduce

def run_reduce(args) -> int:
    rg = _load_instance(args)
    budget = resolve_budget(args.budget)
    inst = Instance.of(rg, args.minor)
    leaves, tree, trace = fixpoint_reduce(inst)
    if args.trace:
        with open(args.trace, "w") as fh:
            json.dump(trace.to_json(), fh, indent=1, sort_keys=True)
            fh.write("\n")
    leaf_json = [leaf.to_json() for leaf in leaves]
    if args.emit:
        with open(args.emit, "w") as fh:
            json.dump(leaf_json, fh, indent=1, sort_keys=True)
            fh.write("\n")
    ans = tree.fold(lambda leaf: leaf.decide(budget))
    report = {
        "minor": args.minor,
        "steps": [s["lemma"] for s in trace.steps],
        "leaves": leaf_json,
        "answer": {True: "yes", False: "no", None: "unknown"}[ans],
    }
    _emit(report, args)
    return {True: EXIT_YES, False: EXIT_NO, None: EXIT_UNKNOWN}[ans]


# ------------------------------------------------------------------ generate

def run_generate(args) -> int:
    from .structure.webs import ConstructionError, random_instance

    rng = random.Random(args.seed)
    try:
        rg, cert = random_instance(args.cls, rng, max_n=args.size)
    except ConstructionError as exc:
        raise UsageError(str(exc)) from None
    g6 = encode_graph6(rg.graph)
    cert_json = cert.to_json()
    if args.emit:
        with open(args.emit + ".g6", "w") as fh:
            fh.write(g6 + "\n")
        with open(args.emit + ".cert.json", "w") as fh:
            json.dump(cert_json, fh, indent=1, sort_keys=True)
            fh.write("\n")
    report = {"class": cert.cls, "graph6": g6, "roots": list(rg.roots), "seed": args.seed}
    if args.json:
        report["certificate"] = cert_json
    _emit(report, args)
    return EXIT_YES


# ------------------------------------------------------------------ verify

def run_verify_model(args) -> int:
    rg = _load_instance(args)
    try:
        with open(args.model) as fh:
            model = MinorModel.from_json(fh.read())
    except (OSError, GraphError) as exc:
        raise UsageError(str(exc)) from None
    v = verify_model(rg, get_pattern(args.minor), model)
    report = {"ok": v.ok, "reason": v.reason, "detail": v.detail}
    _emit(report, args)
    return EXIT_YES if v.ok else EXIT_NO


# ------------------------------------------------------------------ crosscheck

def _atlas_3conn(n_max: int):
    import networkx as nx

    for h in nx.graph_atlas_g():
        if 4 <= h.number_of_nodes() <= n_max and nx.is_connected(h) and nx.node_connectivity(h) >= 3:
            yield Graph.from_networkx(h)


def _random_connected(rng: random.Random, n: int) -> Graph:
    while True:
        p = rng.uniform(0.25, 0.7)
        es = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        g = Graph.from_edges(n, es)
        if is_connected(g):
            return g


def _web_check(minor: str, rg: RootedGraph, cert, budget):
    """(structural answer, oracle answer) on a certified web instance."""
    from .structure.k24 import decide_k24, k22_via_disjoint_paths
    from .structure.ltheory import decide_lx, find_lprime
    from .structure.obstructions import decide_w4_by_obstructions

    oracle = decide(rg, get_pattern(minor), budget) if minor != "lprimex" else \
        decide(RootedGraph(rg.graph, rg.roots[:3]), get_pattern("lprimex"), budget)
    if minor == "k4x":
        return False, oracle
    if minor == "w4x":
        return decide_w4_by_obstructions(rg, check_k4=False, budget=budget).w4_free is False, oracle
    if minor == "k24x":
        return decide_k24(rg, cert, budget), oracle
    if minor == "k22x":
        return k22_via_disjoint_paths(rg.graph, *rg.roots), oracle
    if minor == "lx":
        return decide_lx(rg, cert, budget, rules="safe"), oracle
    try:
        return find_lprime(rg.graph, rg.roots[:3], budget) is not None, oracle
    except BudgetExhausted:
        return None, oracle


def _random_check(minor: str, rg: RootedGraph, budget):
    from .structure.k24 import k22_via_disjoint_paths

    oracle = decide(rg, get_pattern(minor), budget)
    if minor == "k22x":
        return k22_via_disjoint_paths(rg.graph, *rg.roots), oracle
    _, tree, _ = fixpoint_reduce(Instance.of(rg, minor))
    return tree.fold(lambda leaf: leaf.decide(budget)), oracle


def _minimize(rg: RootedGraph, check) -> RootedGraph:
    """Greedy edge deletion keeping the disagreement."""

    def bad(r):
        try:
            a, b = check(r)
        except (DomainError, GraphError):
            return False
        return a is not None and b is not None and a != b

    changed = True
    while changed:
        changed = False
        for e in rg.graph.sorted_edges():
            cand = RootedGraph(rg.graph.remove_edges([e]), rg.roots)
            if bad(cand):
                rg, changed = cand, True
                break
    return rg


def run_crosscheck(args) -> int:
    if args.n > args.max_n:
        raise UsageError(f"--n {args.n} exceeds the maximum {args.max_n}")
    budget = resolve_budget(args.budget)
    rng = random.Random(args.seed)
    minor = args.minor
    agree = disagree = unknown = 0
    bad = []
    if args.corpus == "all3conn":
        if minor not in ("k4x", "w4x"):
            raise UsageError("the all3conn corpus checks the K4(X)-or-W4(X) disjunction; use k4x or w4x")
        k4, w4 = get_pattern("k4x"), get_pattern("w4x")
        for g in _atlas_3conn(min(args.n, 7)):
            for roots in itertools.combinations(range(g.n), 4):
                rg = RootedGraph(g, roots)
                a = decide(rg, k4, budget)
                b = None if a else decide(rg, w4, budget)
                if a is None or (not a and b is None):
                    unknown += 1
                elif a or b:
                    agree += 1
                else:
                    disagree += 1
                    bad.append({"graph6": encode_graph6(g), "roots": list(roots)})
    else:
        from .structure.webs import ConstructionError, random_instance

        for _ in range(args.count):
            if args.corpus == "web":
                try:
                    rg, cert = random_instance("D", rng, max_n=args.n)
                except ConstructionError:
                    continue
                s, o = _web_check(minor, rg, cert, budget)
                check = None
            else:
                g = _random_connected(rng, args.n)
                roots = tuple(rng.sample(range(g.n), get_pattern(minor).arity))
                rg = RootedGraph(g, roots)
                s, o = _random_check(minor, rg, budget)
                check = lambda r: _random_check(minor, r, budget)  # noqa: E731
            if s is None or o is None:
                unknown += 1
            elif s == o:
                agree += 1
            else:
                disagree += 1
                small = _minimize(rg, check) if check else rg
                bad.append({"graph6": encode_graph6(small.graph), "roots": list(small.roots),
                            "structural": s, "oracle": o})
    bad.sort(key=lambda d: (d["graph6"], d["roots"]))
    report = {"minor": minor, "corpus": args.corpus, "n": args.n, "seed": args.seed,
              "agree": agree, "disagree": disagree, "unknown": unknown, "counterexamples": bad[:5]}
    _emit(report, args)
    return EXIT_NO if disagree else EXIT_YES


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rmk", description="Rooted minors with three or four roots.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, graph=True):
        if graph:
            sp.add_argument("--graph", required=True, help="graph file (g6 or edge list), - for stdin")
            sp.add_argument("--format", choices=("g6", "edges"), default=None)
            sp.add_argument("--roots", required=True, help="comma separated root vertices")
        sp.add_argument("--minor", choices=MINORS, required=graph)
        sp.add_argument("--budget", type=int, default=None, help="search node budget (env RMK_BUDGET)")
        sp.add_argument("--emit", default=None)
        sp.add_argument("--json", action="store_true")

    d = sub.add_parser("detect", help="decide whether the rooted minor exists")
    common(d)
    d.add_argument("--cert", default=None, help="class certificate JSON from generate")

    r = sub.add_parser("reduce", help="reduce to irreducible leaves")
    common(r)
    r.add_argument("--trace", default=None, help="write the reduction trace JSON here")

    gen = sub.add_parser("generate", help="seeded member of a K4(X)-free class")
    common(gen, graph=False)
    gen.add_argument("--class", dest="cls", choices=list("ABCDEF"), required=True)
    gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    gen.add_argument("--size", type=int, default=10, help="maximum number of vertices")

    v = sub.add_parser("verify-model", help="check a model JSON against the graph")
    common(v)
    v.add_argument("--model", required=True)

    c = sub.add_parser("crosscheck", help="structural deciders against the oracle")
    common(c, graph=False)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--corpus", choices=("web", "all3conn", "random"), default="random")
    c.add_argument("--count", type=int, default=100)
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    c.add_argument("--max-n", type=int, default=MAX_CROSSCHECK_N)
    return p


COMMANDS = {
    "detect": run_detect,
    "reduce": run_reduce,
    "generate": run_generate,
    "verify-model": run_verify_model,
    "crosscheck": run_crosscheck,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "crosscheck" and args.minor is None:
        print("rmk: error: crosscheck needs --minor", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, GraphError, Graph6Error, DomainError, OSError, json.JSONDecodeError) as exc:
        print(f"rmk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

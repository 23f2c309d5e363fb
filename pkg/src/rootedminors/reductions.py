"""Answer-preserving rewrites of rooted-minor instances across small separations.

Every rule looks at a separation of order one, two or three, counts how the
roots fall (in the boundary, strictly on side A, strictly on side B) and
either settles the instance, replaces it by a smaller one, or splits it
into children whose answers combine with OR (one rule uses OR with an AND
branch).  `fixpoint_reduce` applies rules until none fires and returns the
leaves, the combiner tree over them and a trace of the steps.

Child graphs keep the boundary as a clique: G_A = G[A] plus the edge uv
(or the triangle, for three-vertex boundaries).
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field

from .connectivity import DomainError, is_tight, separating_sets, vertex_connectivity
from .graph_core import (
    Graph,
    RootedGraph,
    bits,
    components,
    contract_edge,
    encode_graph6,
    is_connected,
    mask_of,
    rooted_subgraph,
)
from .minor_oracle import decide, get_pattern, restricted_pattern

# lower number fires first
PRIORITY = {"forced-no": 0, "same-answer": 1, "or": 2, "or-and": 2}

# rules whose iff fails on some instance; never used unless asked for
UNSOUND_RULES = frozenset({"lx-two-two"})


class ReductionError(RuntimeError):
    """A rewrite did not shrink its instance."""


@dataclass(frozen=True)
class Instance:
    """A rooted graph, a pattern name and the allowed root maps."""

    rooted: RootedGraph
    pattern: str
    family: tuple

    def __post_init__(self):
        p = get_pattern(self.pattern)
        fam = tuple(tuple(m) for m in self.family)
        if not fam:
            raise DomainError("map family must be nonempty")
        if any(len(m) != len(self.rooted.roots) for m in fam):
            raise DomainError(f"{self.pattern} needs {p.arity} roots")
        object.__setattr__(self, "family", fam)

    @classmethod
    def of(cls, rg: RootedGraph, pattern: str) -> "Instance":
        p = get_pattern(pattern)
        if len(rg.roots) != p.arity:
            raise DomainError(f"{pattern} needs {p.arity} roots, got {len(rg.roots)}")
        return cls(rg, p.name, p.family)

    @property
    def graph(self) -> Graph:
        return self.rooted.graph

    def as_pattern(self):
        return restricted_pattern(get_pattern(self.pattern), self.family)

    def decide(self, budget: int | None = None) -> bool | None:
        return decide(self.rooted, self.as_pattern(), budget)

    def size(self) -> tuple:
        return (self.graph.n, len(self.graph.edges))

    def digest(self) -> str:
        text = json.dumps([encode_graph6(self.graph), list(self.rooted.roots), self.pattern,
                           [list(m) for m in sorted(self.family)]])
        return hashlib.sha1(text.encode()).hexdigest()[:12]

    def to_json(self) -> dict:
        return {
            "graph6": encode_graph6(self.graph),
            "roots": list(self.rooted.roots),
            "pattern": self.pattern,
            "family_size": len(self.family),
            "hash": self.digest(),
        }


@dataclass
class ReductionStep:
    """One rule application.

    combiner "same-answer" has one child, "or" combines all children,
    "or-and" reads children (k0, k1, m0, m1) as k0 or k1 or (m0 and m1),
    and "forced-no" has none.
    """

    lemma: str
    boundary: tuple
    combiner: str
    children: list = field(default_factory=list)

    def __post_init__(self):
        need = {"same-answer": (1, 1), "or": (1, None), "or-and": (4, 4), "forced-no": (0, 0)}
        lo, hi = need[self.combiner]
        if len(self.children) < lo or (hi is not None and len(self.children) > hi):
            raise ValueError(f"{self.combiner} step with {len(self.children)} children")


@dataclass
class Node:
    """Combiner tree: kind is leaf, no, same, or, or-and."""

    kind: str
    instance: Instance | None = None
    children: list = field(default_factory=list)
    step: ReductionStep | None = None

    def fold(self, leaf_value) -> bool | None:
        """Evaluate with leaf_value(instance) -> bool or None (unknown)."""
        if self.kind == "leaf":
            return leaf_value(self.instance)
        if self.kind == "no":
            return False
        vals = [c.fold(leaf_value) for c in self.children]
        if self.kind == "same":
            return vals[0]
        if self.kind == "or":
            return _or(vals)
        k0, k1, m0, m1 = vals
        return _or([k0, k1, _and([m0, m1])])

    def leaves(self) -> list:
        if self.kind == "leaf":
            return [self.instance]
        return [x for c in self.children for x in c.leaves()]


def _or(vals):
    if any(v is True for v in vals):
        return True
    return None if any(v is None for v in vals) else False


def _and(vals):
    if any(v is False for v in vals):
        return False
    return None if any(v is None for v in vals) else True


@dataclass
class ReductionTrace:
    steps: list = field(default_factory=list)
    advisories: list = field(default_factory=list)

    def record(self, parent: Instance, step: ReductionStep) -> None:
        self.steps.append({
            "lemma": step.lemma,
            "boundary": list(step.boundary),
            "combiner": step.combiner,
            "parent": parent.digest(),
            "children": [c.digest() for c in step.children],
        })

    def to_json(self) -> dict:
        return {"steps": self.steps, "advisories": self.advisories}


# ------------------------------------------------------------- helpers

def _child(inst: Instance, keep: int, subst: dict, extra_edges=(), pattern=None, family=None) -> Instance:
    """G[keep] plus extra edges, roots substituted position by position."""
    roots = tuple(subst.get(i, r) for i, r in enumerate(inst.rooted.roots))
    rg, _ = rooted_subgraph(inst.rooted, bits(keep), roots=roots, extra_edges=extra_edges)
    return Instance(rg, pattern or inst.pattern, inst.family if family is None else family)


def _closed_under_swap(family, i: int, j: int) -> bool:
    fam = set(family)
    for m in family:
        s = list(m)
        s[i], s[j] = s[j], s[i]
        if tuple(s) not in fam:
            return False
    return True


def _cut_edges(S) -> list:
    return list(itertools.combinations(sorted(S), 2))


def _pattern_connectivity(name: str) -> int:
    return vertex_connectivity(get_pattern(name).H)


def _sides(g: Graph, S: tuple, comps, X: int):
    """Candidate (A-strict, B-strict) splits of G - S.

    Root-free components go to B when some component carries roots
    (the all-on-one-side case); otherwise every split of the root-bearing
    components is offered, with the root-free ones kept on side A.
    """
    rooted = [c for c in comps if c & X]
    free = sum(c for c in comps if not c & X)
    out = []
    if not rooted:
        out.append((comps[0], sum(comps[1:])))
        return out
    if free:
        out.append((sum(rooted), free))
    for r in range(1, len(rooted)):
        for sub in itertools.combinations(rooted, r):
            if rooted[0] not in sub:
                continue  # each bipartition once
            a = sum(sub)
            out.append((a | free, sum(rooted) & ~a))
    return out


def _positions(inst: Instance, mask: int) -> list:
    return [i for i, r in enumerate(inst.rooted.roots) if mask >> r & 1]


# ------------------------------------------------------------- rules

def _basic(inst: Instance):
    """Too small, or disconnected."""
    g, X = inst.graph, inst.rooted.root_mask
    if g.n < get_pattern(inst.pattern).H.n:
        return ReductionStep("too-small", (), "forced-no")
    if not is_connected(g):
        comps = components(g)
        holder = [c for c in comps if c & X]
        if len(holder) > 1:
            return ReductionStep("roots-in-different-components", (), "forced-no")
        return ReductionStep("component-with-roots", (), "same-answer", [_child(inst, holder[0], {})])
    return None


def reduce_cut_vertex(inst: Instance):
    """Best rule across a cut vertex, for 2-connected patterns."""
    if _pattern_connectivity(inst.pattern) < 2:
        return None
    g, X = inst.graph, inst.rooted.root_mask
    if not is_connected(g):
        return _basic(inst)
    best = None
    for S, comps in separating_sets(g, 1):
        v = S[0]
        for a, b in _sides(g, S, comps, X):
            step = _cut_rule(inst, v, a, b)
            if step is not None:
                best = _better(best, step, (S, bits(a)))
    return best[0] if best else None


def _cut_rule(inst, v, a, b):
    X = inst.rooted.root_mask
    pa, pb = _positions(inst, a), _positions(inst, b)
    vm = 1 << v
    if not pb:
        return ReductionStep("cut-vertex-all-one-side", (v,), "same-answer", [_child(inst, a | vm, {})])
    if not pa:
        return ReductionStep("cut-vertex-all-one-side", (v,), "same-answer", [_child(inst, b | vm, {})])
    if X & vm:
        return ReductionStep("cut-vertex-root-at-cut", (v,), "forced-no")
    if len(pb) == 1 and len(pa) > 1:
        return ReductionStep("cut-vertex-one-across", (v,), "same-answer",
                             [_child(inst, a | vm, {pb[0]: v})])
    if len(pa) == 1 and len(pb) > 1:
        return ReductionStep("cut-vertex-one-across", (v,), "same-answer",
                             [_child(inst, b | vm, {pa[0]: v})])
    return ReductionStep("cut-vertex-split-roots", (v,), "forced-no")


def _better(best, step, key):
    k = (PRIORITY[step.combiner], len(key[0]), key[0], key[1])
    if best is None or k < best[1]:
        return (step, k)
    return best


def _two_sep_candidates(inst: Instance, order: int = 2):
    g, X = inst.graph, inst.rooted.root_mask
    for S, comps in separating_sets(g, order):
        if len(S) < 2:
            continue
        for a, b in _sides(g, S, comps, X):
            yield S, a, b


def reduce_2_separation(inst: Instance):
    """Rules across 2-separations for 3-connected patterns (K4, W4)."""
    if _pattern_connectivity(inst.pattern) < 3 or get_pattern(inst.pattern).arity != 4:
        return None
    if vertex_connectivity(inst.graph) != 2:
        return None
    best = None
    for S, a, b in _two_sep_candidates(inst):
        step = _two_sep_rule(inst, S, a, b)
        if step is not None:
            best = _better(best, step, (S, bits(a)))
    return best[0] if best else None


def _two_sep_rule(inst, S, a, b):
    X = inst.rooted.root_mask
    u, v = S
    sm = mask_of(S)
    edge = [(u, v)]
    pa, pb = _positions(inst, a), _positions(inst, b)
    inb = [r for r in S if X >> r & 1]
    if not pb or not pa:
        side = a if pb == [] else b
        return ReductionStep("2sep-all-one-side", S, "same-answer", [_child(inst, side | sm, {}, edge)])
    if len(inb) == 2:
        return ReductionStep("2sep-roots-in-boundary", S, "forced-no")
    if len(inb) == 1:
        other = v if inb[0] == u else u
        if len(pa) == 1:
            return ReductionStep("2sep-root-in-boundary", S, "same-answer",
                                 [_child(inst, b | sm, {pa[0]: other}, edge)])
        return ReductionStep("2sep-root-in-boundary", S, "same-answer",
                             [_child(inst, a | sm, {pb[0]: other}, edge)])
    if len(pa) == 1 or len(pb) == 1:
        lone, keep = (pa[0], b) if len(pa) == 1 else (pb[0], a)
        kids = [_child(inst, keep | sm, {lone: w}, edge) for w in (u, v)]
        return ReductionStep("2sep-one-across", S, "or", kids)
    # two roots strictly on each side
    if not (_closed_under_swap(inst.family, *pa) and _closed_under_swap(inst.family, *pb)):
        return None
    kids = [
        _child(inst, a | sm, {pb[0]: u, pb[1]: v}, edge),
        _child(inst, b | sm, {pa[0]: u, pa[1]: v}, edge),
    ]
    return ReductionStep("2sep-two-two", S, "or", kids)


def reduce_k24(inst: Instance):
    """Rules for K2,4(X) across 2-separations and tight 3-separations."""
    if inst.pattern != "k24x" or vertex_connectivity(inst.graph) < 2:
        return None
    best = None
    for S, a, b in _two_sep_candidates(inst, 3):
        if len(S) == 3:
            step = _k24_tight(inst, S, a, b)
        else:
            step = _k24_rule(inst, S, a, b)
        if step is not None:
            best = _better(best, step, (S, bits(a)))
    return best[0] if best else None


def _k24_rule(inst, S, a, b):
    X = inst.rooted.root_mask
    u, v = S
    sm = mask_of(S)
    edge = [(u, v)]
    pa, pb = _positions(inst, a), _positions(inst, b)
    inb = [r for r in S if X >> r & 1]
    if not pb or not pa:
        side = a if not pb else b
        return ReductionStep("k24-all-one-side", S, "same-answer", [_child(inst, side | sm, {}, edge)])
    if len(inb) == 2:
        return ReductionStep("k24-split-at-roots", S, "forced-no")
    if len(inb) == 1:
        other = v if inb[0] == u else u
        if len(pa) == 1:
            return ReductionStep("k24-one-at-cut", S, "same-answer", [_child(inst, b | sm, {pa[0]: other}, edge)])
        return ReductionStep("k24-one-at-cut", S, "same-answer", [_child(inst, a | sm, {pb[0]: other}, edge)])
    if len(pa) != 2:
        return None
    if set(inst.family) != set(get_pattern("k24x").family):
        return None
    k22 = get_pattern("k22x").family
    # k22x puts its first two roots on one side, so the side's own roots lead
    roots = inst.rooted.roots
    kids = [
        _child(inst, a | sm, {pb[0]: u, pb[1]: v}, edge),
        _child(inst, b | sm, {pa[0]: u, pa[1]: v}, edge),
        _k22_child(inst, a | sm, [roots[i] for i in pa], S, edge, k22),
        _k22_child(inst, b | sm, [roots[i] for i in pb], S, edge, k22),
    ]
    return ReductionStep("k24-two-two", S, "or-and", kids)


def _k22_child(inst, keep, own, S, edge, fam):
    rg = RootedGraph(inst.graph, tuple(own) + tuple(S))
    sub, _ = rooted_subgraph(rg, bits(keep), extra_edges=edge)
    return Instance(sub, "k22x", fam)


def _k24_tight(inst, S, a, b):
    """Roots on one side of a tight 3-separation: keep that side plus a triangle on S."""
    if _positions(inst, b) or not is_tight(inst.graph, S):
        return None
    return ReductionStep("k24-tight-3sep", S, "same-answer",
                         [_child(inst, a | mask_of(S), {}, _cut_edges(S))])


def reduce_lx(inst: Instance, trace: ReductionTrace | None = None, allow_unsound: bool = False):
    """Rules for L(X) across 2-separations.

    The two-and-two rule is only offered with allow_unsound=True: it is
    refuted by a 12-vertex web subgraph (see `lx_two_two_counterexample`).
    The one-root-in-the-boundary case yields no rewrite; it is logged in
    the trace as an advisory because its conclusion is a statement about
    branch-set placement, not an equivalence.
    """
    if inst.pattern != "lx" or vertex_connectivity(inst.graph) < 2:
        return None
    X = inst.rooted.root_mask
    best = None
    for S, a, b in _two_sep_candidates(inst):
        u, v = S
        sm = mask_of(S)
        edge = [(u, v)]
        pa, pb = _positions(inst, a), _positions(inst, b)
        inb = [r for r in S if X >> r & 1]
        step = None
        if not pa or not pb:
            side = a if not pb else b
            step = ReductionStep("lx-all-one-side", S, "same-answer", [_child(inst, side | sm, {}, edge)])
        elif len(inb) == 2:
            step = ReductionStep("lx-roots-in-boundary", S, "forced-no")
        elif len(inb) == 1:
            if trace is not None:
                trace.advisories.append({"lemma": "lx-root-in-boundary", "boundary": list(S),
                                         "instance": inst.digest()})
        elif len(pa) == 2 and allow_unsound:
            if _closed_under_swap(inst.family, *pa) and _closed_under_swap(inst.family, *pb):
                step = ReductionStep("lx-two-two", S, "or", [
                    _child(inst, a | sm, {pb[0]: u, pb[1]: v}, edge),
                    _child(inst, b | sm, {pa[0]: u, pa[1]: v}, edge),
                ])
        if step is not None:
            best = _better(best, step, (S, bits(a)))
    return best[0] if best else None


def lx_two_two_counterexample() -> tuple:
    """A graph where splitting L(X) along a 2+2 separation loses the minor.

    Returns (rooted graph, boundary).  The graph has an L(X)-minor, but
    neither side of the separation on the boundary has the rewritten one.
    """
    from .graph_core import parse_graph6

    g = parse_graph6("K`o{QHH@WXb_")
    return RootedGraph(g, (0, 1, 2, 3)), (4, 5)


# ------------------------------------------------------------- planar reduction

def reduce_to_planar(inst: Instance, cert) -> Graph:
    """Contract the clique parts of a certified web subgraph to a planar graph.

    For a 3-connected instance each triangle keeps one clique component,
    contracted to a single vertex seeing the whole triangle, and the other
    components are pushed into a triangle vertex.  Otherwise a component
    seeing all of T is kept if there is one, and failing that up to three
    components with different pairs of triangle neighbours are kept.
    """
    if cert is None or cert.cls != "D":
        raise DomainError("reduce_to_planar needs a class D (web) certificate")
    g = inst.graph
    three = vertex_connectivity(g) >= 3
    # label vertices so contractions can be tracked through renumbering
    label = list(range(g.n))
    for t, vs in sorted(cert.triangle_cliques.items()):
        current = [label.index(x) for x in vs if x in label]
        cur_t = [label.index(x) for x in t]
        mask = mask_of(current)
        comps = components(g, mask) if mask else []
        keep, push = _choose_components(g, comps, cur_t, three)
        for c in comps:
            members = [label[x] for x in bits(c)]
            if c in keep:
                g, label = _contract_set(g, label, members)
            else:
                # merge into the least triangle vertex it touches
                touch = [label[x] for x in cur_t if g.adj[x] & c]
                g, label = _contract_set(g, label, [touch[0]] + members)
    return g


def _choose_components(g, comps, tri, three):
    def nbrs(c):
        return frozenset(x for x in tri if g.adj[x] & c)

    if not comps:
        return [], []
    full = [c for c in comps if len(nbrs(c)) == 3]
    if three or full:
        first = full[0] if full else comps[0]
        return [first], [c for c in comps if c != first]
    seen, keep = set(), []
    for c in comps:
        n = nbrs(c)
        if n not in seen:
            seen.add(n)
            keep.append(c)
    return keep, [c for c in comps if c not in keep]


def _contract_set(g: Graph, label: list, members: list):
    """Contract the connected vertex set `members` (original labels) onto members[0]."""
    anchor = members[0]
    members = list(members)
    while len(members) > 1:
        cur = [label.index(x) for x in members]
        cm = mask_of(cur)
        for x in cur:
            nb = g.adj[x] & cm
            if nb:
                y = (nb & -nb).bit_length() - 1
                break
        else:
            raise DomainError("component to contract is not connected")
        lo, hi = min(x, y), max(x, y)
        g = contract_edge(g, (lo, hi))
        merged = anchor if anchor in (label[lo], label[hi]) else label[lo]
        gone = label[hi] if merged == label[lo] else label[lo]
        label = label[:hi] + label[hi + 1:]
        label[lo] = merged
        members.remove(gone)
    return g, label


# ------------------------------------------------------------- fixpoint

def next_step(inst: Instance, trace: ReductionTrace | None = None, allow_unsound: bool = False):
    """Highest-priority applicable rewrite, or None."""
    cands = []
    for step in (_basic(inst), reduce_cut_vertex(inst), reduce_2_separation(inst),
                 reduce_k24(inst), reduce_lx(inst, trace, allow_unsound)):
        if step is not None:
            cands.append(step)
    if not cands:
        return None
    return min(cands, key=lambda s: (PRIORITY[s.combiner], len(s.boundary), s.boundary))


def fixpoint_reduce(inst: Instance, allow_unsound: bool = False, max_steps: int = 10000):
    """Reduce until no rule fires.

    Returns (leaves, combiner tree, trace).  Folding the tree with the
    oracle on the leaves gives the answer for `inst`.
    """
    trace = ReductionTrace()
    count = [0]

    def go(cur: Instance) -> Node:
        count[0] += 1
        if count[0] > max_steps:
            raise ReductionError("step limit reached")
        step = next_step(cur, trace, allow_unsound)
        if step is None:
            return Node("leaf", cur)
        for ch in step.children:
            if not ch.size() < cur.size():
                raise ReductionError(f"{step.lemma} did not shrink the instance")
        trace.record(cur, step)
        kids = [go(ch) for ch in step.children]
        kind = {"forced-no": "no", "same-answer": "same", "or": "or", "or-and": "or-and"}[step.combiner]
        return Node(kind, None, kids, step)

    tree = go(inst)
    return tree.leaves(), tree, trace


def reduced_decide(inst: Instance, budget: int | None = None, allow_unsound: bool = False) -> bool | None:
    """Oracle on the leaves of the fixpoint, folded through the combiner tree."""
    _, tree, _ = fixpoint_reduce(inst, allow_unsound)
    return tree.fold(lambda leaf: leaf.decide(budget))

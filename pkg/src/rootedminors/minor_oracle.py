"""Exhaustive rooted-minor search and model verification.

The search labels the vertices of the component holding the roots with
pattern vertices.  In a connected graph any model can be grown until it
covers every vertex (an unused vertex next to a branch set can join it
without breaking anything), so it is enough to look for partitions of the
component into connected parts.  Models returned this way are spanning;
`verify_model` accepts non-spanning models as well.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache

from .graph_core import (
    Graph,
    MinorModel,
    RootedGraph,
    bits,
    component_of,
    is_connected_mask,
)

DEFAULT_BUDGET = int(os.environ.get("RMK_BUDGET", "3000000"))


class BudgetExhausted(RuntimeError):
    """The search hit its node budget before reaching a decision."""


@dataclass(frozen=True)
class Pattern:
    """Target graph H, the slots that may receive roots, and the allowed maps.

    Each map is a tuple whose i-th entry is the pattern vertex receiving
    the i-th root.
    """

    name: str
    H: Graph
    slots: tuple
    family: tuple

    @property
    def arity(self) -> int:
        return len(self.family[0])

    @property
    def labels(self) -> tuple:
        return self.H.labels

    def label(self, x: int) -> str:
        return self.H.labels[x]

    def index(self, label: str) -> int:
        return self.H.labels.index(label)


def _bijections(slots, k):
    return tuple(itertools.permutations(slots, k))


def _make_patterns() -> dict:
    pats = {}
    k4 = Graph.from_edges(4, itertools.combinations(range(4), 2), ["p1", "p2", "p3", "p4"])
    pats["k4x"] = Pattern("k4x", k4, (0, 1, 2, 3), _bijections((0, 1, 2, 3), 4))

    w4 = Graph.from_edges(
        5,
        [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 4), (2, 4), (3, 4)],
        ["r1", "r2", "r3", "r4", "hub"],
    )
    pats["w4x"] = Pattern("w4x", w4, (0, 1, 2, 3), _bijections((0, 1, 2, 3), 4))

    # t1..t4 = 0..3, s1, s2 = 4, 5
    k24 = Graph.from_edges(
        6, [(t, s) for t in range(4) for s in (4, 5)], ["t1", "t2", "t3", "t4", "s1", "s2"]
    )
    pats["k24x"] = Pattern("k24x", k24, (0, 1, 2, 3), _bijections((0, 1, 2, 3), 4))

    # s1, s2, t1, t2; first two roots go to the s side, last two to the t side
    k22 = Graph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)], ["s1", "s2", "t1", "t2"])
    fam = tuple(s + t for s in ((0, 1), (1, 0)) for t in ((2, 3), (3, 2)))
    pats["k22x"] = Pattern("k22x", k22, (0, 1, 2, 3), fam)

    lnames = [f"v{i}" for i in range(1, 9)]
    ledges = [(1, 2), (1, 5), (2, 7), (2, 8), (2, 3), (3, 4), (4, 5), (4, 7), (5, 6), (6, 7), (6, 8), (7, 8)]
    L = Graph.from_edges(8, [(a - 1, b - 1) for a, b in ledges], lnames)
    lslots = (0, 2, 3, 4)
    pats["lx"] = Pattern("lx", L, lslots, _bijections(lslots, 4))

    keep = [2, 8, 7, 6, 5, 4]
    keep_sorted = sorted(keep)
    idx = {v: i for i, v in enumerate(keep_sorted)}
    lp_edges = [(idx[a], idx[b]) for a, b in ledges if a in idx and b in idx]
    Lp = Graph.from_edges(6, lp_edges, [f"v{v}" for v in keep_sorted])
    lp_slots = (idx[2], idx[4], idx[5])
    pats["lprimex"] = Pattern("lprimex", Lp, lp_slots, _bijections(lp_slots, 3))
    return pats


PATTERNS = _make_patterns()


def get_pattern(name: str) -> Pattern:
    try:
        return PATTERNS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown pattern {name!r}; known: {', '.join(PATTERNS)}") from None


def restricted_pattern(p: Pattern, family) -> Pattern:
    """Same pattern graph with a smaller (or rewritten) map family."""
    family = tuple(tuple(m) for m in family)
    if not family:
        raise ValueError("map family must be nonempty")
    return Pattern(p.name, p.H, p.slots, family)


@lru_cache(maxsize=None)
def automorphisms(H: Graph) -> tuple:
    """All automorphisms of a small graph, by brute force over permutations."""
    out = []
    degs = [H.degree(v) for v in range(H.n)]
    for perm in itertools.permutations(range(H.n)):
        if any(degs[perm[v]] != degs[v] for v in range(H.n)):
            continue
        if all(H.has_edge(perm[u], perm[v]) for u, v in H.edges):
            out.append(perm)
    return tuple(out)


def _distinct_maps(p: Pattern) -> list:
    """Family in its fixed order, skipping maps equivalent to an earlier one under Aut(H)."""
    seen = set()
    out = []
    fam = set(p.family)
    for m in p.family:
        if m in seen:
            continue
        out.append(m)
        for a in automorphisms(p.H):
            img = tuple(a[x] for x in m)
            if img in fam:
                seen.add(img)
    return out


def _interchangeable_classes(H: Graph, fixed_labels: set) -> list:
    """Classes of free pattern vertices whose transposition is an automorphism."""
    free = [x for x in range(H.n) if x not in fixed_labels]
    parent = {x: x for x in free}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for x, y in itertools.combinations(free, 2):
        nx_ = H.adj[x] & ~(1 << y)
        ny_ = H.adj[y] & ~(1 << x)
        if nx_ == ny_:
            parent[find(y)] = find(x)
    prev = {}
    groups = {}
    for x in free:
        groups.setdefault(find(x), []).append(x)
    for members in groups.values():
        members.sort()
        for i, x in enumerate(members[1:], 1):
            prev[x] = members[i - 1]
    return prev


class _Search:
    """Backtracking partition search for one fixed root assignment."""

    def __init__(self, g: Graph, H: Graph, fixed: dict, region: int, allow_unused: bool, counter: list, budget: int):
        self.g = g
        self.H = H
        self.h = H.n
        self.counter = counter
        self.budget = budget
        self.allow_unused = allow_unused
        self.hedges = sorted(H.edges)
        self.prev_twin = _interchangeable_classes(H, set(fixed.values()))
        self.part = [0] * self.h
        for v, x in fixed.items():
            self.part[x] |= 1 << v
        fixed_mask = 0
        for v in fixed:
            fixed_mask |= 1 << v
        self.order = self._order(region, fixed_mask)
        self.unassigned = region & ~fixed_mask

    def _order(self, region: int, start: int) -> list:
        g = self.g
        if not start:
            best = max(bits(region), key=lambda v: (g.degree(v), -v))
            start = 1 << best
            order = [best]
        else:
            order = []
        seen = start
        frontier = start
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= g.adj[v]
            nxt &= region & ~seen
            order.extend(bits(nxt))
            seen |= nxt
            frontier = nxt
        order.extend(bits(region & ~seen))
        return order

    def _nbr(self, mask: int) -> int:
        out = mask
        adj = self.g.adj
        for v in bits(mask):
            out |= adj[v]
        return out

    def feasible(self) -> bool:
        g = self.g
        U = self.unassigned
        part = self.part
        empties = 0
        reach = [0] * self.h
        for x in range(self.h):
            px = part[x]
            if not px:
                empties += 1
                continue
            v = (px & -px).bit_length() - 1
            r = component_of(g, v, px | U)
            if px & ~r:
                return False
            reach[x] = r
        if empties > U.bit_count():
            return False
        closed = [0] * self.h
        for x, y in self.hedges:
            rx, ry = reach[x], reach[y]
            if rx and ry:
                if not closed[x]:
                    closed[x] = self._nbr(rx)
                if not closed[x] & ry:
                    return False
            elif rx or ry:
                z = x if rx else y
                if not closed[z]:
                    closed[z] = self._nbr(reach[z])
                if not closed[z] & U:
                    return False
        return True

    def complete(self) -> bool:
        g = self.g
        part = self.part
        for x in range(self.h):
            if not is_connected_mask(g, part[x]):
                return False
        for x, y in self.hedges:
            px = part[x]
            ok = False
            for v in bits(px):
                if g.adj[v] & part[y]:
                    ok = True
                    break
            if not ok:
                return False
        return True

    def run(self) -> list | None:
        if not self.feasible():
            return None
        return self._rec(0)

    def _rec(self, i: int):
        self.counter[0] += 1
        if self.counter[0] > self.budget:
            raise BudgetExhausted(f"node budget {self.budget} exhausted")
        if i == len(self.order):
            return list(self.part) if self.complete() else None
        v = self.order[i]
        bit = 1 << v
        self.unassigned &= ~bit
        part = self.part
        for x in range(self.h):
            if not part[x]:
                p = self.prev_twin.get(x)
                if p is not None and not part[p]:
                    continue
            part[x] |= bit
            if self.feasible():
                res = self._rec(i + 1)
                if res is not None:
                    part[x] &= ~bit
                    self.unassigned |= bit
                    return res
            part[x] &= ~bit
        if self.allow_unused and self.feasible():
            res = self._rec(i + 1)
            if res is not None:
                self.unassigned |= bit
                return res
        self.unassigned |= bit
        return None


def _model_from_parts(p: Pattern, rg: RootedGraph, parts: list, m: tuple) -> MinorModel:
    return MinorModel(
        p.name,
        {p.label(x): frozenset(bits(parts[x])) for x in range(p.H.n)},
        {r: p.label(m[i]) for i, r in enumerate(rg.roots)},
    )


def find_rooted_minor(rg: RootedGraph, p: Pattern, budget: int | None = None, stats: dict | None = None) -> MinorModel | None:
    """First model in the fixed search order, or None.

    Maps are tried in family order (automorphic duplicates of an earlier
    map are skipped since they cannot succeed where the earlier one
    failed).  Raises BudgetExhausted when the node budget runs out.
    """
    if len(rg.roots) != p.arity:
        raise ValueError(f"pattern {p.name} needs {p.arity} roots, got {len(rg.roots)}")
    budget = DEFAULT_BUDGET if budget is None else budget
    g = rg.graph
    if g.n < p.H.n:
        return None
    region = component_of(g, rg.roots[0], g.full_mask)
    if any(not region >> r & 1 for r in rg.roots):
        return None
    if region.bit_count() < p.H.n:
        return None
    counter = [0]
    try:
        for m in _distinct_maps(p):
            fixed = {r: m[i] for i, r in enumerate(rg.roots)}
            s = _Search(g, p.H, fixed, region, False, counter, budget)
            parts = s.run()
            if parts is not None:
                return _model_from_parts(p, rg, parts, m)
        return None
    finally:
        if stats is not None:
            stats["nodes"] = stats.get("nodes", 0) + counter[0]


def has_rooted_minor(rg: RootedGraph, p: Pattern, budget: int | None = None) -> bool:
    return find_rooted_minor(rg, p, budget) is not None


def decide(rg: RootedGraph, p: Pattern, budget: int | None = None) -> bool | None:
    """True / False, or None when the budget ran out."""
    try:
        return find_rooted_minor(rg, p, budget) is not None
    except BudgetExhausted:
        return None


def has_unrooted_minor(g: Graph, h: Graph, budget: int | None = None) -> bool:
    budget = DEFAULT_BUDGET if budget is None else budget
    if h.n == 0:
        return True
    if g.n < h.n or len(g.edges) < len(h.edges):
        return False
    counter = [0]
    h_conn = is_connected_mask(h, h.full_mask)
    if h_conn:
        rest = g.full_mask
        while rest:
            v = (rest & -rest).bit_length() - 1
            comp = component_of(g, v, rest)
            rest &= ~comp
            if comp.bit_count() < h.n:
                continue
            if _Search(g, h, {}, comp, False, counter, budget).run() is not None:
                return True
        return False
    return _Search(g, h, {}, g.full_mask, True, counter, budget).run() is not None


# ---------------------------------------------------------------- verifier

@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str | None = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def verify_model(rg: RootedGraph, p: Pattern, m: MinorModel) -> Verdict:
    """Check a model clause by clause; the first failing clause is reported.

    Clause order: disjointness, connectivity, pattern-edge, root-placement,
    map-family.  Structural problems (unknown labels, vertices out of
    range) are reported as "malformed".
    """
    g = rg.graph
    labels = list(p.H.labels)
    if m.pattern != p.name:
        return Verdict(False, "malformed", f"model is for {m.pattern}, expected {p.name}")
    if set(m.branch_sets) != set(labels):
        return Verdict(False, "malformed", "branch sets must be indexed by exactly the pattern vertices")
    masks = {}
    for lab in labels:
        mask = 0
        for v in m.branch_sets[lab]:
            if not 0 <= v < g.n:
                return Verdict(False, "malformed", f"vertex {v} out of range")
            mask |= 1 << v
        masks[lab] = mask
    seen = 0
    for lab in labels:
        if masks[lab] & seen:
            clash = bits(masks[lab] & seen)[0]
            return Verdict(False, "disjointness", f"vertex {clash} lies in two branch sets")
        seen |= masks[lab]
    for lab in labels:
        if not is_connected_mask(g, masks[lab]):
            what = "empty" if not masks[lab] else "disconnected"
            return Verdict(False, "connectivity", f"branch set {lab} is {what}")
    for x, y in sorted(p.H.edges):
        a, b = masks[labels[x]], masks[labels[y]]
        if not any(g.adj[v] & b for v in bits(a)):
            return Verdict(False, "pattern-edge", f"no edge between {labels[x]} and {labels[y]}")
    if set(m.root_map) != set(rg.roots):
        return Verdict(False, "root-placement", "root map must cover exactly the roots")
    for r in rg.roots:
        lab = m.root_map[r]
        if lab not in masks or not masks[lab] >> r & 1:
            return Verdict(False, "root-placement", f"root {r} is not in branch set {lab}")
    image = tuple(labels.index(m.root_map[r]) for r in rg.roots)
    if image not in set(p.family):
        return Verdict(False, "map-family", f"root map {image} is not an allowed map")
    return Verdict(True)

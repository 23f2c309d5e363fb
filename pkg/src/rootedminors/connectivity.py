"""Cut vertices, small separations, disjoint paths, and the chain / triangle
structures built from 2-separations whose boundaries lie on a fixed cycle."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .graph_core import Graph, RootedGraph, bits, component_of, components, is_connected, mask_of


class DomainError(ValueError):
    pass


# ------------------------------------------------------------ basic queries

def cut_vertices(g: Graph) -> set:
    if not is_connected(g):
        raise DomainError("cut_vertices needs a connected graph")
    out = set()
    full = g.full_mask
    for v in range(g.n):
        rest = full & ~(1 << v)
        if rest and len(components(g, rest)) > 1:
            out.add(v)
    return out


def _max_disjoint_paths(g: Graph, s: int, t: int, limit: int, banned_edge=None) -> list:
    """Internally disjoint s-t paths by augmenting along a vertex-split network.

    Vertex w becomes w_in = 2w, w_out = 2w+1 with capacity one between them
    (s and t are uncapped).  The direct edge st, if present, is ignored here.
    """
    n = g.n
    cap = {}
    graph = [[] for _ in range(2 * n)]

    def add(a, b, c):
        if (a, b) not in cap:
            graph[a].append(b)
            graph[b].append(a)
            cap.setdefault((b, a), 0)
        cap[(a, b)] = cap.get((a, b), 0) + c

    big = n + 1
    for w in range(n):
        add(2 * w, 2 * w + 1, big if w in (s, t) else 1)
    for u, v in g.edges:
        if {u, v} == {s, t}:
            continue
        add(2 * u + 1, 2 * v, big)
        add(2 * v + 1, 2 * u, big)
    src, dst = 2 * s + 1, 2 * t
    flow = 0
    while flow < limit:
        prev = {src: None}
        q = deque([src])
        while q and dst not in prev:
            a = q.popleft()
            for b in graph[a]:
                if b not in prev and cap[(a, b)] > 0:
                    prev[b] = a
                    q.append(b)
        if dst not in prev:
            break
        b = dst
        while prev[b] is not None:
            a = prev[b]
            cap[(a, b)] -= 1
            cap[(b, a)] += 1
            b = a
        flow += 1
    # read paths off the saturated vertex arcs
    used = {}
    for u, v in g.edges:
        if {u, v} == {s, t}:
            continue
        for a, b in ((u, v), (v, u)):
            # flow on a_out -> b_in equals reverse residual minus initial 0
            if cap[(2 * b, 2 * a + 1)] > 0:
                used.setdefault(a, []).append(b)
    paths = []
    for _ in range(flow):
        path = [s]
        cur = s
        while cur != t:
            nxt = used[cur].pop()
            path.append(nxt)
            cur = nxt
        paths.append(path)
    return paths


def menger_paths(g: Graph, s: int, t: int, k: int) -> list:
    """Up to k internally disjoint s-t paths, as many as exist."""
    if s == t:
        raise DomainError("s and t must differ")
    out = []
    if g.has_edge(s, t) and k > 0:
        out.append([s, t])
    out.extend(_max_disjoint_paths(g, s, t, k - len(out)))
    return out[:k]


def vertex_connectivity(g: Graph) -> int:
    if g.n < 2:
        raise DomainError("vertex connectivity needs at least two vertices")
    if not is_connected(g):
        return 0
    best = g.n - 1
    for s, t in itertools.combinations(range(g.n), 2):
        if not g.has_edge(s, t):
            best = min(best, len(_max_disjoint_paths(g, s, t, best)))
    return best


def is_planar(g: Graph) -> bool:
    import networkx as nx

    planar, _ = nx.check_planarity(g.to_networkx())
    return planar


# -------------------------------------------------------------- separations

@dataclass(frozen=True)
class Separation:
    A: frozenset
    B: frozenset
    proper: bool = True
    tight: bool | None = None

    @property
    def boundary(self) -> frozenset:
        return self.A & self.B

    @property
    def order(self) -> int:
        return len(self.A & self.B)

    @property
    def a_strict(self) -> frozenset:
        return self.A - self.B

    @property
    def b_strict(self) -> frozenset:
        return self.B - self.A

    def swapped(self) -> "Separation":
        return Separation(self.B, self.A, self.proper, self.tight)

    def to_json(self) -> dict:
        return {"A": sorted(self.A), "B": sorted(self.B), "boundary": sorted(self.boundary)}


def is_separation(g: Graph, A, B) -> bool:
    A, B = set(A), set(B)
    if A | B != set(range(g.n)):
        return False
    sa, sb = mask_of(A - B), mask_of(B - A)
    return not any(g.adj[v] & sb for v in bits(sa))


def _separates(g: Graph, S: int) -> bool:
    rest = g.full_mask & ~S
    return bool(rest) and len(components(g, rest)) > 1


def is_tight(g: Graph, boundary) -> bool:
    bd = list(boundary)
    for r in range(len(bd)):
        for sub in itertools.combinations(bd, r):
            if _separates(g, mask_of(sub)):
                return False
    return True


def make_separation(g: Graph, A_mask: int, B_mask: int) -> Separation:
    A, B = frozenset(bits(A_mask)), frozenset(bits(B_mask))
    if not is_separation(g, A, B):
        raise DomainError("not a separation")
    proper = bool(A - B) and bool(B - A)
    return Separation(A, B, proper, is_tight(g, A & B))


@lru_cache(maxsize=4096)
def separating_sets(g: Graph, k: int = 2) -> tuple:
    """Pairs (boundary tuple, component masks) for every vertex set of size
    1..k whose removal disconnects g, in lexicographic order."""
    out = []
    for size in range(1, k + 1):
        for S in itertools.combinations(range(g.n), size):
            rest = g.full_mask & ~mask_of(S)
            if not rest:
                continue
            comps = components(g, rest)
            if len(comps) > 1:
                out.append((S, tuple(comps)))
    out.sort()
    return tuple(out)


def enumerate_2_separations(g: Graph, exhaustive: bool = False) -> list:
    """Proper separations of order at most two.

    By default each component of G - S is split off against the rest; with
    exhaustive=True every nonempty proper union of components is used as
    the A side.
    """
    if not is_connected(g):
        raise DomainError("enumerate_2_separations needs a connected graph")
    out = []
    for S, comps in separating_sets(g, 2):
        smask = mask_of(S)
        tight = is_tight(g, S)
        if exhaustive:
            choices = []
            for r in range(1, len(comps)):
                for sub in itertools.combinations(comps, r):
                    choices.append(sum(sub))
        else:
            choices = list(comps)
        seps = []
        for a in choices:
            A = a | smask
            B = (g.full_mask & ~a)
            seps.append(Separation(frozenset(bits(A)), frozenset(bits(B)), True, tight))
        seps.sort(key=lambda s: sorted(s.A))
        out.extend(seps)
    return out


def submodular_cross(g: Graph, s1: Separation, s2: Separation) -> Separation:
    """Uncross two crossing 2-separations.

    With s1 on {u,v}, s2 on {x,y}, x in A1-B1, y in B1-A1, u in A2-B2 and
    v in B2-A2, the pair (A1 & A2, B1 | B2) is a separation on {u,x}.
    """
    b1, b2 = s1.boundary, s2.boundary
    if len(b1) != 2 or len(b2) != 2:
        raise DomainError("both separations must have order two")
    xs = [w for w in b2 if w in s1.a_strict]
    ys = [w for w in b2 if w in s1.b_strict]
    us = [w for w in b1 if w in s2.a_strict]
    vs = [w for w in b1 if w in s2.b_strict]
    if not (len(xs) == len(ys) == len(us) == len(vs) == 1):
        raise DomainError("separations are not in crossing position")
    A = s1.A & s2.A
    B = s1.B | s2.B
    if not is_separation(g, A, B):
        raise DomainError("uncrossed pair is not a separation")
    sep = Separation(frozenset(A), frozenset(B), bool(A - B) and bool(B - A), is_tight(g, A & B))
    assert sep.boundary == {us[0], xs[0]}
    return sep


# ------------------------------------------------- chains and triangles on C

@dataclass(frozen=True)
class TwoChain:
    separations: tuple

    @property
    def length(self) -> int:
        return len(self.separations)

    def boundaries(self) -> list:
        return [tuple(sorted(s.boundary)) for s in self.separations]

    def to_json(self) -> dict:
        return {"kind": "chain", "separations": [s.to_json() for s in self.separations]}


@dataclass(frozen=True)
class SeparationTriangle:
    separations: tuple
    x: int
    y: int
    v: int

    def to_json(self) -> dict:
        return {
            "kind": "triangle",
            "x": self.x,
            "y": self.y,
            "v": self.v,
            "separations": [s.to_json() for s in self.separations],
        }


def check_cycle(g: Graph, C, roots=()) -> tuple:
    C = tuple(C)
    if len(C) < 3 or len(set(C)) != len(C):
        raise DomainError("a cycle needs at least three distinct vertices")
    for i, v in enumerate(C):
        if not g.has_edge(v, C[(i + 1) % len(C)]):
            raise DomainError(f"{v} and {C[(i + 1) % len(C)]} are not adjacent")
    missing = set(roots) - set(C)
    if missing:
        raise DomainError(f"roots {sorted(missing)} are not on the cycle")
    return C


@dataclass(frozen=True)
class _OrientedCut:
    bd: int
    pair: tuple
    alpha: int  # cycle arc on the A side
    beta: int  # cycle arc on the B side
    comp_alpha: int
    comp_beta: int
    comps: tuple


def _arc(C, i, j) -> int:
    """Cycle vertices strictly between positions i and j going forward."""
    m = 0
    k = (i + 1) % len(C)
    while k != j:
        m |= 1 << C[k]
        k = (k + 1) % len(C)
    return m


def oriented_cuts(g: Graph, C) -> list:
    """2-separation boundaries on C that split the two arcs of C, both ways round."""
    pos = {v: i for i, v in enumerate(C)}
    out = []
    for S, comps in separating_sets(g, 2):
        if len(S) != 2 or S[0] not in pos or S[1] not in pos:
            continue
        i, j = pos[S[0]], pos[S[1]]
        a1, a2 = _arc(C, i, j), _arc(C, j, i)
        if not a1 or not a2:
            continue
        c1 = next(c for c in comps if c & a1)
        c2 = next(c for c in comps if c & a2)
        if c1 == c2:
            continue
        bd = mask_of(S)
        out.append(_OrientedCut(bd, S, a1, a2, c1, c2, comps))
        out.append(_OrientedCut(bd, S, a2, a1, c2, c1, comps))
    return out


def _chain_seps(g: Graph, steps) -> tuple:
    full = g.full_mask
    seps = []
    for cut, A in steps:
        B = full & ~(A & ~cut.bd)
        seps.append(Separation(frozenset(bits(A)), frozenset(bits(B)), True, is_tight(g, cut.pair)))
    return tuple(seps)


def _grow(cut: _OrientedCut, A_prev: int | None) -> int | None:
    """Smallest A side for cut that contains A_prev, or None if impossible."""
    A = cut.bd | cut.comp_alpha
    if A_prev is not None:
        inside = A_prev & ~cut.bd
        for c in cut.comps:
            if c & inside:
                A |= c
    if A & cut.comp_beta:
        return None
    return A


def terminal_chain_search(g: Graph, roots_mask: int, C, limit: int = 64, first_only: bool = False) -> list:
    """Terminal separating 2-chains with every boundary on C.

    Each separation in such a chain has a root on both strict sides, so the
    two arcs of C minus the boundary sit on opposite sides.  Sides are kept
    as small as possible (off-cycle components go to B unless nesting forces
    them into A); any chain with the same boundaries can be shrunk to this
    one, so nothing is lost.  Returns lists of (cut, A mask) steps.
    """
    cuts = oriented_cuts(g, C)
    X = roots_mask

    def starts(c):
        return (c.bd & X) and (c.alpha & X).bit_count() == 1

    def ends(c, first):
        # the two roots not on the end arcs must sit in the end boundaries;
        # a root strictly inside the chain would not be separated at all
        covered = first.alpha | first.bd | c.bd | c.beta
        return (c.bd & X) and (c.beta & X).bit_count() == 1 and not X & ~covered

    nxt = {}
    for i, c in enumerate(cuts):
        nxt[i] = [j for j, d in enumerate(cuts) if d.bd != c.bd and d.bd & c.bd]

    found = []
    dead = set()

    def dfs(i, A, path, used):
        key = (path[0][0].bd, path[0][0].alpha, i, A)
        if key in dead:
            return False
        hit = False
        if ends(cuts[i], path[0][0]):
            found.append(list(path))
            hit = True
            if first_only or len(found) >= limit:
                return True
        for j in nxt[i]:
            d = cuts[j]
            if d.bd in used:
                continue
            if d.bd & (A & ~cuts[i].bd):
                continue
            A2 = _grow(d, A)
            if A2 is None:
                continue
            path.append((d, A2))
            used.add(d.bd)
            if dfs(j, A2, path, used):
                hit = True
            used.discard(d.bd)
            path.pop()
            if (first_only and found) or len(found) >= limit:
                return True
        if not hit:
            dead.add(key)
        return hit

    for i, c in enumerate(cuts):
        if not starts(c):
            continue
        A = _grow(c, None)
        dfs(i, A, [(c, A)], {c.bd})
        if (first_only and found) or len(found) >= limit:
            break
    return found


def find_terminal_2_chains(rg: RootedGraph, C, limit: int = 64) -> list:
    """Maximal terminal separating 2-chains with boundaries on V(C).

    A chain and its reversal describe the same structure; only one of the
    two is reported.
    """
    g = rg.graph
    C = check_cycle(g, C, rg.roots)
    raw = terminal_chain_search(g, rg.root_mask, C, limit=limit)
    keyed = {}
    for steps in raw:
        key = tuple((c.pair, c.alpha) for c, _ in steps)
        rev = tuple((c.pair, c.beta) for c, _ in reversed(steps))
        canon = min(key, rev)
        if canon not in keyed:
            keyed[canon] = steps
    # drop chains that another chain extends at either end
    seqs = {k: [p for p, _ in k] for k in keyed}
    out = []
    for k, steps in sorted(keyed.items()):
        seq = seqs[k]
        extended = False
        for k2, seq2 in seqs.items():
            if len(seq2) > len(seq) and (seq2[: len(seq)] == seq or seq2[-len(seq):] == seq
                                          or seq2[: len(seq)] == seq[::-1] or seq2[-len(seq):] == seq[::-1]):
                extended = True
                break
        if not extended:
            out.append(TwoChain(_chain_seps(g, steps)))
    return out


def _strict_options(comps, X, want_roots, bd_roots=0):
    return [c for c in comps if (c & X).bit_count() + bd_roots == want_roots]


def terminal_triangle_search(g: Graph, roots_mask: int, C) -> list:
    """Terminal separating triangles with boundaries on C, as tuples
    (x, y, v, S1, S2, S3) of strict-side masks; S_i is the smallest strict
    side meeting the root conditions."""
    X = roots_mask
    on_c = set(C)
    cutmap = {S: comps for S, comps in separating_sets(g, 2) if len(S) == 2}
    out = []
    for (x, y), comps1 in cutmap.items():
        if x not in on_c or y not in on_c:
            continue
        bd1_roots = ((1 << x | 1 << y) & X).bit_count()
        s1_opts = _strict_options(comps1, X, 2, bd1_roots)
        if not s1_opts:
            continue
        for v in sorted(on_c - {x, y}):
            p2 = tuple(sorted((x, v)))
            p3 = tuple(sorted((v, y)))
            if p2 not in cutmap or p3 not in cutmap:
                continue
            s2_opts = _strict_options(cutmap[p2], X, 1)
            s3_opts = _strict_options(cutmap[p3], X, 1)
            for s1 in s1_opts:
                for s2 in s2_opts:
                    if s1 & s2:
                        continue
                    for s3 in s3_opts:
                        if s3 & (s1 | s2):
                            continue
                        out.append((x, y, v, s1, s2, s3))
    return out


def triangle_from_masks(g: Graph, t) -> SeparationTriangle:
    x, y, v, s1, s2, s3 = t
    full = g.full_mask
    seps = []
    for pair, s in (((x, y), s1), ((x, v), s2), ((v, y), s3)):
        bd = mask_of(pair)
        A = s | bd
        B = full & ~s
        seps.append(Separation(frozenset(bits(A)), frozenset(bits(B)), True, is_tight(g, pair)))
    return SeparationTriangle(tuple(seps), x, y, v)


def find_terminal_triangles(rg: RootedGraph, C) -> list:
    g = rg.graph
    C = check_cycle(g, C, rg.roots)
    return [triangle_from_masks(g, t) for t in terminal_triangle_search(g, rg.root_mask, C)]

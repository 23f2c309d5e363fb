"""Cycles through the roots and the five W4(X) obstructions on a cycle."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..connectivity import (
    DomainError,
    TwoChain,
    _chain_seps,
    check_cycle,
    terminal_chain_search,
    terminal_triangle_search,
    triangle_from_masks,
    vertex_connectivity,
)
from ..graph_core import RootedGraph, bits, component_of, encode_graph6, mask_of, rooted_subgraph
from ..minor_oracle import BudgetExhausted, find_rooted_minor, get_pattern


class CycleBudgetExceeded(RuntimeError):
    pass


def _require_2_connected(rg: RootedGraph) -> None:
    if rg.n < 3 or vertex_connectivity(rg.graph) < 2:
        raise DomainError("graph must be 2-connected")


def iter_cycles_through(rg: RootedGraph, limit: int | None = None):
    """Yield every cycle containing all roots once, starting at the first root.

    Direction is fixed by requiring the second vertex to be smaller than
    the last one.  A partial path is abandoned as soon as the missing roots
    and the start cannot all be reached from its end.
    """
    g = rg.graph
    s = rg.roots[0]
    X = rg.root_mask
    count = 0
    path = [s]
    on_path = 1 << s

    def viable(end):
        missing = X & ~on_path
        allowed = (g.full_mask & ~on_path) | (1 << end) | (1 << s)
        reach = component_of(g, end, allowed)
        return (reach & missing) == missing and reach >> s & 1

    stack = [iter(bits(g.adj[s]))]
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            on_path &= ~(1 << path.pop())
            continue
        if nxt == s:
            if len(path) >= 3 and (on_path & X) == X and path[1] < path[-1]:
                count += 1
                if limit is not None and count > limit:
                    raise CycleBudgetExceeded(f"more than {limit} cycles through the roots")
                yield tuple(path)
            continue
        if on_path >> nxt & 1:
            continue
        path.append(nxt)
        on_path |= 1 << nxt
        if not viable(nxt):
            path.pop()
            on_path &= ~(1 << nxt)
            continue
        stack.append(iter(bits(g.adj[nxt])))


def cycle_through_roots(rg: RootedGraph, all_cycles: bool = False, limit: int | None = None):
    """One cycle through every root (or None); with all_cycles, the full list."""
    _require_2_connected(rg)
    if all_cycles:
        return list(iter_cycles_through(rg, limit))
    for c in iter_cycles_through(rg):
        return c
    return None


# --------------------------------------------------------------- witnesses

@dataclass
class ObstructionWitness:
    kind: int
    cycle: tuple
    chain: TwoChain | None = None
    triangles: list = field(default_factory=list)
    aux: dict | None = None  # kinds 3-5: auxiliary graph, roots, cycle and inner chain

    def to_json(self) -> dict:
        out = {"kind": self.kind, "cycle": list(self.cycle)}
        if self.chain is not None:
            out["chain"] = self.chain.to_json()
        if self.triangles:
            out["triangles"] = [t.to_json() for t in self.triangles]
        if self.aux is not None:
            out["aux"] = self.aux
        return out


@dataclass
class W4Verdict:
    status: str  # "w4-free", "has-w4" or "unknown"
    witnesses: list = field(default_factory=list)  # (cycle, ObstructionWitness)
    cycle: tuple | None = None  # an unobstructed cycle for "has-w4"
    reason: str = ""

    @property
    def w4_free(self) -> bool | None:
        if self.status == "unknown":
            return None
        return self.status == "w4-free"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "cycle": list(self.cycle) if self.cycle else None,
            "witnesses": [w.to_json() for _, w in self.witnesses],
            "reason": self.reason,
        }


def _restrict_cycle(C, keep: int, index: dict):
    return tuple(index[v] for v in C if keep >> v & 1)


def _aux_chain(rg: RootedGraph, keep: int, new_roots, extra_edges, C):
    """Build G[keep] plus extra edges with new roots and look for a terminal
    chain on the restricted cycle.  Returns (aux dict, steps) or None."""
    sub, index = rooted_subgraph(rg, bits(keep), roots=new_roots, extra_edges=extra_edges)
    Cs = _restrict_cycle(C, keep, index)
    try:
        check_cycle(sub.graph, Cs, sub.roots)
    except DomainError:
        return None
    steps = terminal_chain_search(sub.graph, sub.root_mask, Cs, first_only=True)
    if not steps:
        return None
    chain = TwoChain(_chain_seps(sub.graph, steps[0]))
    inverse = {new: old for old, new in index.items()}
    aux = {
        "graph6": encode_graph6(sub.graph),
        "vertices": [inverse[i] for i in range(sub.n)],
        "roots": [inverse[r] for r in sub.roots],
        "cycle": [inverse[v] for v in Cs],
        "chain": [sorted(inverse[v] for v in s.boundary) for s in chain.separations],
    }
    return aux, chain


def _bd(t):
    x, y, v = t[:3]
    return [mask_of((x, y)), mask_of((x, v)), mask_of((v, y))]


def _all_bd(t) -> int:
    x, y, v = t[:3]
    return mask_of((x, y, v))


def find_obstruction(rg: RootedGraph, C, kind4_reading: str = "first",
                     kinds=(1, 2, 3, 4, 5)) -> ObstructionWitness | None:
    """First obstruction (kinds 1 to 5, in that order) on cycle C, or None.

    `kinds` restricts the search to the listed obstruction kinds.

    kind4_reading selects which A side of the first triangle must hold the
    second triangle's boundaries in kind 4: "first" (A_1, as in kind 5),
    "third" (A_3, as printed) or "either".
    """
    g = rg.graph
    X = rg.root_mask
    C = check_cycle(g, C, rg.roots)
    on_c = mask_of(C)

    steps = terminal_chain_search(g, X, C, first_only=True) if 1 in kinds else None
    if steps:
        return ObstructionWitness(1, C, chain=TwoChain(_chain_seps(g, steps[0])))

    tris = terminal_triangle_search(g, X, C) if set(kinds) - {1} else []
    for t in tris if 2 in kinds else ():
        if _bd(t)[0] & X:
            return ObstructionWitness(2, C, triangles=[triangle_from_masks(g, t)])

    for t in tris if 3 in kinds else ():
        x, y, v, s1, s2, s3 = t
        if _bd(t)[0] & X:
            continue
        A1 = s1 | mask_of((x, y))
        inside = [r for r in rg.roots if A1 >> r & 1]
        new_roots = tuple(inside) + (x, y)
        found = _aux_chain(rg, A1, new_roots, [(x, y)], C)
        if found:
            aux, _ = found
            return ObstructionWitness(3, C, triangles=[triangle_from_masks(g, t)], aux=aux)

    def a_side(t, i):
        return t[3 + i] | _bd(t)[i]

    for t1 in tris if 4 in kinds else ():
        for t2 in tris:
            if t1 == t2:
                continue
            A1_1, A2_1 = a_side(t1, 0), a_side(t2, 0)
            if _all_bd(t1) & ~A2_1:
                continue
            held = []
            if kind4_reading in ("first", "either"):
                held.append(A1_1)
            if kind4_reading in ("third", "either"):
                held.append(a_side(t1, 2))
            if not any(not (_all_bd(t2) & ~h) for h in held):
                continue
            b1, b2 = _bd(t1)[0], _bd(t2)[0]
            if b1 & b2:
                continue
            keep = A1_1 & A2_1
            if (b1 | b2) & ~keep:
                continue
            new_roots = tuple(bits(b1)) + tuple(bits(b2))
            found = _aux_chain(rg, keep, new_roots, [tuple(bits(b1)), tuple(bits(b2))], C)
            if found:
                aux, _ = found
                return ObstructionWitness(
                    4, C, triangles=[triangle_from_masks(g, t1), triangle_from_masks(g, t2)], aux=aux
                )

    for t1 in tris if 5 in kinds else ():
        for t2 in tris:
            if t1 == t2:
                continue
            if _all_bd(t1) & ~a_side(t2, 0) or _all_bd(t2) & ~a_side(t1, 0):
                continue
            if not (_bd(t1)[0] & _bd(t2)[0]):
                continue
            if (_all_bd(t1) | _all_bd(t2)) & ~on_c:
                continue
            return ObstructionWitness(5, C, triangles=[triangle_from_masks(g, t1), triangle_from_masks(g, t2)])
    return None


def decide_w4_by_obstructions(rg: RootedGraph, max_cycles: int = 20000, check_k4: bool = True,
                              budget: int | None = None, kind4_reading: str = "first") -> W4Verdict:
    """W4(X) decision for 2-connected spanning subgraphs of webs.

    Every cycle through the roots is examined; the graph is W4(X)-free when
    each of them carries an obstruction.
    """
    if len(rg.roots) != 4:
        raise DomainError("four roots are needed")
    _require_2_connected(rg)
    if check_k4:
        try:
            if find_rooted_minor(rg, get_pattern("k4x"), budget) is not None:
                raise DomainError("graph has a K4(X) minor; the obstruction theory does not apply")
        except BudgetExhausted:
            return W4Verdict("unknown", reason="K4(X) precondition undecided within budget")
    witnesses = []
    try:
        for C in iter_cycles_through(rg, max_cycles):
            w = find_obstruction(rg, C, kind4_reading)
            if w is None:
                return W4Verdict("has-w4", witnesses, cycle=C)
            witnesses.append((C, w))
    except CycleBudgetExceeded as exc:
        return W4Verdict("unknown", reason=str(exc))
    if not witnesses:
        return W4Verdict("unknown", reason="no cycle through the roots")
    return W4Verdict("w4-free", witnesses)

"""K2,2(X) through pairs of disjoint paths, and K2,4(X) on certified classes."""

from __future__ import annotations

from ..connectivity import DomainError
from ..graph_core import Graph, RootedGraph, component_of
from ..minor_oracle import decide, get_pattern
from .obstructions import decide_w4_by_obstructions
from .webs import Certificate, web_part


def _disjoint_pair(g: Graph, s: int, t: int, p: int, q: int) -> bool:
    """Is there an s-t path and a p-q path with no common vertex?

    Every s-t path avoiding p and q is tried once per vertex set (the
    p-q question only depends on which vertices the first path uses).
    """
    full = g.full_mask
    forbidden = 1 << p | 1 << q
    seen = set()

    def rest_connects(used: int) -> bool:
        return bool(component_of(g, p, full & ~used) >> q & 1)

    def dfs(v: int, used: int) -> bool:
        if v == t:
            if used in seen:
                return False
            seen.add(used)
            return rest_connects(used)
        # the p-q path must still exist; extending the path only removes vertices
        if not rest_connects(used):
            return False
        nb = g.adj[v] & ~used & ~forbidden
        while nb:
            low = nb & -nb
            w = low.bit_length() - 1
            if dfs(w, used | low):
                return True
            nb ^= low
        return False

    return dfs(s, 1 << s)


def k22_via_disjoint_paths(g: Graph, a: int, b: int, c: int, d: int) -> bool:
    """K2,2 minor with a, b on one side and c, d on the other.

    Holds exactly when there are disjoint (a,c)- and (b,d)-paths and also
    disjoint (a,d)- and (b,c)-paths.
    """
    if len({a, b, c, d}) != 4:
        raise DomainError("the four vertices must be distinct")
    for v in (a, b, c, d):
        if not 0 <= v < g.n:
            raise DomainError(f"vertex {v} out of range")
    return _disjoint_pair(g, a, c, b, d) and _disjoint_pair(g, a, d, b, c)


def decide_k24(rg: RootedGraph, cert: Certificate | None = None, budget: int | None = None,
               info: dict | None = None) -> bool | None:
    """K2,4(X) decision using the class certificate where it settles things.

    Class A never has the minor and classes B and C always do.  For webs
    (class D, and the web side of classes E and F) a W4(X)-free verdict
    rules the minor out; when the web has W4(X) the question is left to
    the oracle on the web, since W4(X) alone does not force K2,4(X).

    Class F is not reduced to its web.  There c and d both see g and h,
    so the outer edges eh and fg already carry both pairings of the
    K2,2 on the far side of {e, f}, and K2,4(X) appears with
    s1 = {e, h}, s2 = {f, g} even when the web has no such minor.  The
    oracle decides class F on the whole graph.
    Returns None when the oracle runs out of budget.
    """
    info = info if info is not None else {}
    k24 = get_pattern("k24x")
    if cert is None:
        info["method"] = "oracle"
        return decide(rg, k24, budget)
    if cert.cls == "A":
        info["method"] = "structural"
        return False
    if cert.cls in ("B", "C"):
        info["method"] = "structural"
        return True
    if cert.cls == "F":
        info["method"] = "oracle"
        return decide(rg, k24, budget)
    web, _ = web_part(rg, cert)
    try:
        verdict = decide_w4_by_obstructions(web, check_k4=False, budget=budget)
    except DomainError:
        verdict = None
    if verdict is not None and verdict.status == "w4-free":
        info["method"] = "structural"
        info["w4"] = verdict
        return False
    info["method"] = "structural+oracle"
    return decide(web, k24, budget)

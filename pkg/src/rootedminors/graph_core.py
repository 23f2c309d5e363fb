"""Simple graphs, rooted graphs, minor models and their text formats."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable


class GraphError(ValueError):
    """Raised for malformed graphs or out-of-range vertices."""


class Graph6Error(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1.

    Adjacency is kept as integer bitmasks; most algorithms in the package
    work directly on them.
    """

    n: int
    edges: frozenset
    labels: tuple | None = None
    adj: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("negative vertex count")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {e} out of range for n={self.n}")
            norm.add(_norm_edge(u, v))
        object.__setattr__(self, "edges", frozenset(norm))
        adj = [0] * self.n
        for u, v in norm:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "adj", tuple(adj))
        if self.labels is not None and len(self.labels) != self.n:
            raise GraphError("label count does not match vertex count")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, labels=None) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges), tuple(labels) if labels else None)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return bits(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def add_edges(self, extra: Iterable) -> "Graph":
        new = set(self.edges)
        for u, v in extra:
            if u != v:
                new.add(_norm_edge(u, v))
        return Graph(self.n, frozenset(new), self.labels)

    def remove_edges(self, gone: Iterable) -> "Graph":
        drop = {_norm_edge(u, v) for u, v in gone}
        return Graph(self.n, self.edges - drop, self.labels)

    def to_networkx(self):
        import networkx as nx

        h = nx.Graph()
        h.add_nodes_from(range(self.n))
        h.add_edges_from(self.edges)
        return h

    @classmethod
    def from_networkx(cls, h) -> "Graph":
        order = sorted(h.nodes())
        index = {v: i for i, v in enumerate(order)}
        return cls(len(order), frozenset(_norm_edge(index[u], index[v]) for u, v in h.edges()))


@dataclass(frozen=True)
class RootedGraph:
    graph: Graph
    roots: tuple

    def __post_init__(self):
        roots = tuple(int(r) for r in self.roots)
        if len(set(roots)) != len(roots):
            raise GraphError("roots must be distinct")
        for r in roots:
            if not 0 <= r < self.graph.n:
                raise GraphError(f"root {r} out of range")
        object.__setattr__(self, "roots", roots)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def root_mask(self) -> int:
        m = 0
        for r in self.roots:
            m |= 1 << r
        return m


def bits(mask: int) -> list[int]:
    """Indices of the set bits of mask, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


# ---------------------------------------------------------------- minor ops

def contract_edge(g: Graph, e) -> Graph:
    """Merge the endpoints of e into the lower index and renumber the rest."""
    u, v = _norm_edge(*e)
    if (u, v) not in g.edges:
        raise GraphError(f"{e} is not an edge")
    # v disappears; vertices above v shift down by one
    def new(x):
        if x == v:
            x = u
        return x - 1 if x > v else x

    edges = set()
    for a, b in g.edges:
        a2, b2 = new(a), new(b)
        if a2 != b2:
            edges.add(_norm_edge(a2, b2))
    labels = None
    if g.labels is not None:
        labels = g.labels[:v] + g.labels[v + 1:]
    out = Graph(g.n - 1, frozenset(edges), labels)
    assert out.n <= g.n
    return out


def induced_subgraph(g: Graph, S: Iterable[int]) -> tuple[Graph, dict]:
    """Return G[S] and the old-to-new index map (order preserved)."""
    order = sorted(set(S))
    for v in order:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range")
    index = {v: i for i, v in enumerate(order)}
    edges = frozenset(
        (index[a], index[b]) for a, b in g.edges if a in index and b in index
    )
    labels = tuple(g.labels[v] for v in order) if g.labels is not None else None
    return Graph(len(order), edges, labels), index


def rooted_subgraph(rg: RootedGraph, S: Iterable[int], roots=None, extra_edges=()) -> tuple[RootedGraph, dict]:
    """Induced subgraph plus optional extra edges, carrying roots through the index map.

    `roots` are given in the old numbering and default to the current roots.
    """
    sub, index = induced_subgraph(rg.graph, S)
    if extra_edges:
        sub = sub.add_edges((index[a], index[b]) for a, b in extra_edges)
    roots = rg.roots if roots is None else roots
    return RootedGraph(sub, tuple(index[r] for r in roots)), index


def is_connected_mask(g: Graph, mask: int) -> bool:
    """Whether the vertices in mask induce a connected subgraph (empty counts as not)."""
    if not mask:
        return False
    seen = mask & -mask
    frontier = seen
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= g.adj[v]
        nxt &= mask & ~seen
        seen |= nxt
        frontier = nxt
    return seen == mask


def component_of(g: Graph, v: int, allowed: int) -> int:
    """Vertices reachable from v inside the allowed mask (v must be allowed)."""
    seen = 1 << v
    frontier = seen
    while frontier:
        nxt = 0
        for x in bits(frontier):
            nxt |= g.adj[x]
        nxt &= allowed & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def components(g: Graph, allowed: int | None = None) -> list[int]:
    """Connected components of G[allowed] as bitmasks, ordered by least vertex."""
    rest = g.full_mask if allowed is None else allowed
    out = []
    while rest:
        v = (rest & -rest).bit_length() - 1
        c = component_of(g, v, rest)
        out.append(c)
        rest &= ~c
    return out


def is_connected(g: Graph) -> bool:
    return g.n == 0 or is_connected_mask(g, g.full_mask)


# ------------------------------------------------------------------ graph6

def _g6_size_prefix(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def encode_graph6(g: Graph) -> str:
    bitlist = []
    for j in range(1, g.n):
        for i in range(j):
            bitlist.append(1 if g.has_edge(i, j) else 0)
    while len(bitlist) % 6:
        bitlist.append(0)
    body = []
    for k in range(0, len(bitlist), 6):
        val = 0
        for b in bitlist[k:k + 6]:
            val = (val << 1) | b
        body.append(chr(val + 63))
    return _g6_size_prefix(g.n) + "".join(body)


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 record; the optional >>graph6<< header is skipped."""
    s = text.strip("\n").rstrip("\r")
    start = 0
    if s.startswith(">>graph6<<"):
        start = len(">>graph6<<")
    data = s[start:]
    for i, ch in enumerate(data):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"byte {ch!r} outside the graph6 range", start + i)
    if not data:
        raise Graph6Error("empty record", start)
    pos = 0
    if data[0] != "~":
        n = ord(data[0]) - 63
        pos = 1
    elif len(data) > 1 and data[1] == "~":
        if len(data) < 8:
            raise Graph6Error("truncated 8-byte length prefix", start + len(data))
        n = 0
        for ch in data[2:8]:
            n = (n << 6) | (ord(ch) - 63)
        pos = 8
    else:
        if len(data) < 4:
            raise Graph6Error("truncated 4-byte length prefix", start + len(data))
        n = 0
        for ch in data[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        pos = 4
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) < need:
        raise Graph6Error(f"record too short for {n} vertices", start + len(data))
    if len(body) > need:
        raise Graph6Error("trailing bytes after record", start + pos + need)
    edges = set()
    k = 0
    for j in range(1, n):
        for i in range(j):
            ch = ord(body[k // 6]) - 63
            if ch >> (5 - k % 6) & 1:
                edges.add((i, j))
            k += 1
    # padding bits must be zero in a well-formed record
    if need:
        pad = need * 6 - nbits
        if (ord(body[-1]) - 63) & ((1 << pad) - 1):
            raise Graph6Error("nonzero padding bits", start + pos + need - 1)
    return Graph(n, frozenset(edges))


# --------------------------------------------------------------- edge lists

def parse_edge_list(text: str) -> Graph:
    """Plain format: first non-comment line is n, then one `u v` pair per line."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphError("empty edge list")
    try:
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            u, v = ln.split()
            edges.append((int(u), int(v)))
    except ValueError as exc:
        raise GraphError(f"malformed edge list: {exc}") from None
    return Graph.from_edges(n, edges)


def write_edge_list(g: Graph) -> str:
    return "\n".join([str(g.n)] + [f"{u} {v}" for u, v in g.sorted_edges()]) + "\n"


def write_dot(rg: RootedGraph | Graph) -> str:
    if isinstance(rg, Graph):
        rg = RootedGraph(rg, ())
    g = rg.graph
    lines = ["graph G {"]
    for v in range(g.n):
        attrs = []
        if g.labels is not None:
            attrs.append(f'label="{g.labels[v]}"')
        if v in rg.roots:
            attrs.append(f'root={rg.roots.index(v)}')
            attrs.append("shape=doublecircle")
        lines.append(f"  {v}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for u, v in g.sorted_edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------- minor models

@dataclass(frozen=True)
class MinorModel:
    """Branch sets keyed by pattern-vertex label, plus the root assignment."""

    pattern: str
    branch_sets: dict
    root_map: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "pattern": self.pattern,
                "branch_sets": {k: sorted(v) for k, v in self.branch_sets.items()},
                "root_map": {str(r): lab for r, lab in self.root_map.items()},
            },
            sort_keys=False,
        )

    @classmethod
    def from_json(cls, text: str) -> "MinorModel":
        data = json.loads(text)
        try:
            return cls(
                data["pattern"],
                {k: frozenset(int(x) for x in v) for k, v in data["branch_sets"].items()},
                {int(r): lab for r, lab in data["root_map"].items()},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed model JSON: {exc}") from None

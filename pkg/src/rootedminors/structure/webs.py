"""Certified generators for the six K4(X)-free families.

Every generated graph is a 2-connected spanning subgraph of a graph H+
built from a skeleton H by attaching a clique to each triangle of H and
joining the clique to the whole triangle.  Roots are always vertices
0, 1, 2, 3 (a, b, c, d).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from ..graph_core import Graph, RootedGraph, mask_of
from ..connectivity import vertex_connectivity


class ConstructionError(ValueError):
    pass


CLASS_NAMES = ("A", "B", "C", "D", "E", "F")

_FIXED_SKELETONS = {
    "A": ("abcde", ["ae", "ad", "be", "bd", "ce", "cd", "de"]),
    "B": ("abcdef", ["ae", "af", "be", "bf", "ce", "cf", "de", "df", "ef"]),
    "C": ("abcdefg", ["ae", "ag", "be", "bg", "cf", "cg", "df", "dg", "ef", "eg", "fg"]),
}


@dataclass
class WebSpec:
    """Recipe for a near-triangulated quadrangle.

    The outer 4-cycle is q0 q1 q2 q3.  The recipe starts from one chord
    (q0q2 when chord == "ac", q1q3 when chord == "bd") and then splits
    interior edges: the edge xy with faces xyp and xyq (p, q nonadjacent)
    is replaced by a new vertex joined to x, y, p and q.  Splits are given
    as vertex pairs in the numbering where q0..q3 are 0..3 and new
    vertices are numbered 4, 5, ... in creation order.
    """

    chord: str = "ac"
    splits: list = field(default_factory=list)

    def build(self):
        """Return (n, edges, faces) with faces as sorted vertex triples."""
        if self.chord not in ("ac", "bd"):
            raise ConstructionError(f"unknown starting chord {self.chord!r}")
        edges = {(0, 1), (1, 2), (2, 3), (0, 3)}
        if self.chord == "ac":
            edges.add((0, 2))
            faces = {(0, 1, 2), (0, 2, 3)}
        else:
            edges.add((1, 3))
            faces = {(0, 1, 3), (1, 2, 3)}
        n = 4
        outer = {(0, 1), (1, 2), (2, 3), (0, 3)}
        for x, y in self.splits:
            e = (min(x, y), max(x, y))
            if e not in edges or e in outer:
                raise ConstructionError(f"{e} is not an interior edge")
            around = [f for f in faces if e[0] in f and e[1] in f]
            if len(around) != 2:
                raise ConstructionError(f"interior edge {e} should lie on two faces")
            p = next(v for v in around[0] if v not in e)
            q = next(v for v in around[1] if v not in e)
            if (min(p, q), max(p, q)) in edges:
                raise ConstructionError(f"splitting {e} would create a separating triangle")
            w = n
            n += 1
            edges.discard(e)
            for f in around:
                faces.discard(f)
            for z in (e[0], e[1], p, q):
                edges.add((z, w))
            for a, b in ((e[0], p), (p, e[1]), (e[1], q), (q, e[0])):
                faces.add(tuple(sorted((a, b, w))))
        check_web(n, edges, faces)
        return n, sorted(edges), sorted(faces)

    @classmethod
    def random(cls, rng: random.Random, splits: int) -> "WebSpec":
        spec = cls(rng.choice(["ac", "bd"]), [])
        for _ in range(splits):
            n, edges, faces = spec.build()
            options = [e for e in edges if _splittable(e, edges, faces)]
            if not options:
                break
            spec.splits.append(rng.choice(options))
        return spec

    def to_json(self) -> dict:
        return {"chord": self.chord, "splits": [list(s) for s in self.splits]}


def _splittable(e, edges, faces) -> bool:
    if e in {(0, 1), (1, 2), (2, 3), (0, 3)}:
        return False
    around = [f for f in faces if e[0] in f and e[1] in f]
    if len(around) != 2:
        return False
    p = next(v for v in around[0] if v not in e)
    q = next(v for v in around[1] if v not in e)
    return (min(p, q), max(p, q)) not in set(edges)


def triangles(n: int, edges) -> list:
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    out = []
    for u, v in sorted(edges):
        for w in sorted(adj[u] & adj[v]):
            if w > v:
                out.append((u, v, w))
    return out


def check_web(n, edges, faces) -> None:
    """Euler count for a triangulated disc with a 4-gon outside, plus the
    requirement that every triangle is a face."""
    faces = set(faces)
    # triangulated disc with a 4-gon outside: 2n - 6 inner faces, 3n - 7 edges
    if len(faces) != 2 * n - 6:
        raise ConstructionError("internal faces are not all triangles")
    if len(edges) != 3 * n - 7:
        raise ConstructionError("edge count does not match a triangulated quadrangle")
    for t in triangles(n, edges):
        if t not in faces:
            raise ConstructionError(f"triangle {t} is not a face")


# --------------------------------------------------------------- skeletons

@dataclass
class Certificate:
    """How an instance was built; enough to re-derive every structural claim."""

    cls: str
    skeleton_n: int
    skeleton_edges: list
    names: list
    triangle_cliques: dict  # triangle (sorted skeleton triple) -> clique vertices
    deleted: list
    web: dict | None = None  # web vertices, outer order, faces
    cut_pairs: list = field(default_factory=list)  # E/F: pairs cutting off a, b (c, d)

    def to_json(self) -> dict:
        return {
            "class": self.cls,
            "skeleton_n": self.skeleton_n,
            "skeleton_edges": [list(e) for e in self.skeleton_edges],
            "names": self.names,
            "triangle_cliques": [[list(t), list(vs)] for t, vs in sorted(self.triangle_cliques.items())],
            "deleted": [list(e) for e in self.deleted],
            "web": self.web,
            "cut_pairs": [list(p) for p in self.cut_pairs],
        }

    @classmethod
    def from_json(cls, d: dict) -> "Certificate":
        return cls(
            d["class"],
            d["skeleton_n"],
            [tuple(e) for e in d["skeleton_edges"]],
            d["names"],
            {tuple(t): list(vs) for t, vs in d["triangle_cliques"]},
            [tuple(e) for e in d["deleted"]],
            d.get("web"),
            [tuple(p) for p in d.get("cut_pairs", [])],
        )


def skeleton(name: str, web: WebSpec | None = None):
    """Skeleton H of a class: (n, edges, names, web info, cut pairs)."""
    name = name.upper()
    if name in _FIXED_SKELETONS:
        letters, es = _FIXED_SKELETONS[name]
        idx = {ch: i for i, ch in enumerate(letters)}
        edges = sorted(tuple(sorted((idx[e[0]], idx[e[1]]))) for e in es)
        return len(letters), edges, list(letters), None, []
    web = web or WebSpec()
    wn, wedges, wfaces = web.build()
    if name == "D":
        outer = [0, 1, 2, 3]
        base, names = 4, list("abcd")
        extra, cut_pairs = [], []
    elif name == "E":
        outer = [2, 3, 4, 5]  # c, d, e, f in order
        base, names = 6, list("abcdef")
        extra = [(0, 4), (0, 5), (1, 4), (1, 5)]
        cut_pairs = [(4, 5)]
    elif name == "F":
        outer = [4, 5, 6, 7]  # e, f, g, h in order
        base, names = 8, list("abcdefgh")
        extra = [(0, 4), (0, 5), (1, 4), (1, 5), (2, 6), (2, 7), (3, 6), (3, 7)]
        cut_pairs = [(4, 5), (6, 7)]
    else:
        raise ConstructionError(f"unknown class {name!r}")

    def place(v):
        return outer[v] if v < 4 else base + v - 4

    n = base + wn - 4
    names = names + [f"w{i}" for i in range(wn - 4)]
    edges = sorted({tuple(sorted((place(u), place(v)))) for u, v in wedges} | set(extra))
    info = {
        "vertices": sorted(place(v) for v in range(wn)),
        "outer": outer,
        "faces": [sorted(place(v) for v in f) for f in wfaces],
        "recipe": web.to_json(),
    }
    return n, edges, names, info, cut_pairs


def build_class_graph(name: str, web: WebSpec | None = None, clique_sizes: dict | None = None):
    """H+ for a class: skeleton plus a clique on each listed triangle."""
    n, edges, names, info, cut_pairs = skeleton(name, web)
    tris = triangles(n, edges)
    clique_sizes = clique_sizes or {}
    for t in clique_sizes:
        if tuple(sorted(t)) not in tris:
            raise ConstructionError(f"{t} is not a triangle of the skeleton")
    all_edges = set(edges)
    cliques = {}
    nxt = n
    for t in tris:
        k = clique_sizes.get(t, 0)
        if k <= 0:
            continue
        vs = list(range(nxt, nxt + k))
        nxt += k
        cliques[t] = vs
        for a, b in itertools.combinations(vs, 2):
            all_edges.add((a, b))
        for a in vs:
            for z in t:
                all_edges.add((z, a))
    full_names = names + [f"k{i}" for i in range(nxt - n)]
    g = Graph(nxt, frozenset(all_edges), tuple(full_names))
    cert = Certificate(name.upper(), n, edges, names, cliques, [], info, cut_pairs)
    return g, cert


def generate_class(name: str, web: WebSpec | None = None, clique_sizes: dict | None = None, keep=None):
    """A 2-connected spanning subgraph of a class graph, roots (a, b, c, d).

    `keep` is either None (keep everything) or a sequence of booleans, one
    per edge of H+ in sorted order.  Masks that break 2-connectivity are
    rejected with ConstructionError.
    """
    full, cert = build_class_graph(name, web, clique_sizes)
    edges = full.sorted_edges()
    if keep is not None:
        keep = list(keep)
        if len(keep) != len(edges):
            raise ConstructionError(f"keep mask needs {len(edges)} entries")
        deleted = [e for e, k in zip(edges, keep) if not k]
    else:
        deleted = []
    g = full.remove_edges(deleted)
    if g.n < 3 or vertex_connectivity(g) < 2:
        raise ConstructionError("edge mask breaks 2-connectivity")
    cert.deleted = deleted
    return RootedGraph(g, (0, 1, 2, 3)), cert


def random_clique_sizes(rng: random.Random, tris, cap: int, budget: int, p: float = 0.3) -> dict:
    sizes = {}
    for t in tris:
        if budget <= 0 or cap <= 0:
            break
        if rng.random() < p:
            k = rng.randint(1, min(cap, budget))
            sizes[t] = k
            budget -= k
    return sizes


def random_instance(name: str, rng: random.Random, max_n: int = 10, cap: int = 3,
                    delete_p: float = 0.25, tries: int = 200):
    """Seeded random member of a class with at most max_n vertices."""
    name = name.upper()
    for _ in range(tries):
        web = None
        if name in ("D", "E", "F"):
            base = {"D": 4, "E": 6, "F": 8}[name]
            room = max_n - base
            if room < 0:
                raise ConstructionError(f"class {name} needs more than {max_n} vertices")
            web = WebSpec.random(rng, rng.randint(0, room))
        n, edges, *_ = skeleton(name, web)
        if n > max_n:
            continue
        tris = triangles(n, edges)
        sizes = random_clique_sizes(rng, tris, cap, max_n - n)
        full, _ = build_class_graph(name, web, sizes)
        keep = [rng.random() >= delete_p for _ in full.edges]
        try:
            return generate_class(name, web, sizes, keep)
        except ConstructionError:
            continue
    raise ConstructionError(f"no 2-connected class {name} instance found in {tries} tries")


def web_part(rg: RootedGraph, cert: Certificate) -> tuple:
    """For classes E and F, the web side G_B with the cut pairs as new roots.

    Returns (rooted graph, index map).  For class D the instance itself is
    returned.
    """
    from ..graph_core import rooted_subgraph

    if cert.cls == "D":
        return rg, {v: v for v in range(rg.n)}
    if cert.cls not in ("E", "F"):
        raise ConstructionError(f"class {cert.cls} has no web part")
    web_vs = set(cert.web["vertices"])
    for t, vs in cert.triangle_cliques.items():
        if set(t) <= web_vs:
            web_vs |= set(vs)
    if cert.cls == "E":
        roots = (4, 5, 2, 3)  # e, f replace a, b
    else:
        roots = (4, 5, 6, 7)
    return rooted_subgraph(rg, web_vs, roots=roots, extra_edges=cert.cut_pairs)


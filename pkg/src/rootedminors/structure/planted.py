"""Webs with a planted chain of 2-separations, and an embedding-based web test.

A planted instance is a strip of blocks glued along spine edges.  Spine
vertices s0, s1, ..., s(m+2) carry the boundaries {s(j), s(j+1)} of the
chain; block j has corners s(j), s(j+1), s(j+2) and is either the bare
triangle on them or a small web on the quadrangle s(j+1), s(j), t, s(j+2).
The strip is then closed off into a web whose outer face is the 4-cycle
on the roots, and the instance itself keeps only the strip edges.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..connectivity import vertex_connectivity
from ..graph_core import Graph, RootedGraph
from .webs import Certificate, ConstructionError, WebSpec, triangles


def web_faces(n: int, edges, outer) -> list | None:
    """Inner faces if (n, edges) is a web with outer 4-cycle `outer`, else None.

    An apex joined to the four outer vertices turns a web into a
    triangulation of the sphere, which is 3-connected and so has one
    embedding; the check reads every face off that embedding.
    """
    import networkx as nx

    es = {tuple(sorted(e)) for e in edges}
    q = list(outer)
    for i in range(4):
        if tuple(sorted((q[i], q[(i + 1) % 4]))) not in es:
            return None
    h = nx.Graph()
    h.add_nodes_from(range(n + 1))
    h.add_edges_from(es)
    h.add_edges_from((n, v) for v in q)
    planar, emb = nx.check_planarity(h)
    if not planar:
        return None
    faces = set()
    seen = set()
    for u, v in emb.edges():
        if (u, v) in seen:
            continue
        face = emb.traverse_face(u, v, mark_half_edges=seen)
        if len(face) != 3:
            return None
        faces.add(tuple(sorted(face)))
    inner = {f for f in faces if n not in f}
    apex_faces = {f for f in faces if n in f}
    want = {tuple(sorted((n, q[i], q[(i + 1) % 4]))) for i in range(4)}
    if apex_faces != want:
        return None
    for t in triangles(n, es):
        if t not in inner:
            return None
    return sorted(inner)


def is_web(n: int, edges, outer=(0, 1, 2, 3)) -> bool:
    return web_faces(n, edges, outer) is not None


# ------------------------------------------------------------ planted chains

@dataclass
class PlantedChain:
    """A planted instance with its chain and block layout (original labels)."""

    rooted: RootedGraph
    cert: Certificate
    length: int
    spine: list
    blocks: list = field(default_factory=list)  # vertex lists per block
    boundaries: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "length": self.length,
            "spine": self.spine,
            "blocks": self.blocks,
            "boundaries": self.boundaries,
            "certificate": self.cert.to_json(),
        }


def _close_arc(adj: dict, arc: list, extra: set) -> bool:
    """Triangulate the region between a boundary arc and the chord joining
    its ends, adding ear chords that create no triangle other than the ear.
    The closing chord itself is added as well."""

    def ok(x, y, tip):
        if y in adj[x]:
            return False
        common = adj[x] & adj[y]
        return common == {tip}

    def add(x, y):
        adj[x].add(y)
        adj[y].add(x)
        extra.add(tuple(sorted((x, y))))

    arc = list(arc)
    while len(arc) > 2:
        for i in range(1, len(arc) - 1):
            x, tip, y = arc[i - 1], arc[i], arc[i + 1]
            if ok(x, y, tip):
                add(x, y)
                del arc[i]
                break
        else:
            return False
    return True


def _block_web(rng: random.Random, splits: int):
    spec = WebSpec.random(rng, splits)
    n, edges, _ = spec.build()
    return n, edges


def planted_chain(length: int, rng: random.Random, max_n: int = 12, quad_p: float = 0.6,
                  max_splits: int = 3, delete_p: float = 0.0, tries: int = 200) -> PlantedChain:
    """Random web subgraph whose roots are split by a chain of `length`
    2-separations with consecutive boundaries sharing a vertex.

    Roots (0, 1, 2, 3) are s0, s1 and the two last spine vertices, in
    outer-cycle order.
    """
    if length < 1:
        raise ConstructionError("chain length must be positive")
    for _ in range(tries):
        spine_n = length + 3
        if spine_n > max_n:
            raise ConstructionError("chain does not fit in max_n vertices")
        edges = set()
        nxt = spine_n
        blocks = []
        free = []  # free side of each block, from s(j) to s(j+2)
        room = max_n - spine_n
        for j in range(length + 1):
            s0, s1, s2 = j, j + 1, j + 2
            if room >= 1 and rng.random() < quad_p:
                k = rng.randint(0, min(max_splits, room - 1))
                bn, bedges = _block_web(rng, k)
                # quadrangle corners q0..q3 = s(j+1), s(j), t, s(j+2)
                place = {0: s1, 1: s0, 3: s2}
                for v in range(2, bn):
                    if v != 3:
                        place[v] = nxt
                        nxt += 1
                room -= bn - 3
                for u, v in bedges:
                    edges.add(tuple(sorted((place[u], place[v]))))
                blocks.append(sorted(place.values()))
                free.append([s0, place[2], s2])
            else:
                for u, v in ((s0, s1), (s1, s2), (s0, s2)):
                    edges.add((u, v) if u < v else (v, u))
                blocks.append([s0, s1, s2])
                free.append([s0, s2])
        n = nxt
        strip = set(edges)
        last = length + 2
        # boundary arcs: odd side from s1, even side from s0
        odd_arc, even_arc = [1], [0]
        for j in range(length + 1):
            arc = odd_arc if j % 2 else even_arc
            arc.extend(free[j][1:])
        # the two arcs end at s(last-1) and s(last) in some order
        adj = {v: set() for v in range(n)}
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        extra = set()
        if not (_close_arc(adj, odd_arc, extra) and _close_arc(adj, even_arc, extra)):
            continue
        web_edges = strip | extra | {(0, 1), (last - 1, last)}
        outer = [0, 1, odd_arc[-1], even_arc[-1]]
        faces = web_faces(n, web_edges, outer)
        if faces is None:
            continue
        g_edges = sorted(strip)
        if delete_p:
            g_edges = [e for e in g_edges if rng.random() >= delete_p or e in ((0, 1), (last - 1, last))]
        g = Graph.from_edges(n, g_edges)
        if vertex_connectivity(g) < 2:
            continue
        # relabel so the roots are 0, 1, 2, 3 in outer order
        order = outer + [v for v in range(n) if v not in outer]
        new = {v: i for i, v in enumerate(order)}
        g2 = Graph.from_edges(n, [(new[u], new[v]) for u, v in g.edges])
        w2 = sorted(tuple(sorted((new[u], new[v]))) for u, v in web_edges)
        deleted = sorted(set(w2) - set(g2.edges))
        cert = Certificate(
            "D", n, w2, [f"s{v}" if v < spine_n else f"w{v}" for v in order], {}, deleted,
            {"vertices": list(range(n)), "outer": [0, 1, 2, 3],
             "faces": sorted(tuple(sorted(new[v] for v in f)) for f in faces), "recipe": None},
            [],
        )
        spine = [new[v] for v in range(spine_n)]
        return PlantedChain(
            RootedGraph(g2, (0, 1, 2, 3)), cert, length, spine,
            [sorted(new[v] for v in b) for b in blocks],
            [sorted((spine[j], spine[j + 1])) for j in range(1, length + 1)],
        )
    raise ConstructionError(f"no planted chain of length {length} found in {tries} tries")


# ------------------------------------------------------- planted obstructions

# Hand-built W4(X)-free graphs carrying each obstruction kind of the
# cycle characterisation; roots are 0..3.  Kind 1 uses planted_chain.
#   kind 2: separation triangle on a, v, u with b, c, d in the ears
#   kind 3 and 5: two triangles meeting in the shared boundary {z, y}
#   kind 4: two triangles whose first boundaries are joined by a 4-cycle
OBSTRUCTION_TEMPLATES = {
    2: (6, [(0, 2), (2, 4), (0, 4), (4, 3), (3, 5), (4, 5), (5, 1), (1, 0), (0, 5)]),
    3: (8, [(0, 4), (0, 7), (1, 7), (1, 5), (2, 4), (2, 6), (3, 6), (3, 5), (4, 6), (6, 5),
            (4, 7), (7, 5), (4, 5)]),
    4: (10, [(2, 4), (2, 6), (3, 6), (3, 5), (4, 6), (6, 5), (4, 5), (0, 7), (0, 9), (1, 9),
             (1, 8), (7, 9), (9, 8), (7, 8), (4, 7), (5, 8), (4, 8)]),
}
OBSTRUCTION_TEMPLATES[5] = OBSTRUCTION_TEMPLATES[3]


@dataclass
class PlantedObstruction:
    rooted: RootedGraph
    cert: Certificate
    kind: int
    cycle: tuple

    def to_json(self) -> dict:
        return {"kind": self.kind, "cycle": list(self.cycle), "certificate": self.cert.to_json()}


def complete_to_web(n: int, edges, rng: random.Random, roots=(0, 1, 2, 3), tries: int = 100):
    """Random web containing (n, edges) as a spanning subgraph.

    Returns (outer order of the roots, web edges, faces) or None.  Edges are
    added in random order while the graph stays planar with the roots on
    one face; a maximal result is kept if it has no separating triangle.
    """
    import networkx as nx

    a, b, c, d = roots
    base = {tuple(sorted(e)) for e in edges}
    for _ in range(tries):
        outer = rng.choice([(a, b, c, d), (a, b, d, c), (a, c, b, d)])
        es = base | {tuple(sorted((outer[i], outer[(i + 1) % 4]))) for i in range(4)}
        h = nx.Graph()
        h.add_nodes_from(range(n + 1))
        h.add_edges_from(es)
        h.add_edges_from((n, v) for v in outer)
        if not nx.check_planarity(h)[0]:
            continue
        cand = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in es]
        rng.shuffle(cand)
        for u, v in cand:
            h.add_edge(u, v)
            if nx.check_planarity(h)[0]:
                es.add((u, v))
            else:
                h.remove_edge(u, v)
        faces = web_faces(n, es, outer)
        if faces is not None:
            return outer, sorted(es), faces
    return None


def _has_kind(rg: RootedGraph, kind: int, max_cycles: int = 5000):
    from .obstructions import find_obstruction, iter_cycles_through

    for C in iter_cycles_through(rg, max_cycles):
        if find_obstruction(rg, C, "either", kinds=(kind,)):
            return C
    return None


def planted_obstruction(kind: int, rng: random.Random, max_n: int = 10, attach_p: float = 0.5,
                        delete_p: float = 0.2, tries: int = 50) -> PlantedObstruction:
    """Random K4(X)-free web subgraph on which some cycle through the roots
    carries an obstruction of the given kind.

    Kind 1 comes from planted_chain; kinds 2 to 5 start from a fixed
    template, attach clique vertices to faces of a random web completion
    and delete random edges, keeping the obstruction present.
    """
    from ..minor_oracle import get_pattern, has_rooted_minor

    if kind == 1:
        for _ in range(tries):
            pc = planted_chain(rng.randint(1, max(1, min(4, max_n - 4))), rng, max_n=max_n,
                               delete_p=delete_p)
            C = _has_kind(pc.rooted, 1)
            if C and not has_rooted_minor(pc.rooted, get_pattern("k4x")):
                return PlantedObstruction(pc.rooted, pc.cert, 1, C)
        raise ConstructionError("no planted kind-1 obstruction found")
    if kind not in OBSTRUCTION_TEMPLATES:
        raise ConstructionError(f"unknown obstruction kind {kind}")
    n0, t_edges = OBSTRUCTION_TEMPLATES[kind]
    if n0 > max_n:
        raise ConstructionError(f"kind {kind} needs {n0} vertices")
    for _ in range(tries):
        done = complete_to_web(n0, t_edges, rng)
        if done is None:
            continue
        outer, web_edges, faces = done
        n = n0
        edges = set(t_edges)
        cliques = {}
        for f in rng.sample(faces, len(faces)):
            if n >= max_n or rng.random() >= attach_p:
                continue
            cliques[f] = [n]
            for v in rng.sample(f, rng.choice([2, 3])):
                edges.add((v, n))
            n += 1
        edges = sorted(edges)
        rng.shuffle(edges)
        for e in list(edges):
            if rng.random() < delete_p:
                trial = [x for x in edges if x != e]
                g = Graph.from_edges(n, trial)
                if vertex_connectivity(g) >= 2 and _has_kind(RootedGraph(g, (0, 1, 2, 3)), kind):
                    edges = trial
        g = Graph.from_edges(n, edges)
        rg = RootedGraph(g, (0, 1, 2, 3))
        if vertex_connectivity(g) < 2:
            continue
        C = _has_kind(rg, kind)
        if C is None or has_rooted_minor(rg, get_pattern("k4x")):
            continue
        full = set(web_edges) | {tuple(sorted((v, k[0]))) for f, k in cliques.items() for v in f}
        cert = Certificate(
            "D", n0, web_edges, [str(v) for v in range(n)], {f: k for f, k in cliques.items()},
            sorted(full - set(g.edges)),
            {"vertices": list(range(n0)), "outer": list(outer), "faces": faces, "recipe": None},
            [],
        )
        return PlantedObstruction(rg, cert, kind, C)
    raise ConstructionError(f"no planted kind-{kind} obstruction found in {tries} tries")


# ------------------------------------------------ even chain with an L' block

_LPRIME_EDGES = [(2, 7), (2, 8), (4, 5), (4, 7), (5, 6), (6, 7), (6, 8), (7, 8)]


def planted_lprime_chain(rng: random.Random, max_n: int = 12, attach_p: float = 0.4,
                         tries: int = 50) -> PlantedChain:
    """Web subgraph with a chain of two 2-separations whose middle block is
    a copy of L' (v2 on the shared boundary vertex s2, v4 and v5 on s1 and
    s3 in random order).

    The end blocks join s0 to s1 and s2, and s2 to s3 and s4, routing
    s1-s2 and s2-s3 through fresh vertices so that s1 s2 s3 never becomes
    a separating triangle.  Instances with a K4, W4 or K2,4(X) minor are
    discarded.
    """
    from ..minor_oracle import get_pattern, has_rooted_minor

    for _ in range(tries):
        perm = rng.choice([(1, 3), (3, 1)])
        place = {2: 2, 4: perm[0], 5: perm[1], 6: 5, 7: 6, 8: 7}
        edges = {tuple(sorted((place[a], place[b]))) for a, b in _LPRIME_EDGES}
        n = 8
        blocks = [sorted(place.values())]
        for s_out, s_in in ((0, 1), (4, 3)):
            # s_out joined to s_in and s2; s_in reaches s2 through a path
            edges |= {tuple(sorted((s_out, s_in))), tuple(sorted((s_out, 2)))}
            k = rng.choice([1, 1, 2]) if n + 2 <= max_n else 1
            path = list(range(n, n + k))
            n += k
            chain = [s_in] + path + [2]
            edges |= {tuple(sorted(e)) for e in zip(chain, chain[1:])}
            if rng.random() < 0.5:
                edges.add(tuple(sorted((s_out, path[0]))))
            blocks.append(sorted({s_out, s_in, 2, *path}))
        if n > max_n:
            continue
        done = complete_to_web(n, sorted(edges), rng, roots=(0, 1, 3, 4))
        if done is None:
            continue
        outer, web_edges, faces = done
        cliques = {}
        for f in rng.sample(faces, len(faces)):
            if n >= max_n or rng.random() >= attach_p:
                continue
            cliques[f] = [n]
            for v in rng.sample(f, rng.choice([2, 3])):
                edges.add(tuple(sorted((v, n))))
            n += 1
        g = Graph.from_edges(n, sorted(edges))
        rg = RootedGraph(g, (0, 1, 3, 4))
        if vertex_connectivity(g) < 2:
            continue
        if any(has_rooted_minor(rg, get_pattern(p)) for p in ("k4x", "w4x", "k24x")):
            continue
        # relabel: roots to 0..3 in outer order, spine s2 next
        order = list(outer) + [2] + [v for v in range(n) if v not in outer and v != 2]
        new = {v: i for i, v in enumerate(order)}
        g2 = Graph.from_edges(n, [(new[u], new[v]) for u, v in g.edges])
        full = set(web_edges) | {tuple(sorted((v, k[0]))) for f, k in cliques.items() for v in f}
        full = sorted(tuple(sorted((new[u], new[v]))) for u, v in full)
        cert = Certificate(
            "D", len(set(v for e in web_edges for v in e)),
            sorted(tuple(sorted((new[u], new[v]))) for u, v in web_edges),
            [str(v) for v in order],
            {tuple(sorted(new[v] for v in f)): [new[x] for x in k] for f, k in cliques.items()},
            sorted(set(full) - set(g2.edges)),
            {"vertices": sorted(new[v] for v in range(n) if v not in {x for k in cliques.values() for x in k}),
             "outer": [0, 1, 2, 3],
             "faces": sorted(tuple(sorted(new[v] for v in f)) for f in faces), "recipe": None},
            [],
        )
        spine = [new[v] for v in range(5)]
        return PlantedChain(
            RootedGraph(g2, (0, 1, 2, 3)), cert, 2, spine,
            [sorted(new[v] for v in b) for b in blocks],
            [sorted((spine[1], spine[2])), sorted((spine[2], spine[3]))],
        )
    raise ConstructionError(f"no planted L' chain found in {tries} tries")

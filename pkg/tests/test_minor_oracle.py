import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from corpus import atlas, four_root_orders, random_graph
from mutations import MUTATION_CLASSES, mutate
from naive_oracle import NaiveModels
from rootedminors.graph_core import Graph, MinorModel, RootedGraph
from rootedminors.minor_oracle import (
    PATTERNS,
    BudgetExhausted,
    decide,
    find_rooted_minor,
    get_pattern,
    has_unrooted_minor,
    restricted_pattern,
    verify_model,
)

K4 = Graph.from_edges(4, itertools.combinations(range(4), 2))
C4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
W4 = get_pattern("w4x").H
CLASS_A = Graph.from_edges(5, [(0, 4), (0, 3), (1, 4), (1, 3), (2, 4), (2, 3), (3, 4)])
CLASS_B = Graph.from_edges(6, [(0, 4), (0, 5), (1, 4), (1, 5), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)])


class TestPatterns:
    def test_map_families(self):
        assert len(get_pattern("k4x").family) == 24
        assert len(get_pattern("w4x").family) == 24
        assert all(4 not in m for m in get_pattern("w4x").family)  # hub never holds a root
        assert len(get_pattern("k24x").family) == 24
        k22 = get_pattern("k22x")
        assert sorted(k22.family) == [(0, 1, 2, 3), (0, 1, 3, 2), (1, 0, 2, 3), (1, 0, 3, 2)]
        lx = get_pattern("lx")
        assert lx.H.n == 8 and len(lx.H.edges) == 12
        assert {lx.label(s) for s in lx.slots} == {"v1", "v3", "v4", "v5"}
        lp = get_pattern("lprimex")
        assert lp.H.n == 6 and {lp.label(s) for s in lp.slots} == {"v2", "v4", "v5"}

    def test_unknown_pattern(self):
        with pytest.raises(ValueError):
            get_pattern("k5x")

    def test_restricted_family_must_be_nonempty(self):
        with pytest.raises(ValueError):
            restricted_pattern(get_pattern("k4x"), [])


class TestFindRootedMinor:
    def test_complete_graph_is_its_own_model(self):
        m = find_rooted_minor(RootedGraph(K4, (0, 1, 2, 3)), get_pattern("k4x"))
        assert all(len(s) == 1 for s in m.branch_sets.values())
        assert verify_model(RootedGraph(K4, (0, 1, 2, 3)), get_pattern("k4x"), m)

    def test_square_has_no_k4(self):
        assert find_rooted_minor(RootedGraph(C4, (0, 1, 2, 3)), get_pattern("k4x")) is None

    def test_wheel_rim_roots(self):
        rg = RootedGraph(W4, (0, 1, 2, 3))
        m = find_rooted_minor(rg, get_pattern("w4x"))
        assert m.branch_sets["hub"] == {4}
        assert verify_model(rg, get_pattern("w4x"), m)

    def test_class_a_graph_has_no_k4(self):
        assert find_rooted_minor(RootedGraph(CLASS_A, (0, 1, 2, 3)), get_pattern("k4x")) is None

    def test_class_b_graph_has_k24_with_centres_e_f(self):
        m = find_rooted_minor(RootedGraph(CLASS_B, (0, 1, 2, 3)), get_pattern("k24x"))
        assert {m.branch_sets["s1"], m.branch_sets["s2"]} == {frozenset({4}), frozenset({5})}

    def test_l_with_its_own_roots(self):
        lx = get_pattern("lx")
        rg = RootedGraph(lx.H, lx.slots)
        m = find_rooted_minor(rg, lx)
        assert all(len(s) == 1 for s in m.branch_sets.values())

    def test_arity_mismatch(self):
        with pytest.raises(ValueError):
            find_rooted_minor(RootedGraph(K4, (0, 1, 2)), get_pattern("k4x"))

    def test_budget(self):
        rg = RootedGraph(random_graph(random.Random(3), 9), (0, 1, 2, 3))
        with pytest.raises(BudgetExhausted):
            find_rooted_minor(rg, get_pattern("lx"), budget=1)
        assert decide(rg, get_pattern("lx"), budget=1) is None

    def test_search_is_deterministic(self):
        rg = RootedGraph(random_graph(random.Random(5), 8), (1, 3, 5, 7))
        for name in ("k4x", "w4x", "k22x"):
            assert find_rooted_minor(rg, get_pattern(name)) == find_rooted_minor(rg, get_pattern(name))

    def test_disconnected_roots(self):
        g = Graph.from_edges(8, list(itertools.combinations(range(4), 2)) + [(4, 5), (5, 6), (6, 7), (4, 7)])
        assert find_rooted_minor(RootedGraph(g, (0, 1, 2, 4)), get_pattern("k4x")) is None


class TestUnrootedMinor:
    def test_examples(self):
        K5 = Graph.from_edges(5, itertools.combinations(range(5), 2))
        tree = Graph.from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
        K3 = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        assert has_unrooted_minor(K5, K4)
        assert not has_unrooted_minor(tree, K3)
        assert not has_unrooted_minor(C4.add_edges([(0, 2)]), K4)


class TestVerifier:
    rg = RootedGraph(K4, (0, 1, 2, 3))
    k4 = get_pattern("k4x")
    ident = MinorModel("k4x", {f"p{i + 1}": frozenset({i}) for i in range(4)},
                       {i: f"p{i + 1}" for i in range(4)})

    def test_identity_accepted(self):
        assert verify_model(self.rg, self.k4, self.ident).ok

    def test_overlap_is_disjointness(self):
        sets = dict(self.ident.branch_sets)
        sets["p1"] = frozenset({0, 1})
        v = verify_model(self.rg, self.k4, MinorModel("k4x", sets, self.ident.root_map))
        assert not v.ok and v.reason == "disjointness"

    def test_hub_root_is_outside_family(self):
        rg = RootedGraph(W4, (0, 1, 2, 4))
        sets = {lab: frozenset({i}) for i, lab in enumerate(W4.labels)}
        m = MinorModel("w4x", sets, {0: "r1", 1: "r2", 2: "r3", 4: "hub"})
        v = verify_model(rg, get_pattern("w4x"), m)
        assert not v.ok and v.reason == "map-family"

    def test_malformed(self):
        m = MinorModel("k4x", {"p1": frozenset({0})}, {0: "p1"})
        assert verify_model(self.rg, self.k4, m).reason == "malformed"
        m = MinorModel("w4x", self.ident.branch_sets, self.ident.root_map)
        assert verify_model(self.rg, self.k4, m).reason == "malformed"

    @pytest.mark.parametrize("kind", MUTATION_CLASSES)
    def test_mutations_get_the_right_reason(self, kind):
        rng = random.Random(kind)
        expected = {"root-map": {"root-placement", "map-family"}}.get(kind, {kind})
        done = 0
        while done < 150:
            g = random_graph(rng, rng.randint(6, 9))
            name = rng.choice(sorted(PATTERNS))
            p = get_pattern(name)
            rg = RootedGraph(g, tuple(rng.sample(range(g.n), p.arity)))
            m = find_rooted_minor(rg, p)
            if m is None:
                continue
            out = mutate(kind, rg, p, m, rng)
            if out is None:
                continue
            rg2, m2, reason = out
            v = verify_model(rg2, p, m2)
            assert not v.ok and v.reason == reason and reason in expected
            done += 1


@pytest.mark.parametrize("n", [4, 5, 6])
def test_agrees_with_naive_enumerator(n):
    for g in atlas(n):
        edges = sorted(g.edges)
        for name in ("k4x", "w4x", "k22x", "k24x"):
            p = get_pattern(name)
            naive = NaiveModels(n, edges, p.H.n, sorted(p.H.edges))
            for roots in four_root_orders(n):
                assert decide(RootedGraph(g, roots), p) == naive.has(roots, p.family), (edges, roots, name)


@settings(max_examples=40, deadline=None)
@given(st.integers(5, 8), st.integers(0, 10**6), st.sampled_from(["k4x", "w4x", "k22x", "k24x"]))
def test_minor_is_monotone_under_edge_deletion(n, seed, name):
    rng = random.Random(seed)
    g = random_graph(rng, n)
    p = get_pattern(name)
    rg = RootedGraph(g, tuple(rng.sample(range(n), p.arity)))
    m = find_rooted_minor(rg, p)
    if m is None:
        # removing an edge cannot create a minor
        e = rng.choice(sorted(g.edges))
        assert not decide(RootedGraph(g.remove_edges([e]), rg.roots), p)
    else:
        assert verify_model(rg, p, m).ok
        # adding an edge cannot destroy one
        missing = [e for e in itertools.combinations(range(n), 2) if e not in g.edges]
        if missing:
            assert decide(RootedGraph(g.add_edges([rng.choice(missing)]), rg.roots), p)


def test_found_models_are_valid_on_random_graphs():
    rng = random.Random(17)
    for _ in range(150):
        g = random_graph(rng, rng.randint(5, 9))
        for name, p in sorted(PATTERNS.items()):
            rg = RootedGraph(g, tuple(rng.sample(range(g.n), p.arity)))
            m = find_rooted_minor(rg, p)
            if m is not None:
                assert verify_model(rg, p, m).ok

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from corpus import class_corpus, random_2_connected
from rootedminors.connectivity import DomainError, vertex_connectivity
from rootedminors.graph_core import Graph, RootedGraph, parse_graph6
from rootedminors.minor_oracle import BudgetExhausted, decide, get_pattern
from rootedminors.structure import cycle_through_roots, decide_w4_by_obstructions, generate_class
from rootedminors.structure.k24 import decide_k24, k22_via_disjoint_paths
from rootedminors.structure.ltheory import check_lprime_witness, decide_lx, find_lprime, lprime_by_clauses
from rootedminors.structure.obstructions import find_obstruction
from rootedminors.structure.planted import is_web, planted_lprime_chain, planted_obstruction
from rootedminors.structure.webs import ConstructionError, WebSpec

C4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
K4 = Graph.from_edges(4, itertools.combinations(range(4), 2))
C6 = Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
BOWTIE = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])


def square_with_cert():
    # class D web C4 + ac with the chord deleted; sorted edges put ac second
    return generate_class("D", WebSpec("ac"), {}, [True, False, True, True, True])


class TestGenerators:
    def test_class_a(self):
        rg, cert = generate_class("A")
        assert rg.n == 5 and rg.graph.edges == {(0, 4), (0, 3), (1, 4), (1, 3), (2, 4), (2, 3), (3, 4)}
        assert cert.cls == "A"

    def test_smallest_web(self):
        rg, cert = generate_class("D", WebSpec("ac"))
        assert rg.n == 4 and rg.graph.edges == C4.edges | {(0, 2)}
        assert is_web(rg.n, rg.graph.edges)

    def test_class_b_contains_k24_on_e_f(self):
        rg, _ = generate_class("B")
        assert rg.n == 6
        assert all(rg.graph.has_edge(x, y) for x in range(4) for y in (4, 5))
        assert rg.graph.has_edge(4, 5)

    def test_mask_that_breaks_2_connectivity(self):
        with pytest.raises(ConstructionError):
            generate_class("D", WebSpec("ac"), {}, [False, True, True, True, True])

    def test_unsplittable_edge(self):
        with pytest.raises(ConstructionError):
            WebSpec("ac", [(0, 1)]).build()

    @pytest.mark.parametrize("cls", "ABCDEF")
    def test_random_members_are_2_connected(self, cls):
        for rg, cert in class_corpus(cls, count=40, seed=5):
            assert vertex_connectivity(rg.graph) >= 2 and cert.cls == cls and rg.roots == (0, 1, 2, 3)

    def test_same_recipe_same_graph(self):
        a = class_corpus("E", count=10, seed=9)
        b = class_corpus.__wrapped__("E", count=10, seed=9)
        assert [x[0] for x in a] == [x[0] for x in b]


class TestCycleThroughRoots:
    def test_square(self):
        C = cycle_through_roots(RootedGraph(C4, (0, 1, 2, 3)))
        assert sorted(C) == [0, 1, 2, 3] and len(C) == 4

    def test_bowtie_is_outside_the_domain(self):
        with pytest.raises(DomainError):
            cycle_through_roots(RootedGraph(BOWTIE, (0, 1, 3, 4)))

    def test_random_class_d(self):
        for rg, _ in class_corpus("D", count=100, seed=3):
            C = cycle_through_roots(rg)
            assert set(rg.roots) <= set(C)
            assert all(rg.graph.has_edge(C[i], C[(i + 1) % len(C)]) for i in range(len(C)))


class TestW4Obstructions:
    def test_square_has_a_kind_1_witness(self):
        v = decide_w4_by_obstructions(RootedGraph(C4, (0, 1, 2, 3)))
        assert v.status == "w4-free" and v.w4_free
        (_, w), = v.witnesses
        assert w.kind == 1
        bds = w.chain.boundaries()
        assert len(bds) == 1 and bds[0] in ((0, 2), (1, 3))

    def test_planted_kind_2(self):
        rng = random.Random(4)
        for _ in range(10):
            po = planted_obstruction(2, rng, max_n=9)
            v = decide_w4_by_obstructions(po.rooted)
            assert v.status == "w4-free"
            assert find_obstruction(po.rooted, po.cycle, kinds=(2,)).kind == 2
            assert not decide(po.rooted, get_pattern("w4x"))

    def test_wheel_drawn_as_a_web_has_w4(self):
        wheel = get_pattern("w4x").H
        assert is_web(wheel.n, wheel.edges)
        v = decide_w4_by_obstructions(RootedGraph(wheel, (0, 1, 2, 3)))
        assert v.status == "has-w4" and set(v.cycle) >= {0, 1, 2, 3}

    def test_k4_precondition(self):
        with pytest.raises(DomainError):
            decide_w4_by_obstructions(RootedGraph(K4, (0, 1, 2, 3)))

    def test_three_roots(self):
        with pytest.raises(DomainError):
            decide_w4_by_obstructions(RootedGraph(C4, (0, 1, 2)))

    def test_witness_serializes(self):
        v = decide_w4_by_obstructions(RootedGraph(C4, (0, 1, 2, 3)))
        out = v.to_json()
        assert out["status"] == "w4-free" and out["witnesses"][0]["kind"] == 1

    @pytest.mark.parametrize("kind", [1, 2, 3, 4, 5])
    def test_planted_kinds_are_present(self, kind):
        rng = random.Random(kind)
        for _ in range(8):
            po = planted_obstruction(kind, rng, max_n=10)
            assert find_obstruction(po.rooted, po.cycle, kinds=(kind,)) is not None
            assert not decide(po.rooted, get_pattern("k4x"))


class TestK22:
    def test_square_in_order_a_c_b_d(self):
        assert k22_via_disjoint_paths(C4, 0, 2, 1, 3)

    def test_path(self):
        path = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        assert not k22_via_disjoint_paths(path, 0, 1, 2, 3)

    def test_lemma_graph_with_a_triangle_clique(self):
        # K2,2 on t1, t2 | s1, s2 plus s1s2, one vertex on the triangle t1 s1 s2
        g = Graph.from_edges(5, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 0), (4, 2), (4, 3)])
        assert k22_via_disjoint_paths(g, 2, 3, 0, 1)
        assert decide(RootedGraph(g, (2, 3, 0, 1)), get_pattern("k22x"))

    def test_repeated_vertex(self):
        with pytest.raises(DomainError):
            k22_via_disjoint_paths(C4, 0, 0, 1, 2)


class TestK24:
    def test_classes(self):
        assert decide_k24(*generate_class("A")) is False
        assert decide_k24(*generate_class("B")) is True
        info = {}
        assert decide_k24(*generate_class("D", WebSpec("ac")), info=info) is False
        assert info["method"] == "structural"
        assert not decide(generate_class("D", WebSpec("ac"))[0], get_pattern("k24x"))

    def test_without_certificate_falls_back_to_oracle(self):
        info = {}
        rg, _ = generate_class("B")
        assert decide_k24(rg, None, info=info) is True and info["method"] == "oracle"


class TestLPrime:
    def test_lprime_itself(self):
        p = get_pattern("lprimex")
        w = find_lprime(p.H, p.slots)
        assert w is not None
        ok, reason = check_lprime_witness(p.H, p.slots, w)
        assert ok, reason

    def test_too_small_or_too_few_cycles(self):
        assert find_lprime(K4, (0, 1, 2)) is None
        assert find_lprime(C6, (0, 2, 4)) is None

    def test_not_2_connected(self):
        with pytest.raises(DomainError):
            find_lprime(BOWTIE, (0, 1, 3))

    def test_clause_reading_is_necessary(self):
        # a minor always yields the cycles and paths; the converse can fail
        rng = random.Random(21)
        p = get_pattern("lprimex")
        checked = 0
        while checked < 40:
            n = rng.randint(6, 8)
            g = random_2_connected(rng, n)
            if len(g.edges) > 2 * n:
                continue
            roots = tuple(rng.sample(range(n), 3))
            try:
                by_clauses = lprime_by_clauses(g, roots)
            except BudgetExhausted:
                continue
            if decide(RootedGraph(g, roots), p):
                assert by_clauses, (sorted(g.edges), roots)
            checked += 1

    def test_clauses_without_a_minor(self):
        # C1 = 0 6 4 2 7, C2 = 0 4 2 1 6, C3 = 0 3 8 2 1 6 with paths 7, 8 and 5 3
        # satisfy every clause, yet the graph has no L'(X) minor for these roots
        g = parse_graph6("HkgVT?s")
        roots = (8, 5, 7)
        assert lprime_by_clauses(g, roots)
        assert not decide(RootedGraph(g, roots), get_pattern("lprimex"))
        assert find_lprime(g, roots) is None

    def test_found_witnesses_check_out(self):
        rng = random.Random(8)
        p = get_pattern("lprimex")
        for _ in range(30):
            g = random_2_connected(rng, rng.randint(6, 8))
            roots = tuple(rng.sample(range(g.n), 3))
            w = find_lprime(g, roots)
            assert (w is not None) == decide(RootedGraph(g, roots), p)
            if w is not None:
                assert check_lprime_witness(g, roots, w)[0]


class TestLX:
    def test_class_a(self):
        info = {}
        assert decide_lx(*generate_class("A"), info=info) is False
        assert info["method"] == "structural"

    def test_square(self):
        assert decide_lx(*square_with_cert()) is False
        assert decide_lx(*square_with_cert(), rules="published") is False

    def test_planted_even_chain_with_lprime_block(self):
        rng = random.Random(2)
        for _ in range(5):
            pc = planted_lprime_chain(rng)
            assert decide(pc.rooted, get_pattern("lx"))
            assert decide_lx(pc.rooted, pc.cert)
            assert decide_lx(pc.rooted, pc.cert, rules="published")

    def test_unknown_rule_set(self):
        with pytest.raises(ValueError):
            decide_lx(*generate_class("A"), rules="fast")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from("ABCD"))
def test_generated_classes_are_k4_free(seed, cls):
    rg, cert = class_corpus.__wrapped__(cls, count=1, max_n=9, seed=seed)[0]
    assert not decide(rg, get_pattern("k4x"))
    # deleting edges only removes minors, so the full class graph is K4-free too
    assert cert.cls == cls and all(e not in rg.graph.edges for e in cert.deleted)

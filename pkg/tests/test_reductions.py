import itertools
import json
import random

import pytest

from corpus import reduction_corpus
from rootedminors.connectivity import DomainError, is_planar, vertex_connectivity
from rootedminors.graph_core import Graph, RootedGraph, mask_of
from rootedminors.minor_oracle import get_pattern
from rootedminors.reductions import (
    Instance,
    ReductionStep,
    _two_sep_rule,
    fixpoint_reduce,
    lx_two_two_counterexample,
    next_step,
    reduce_2_separation,
    reduce_cut_vertex,
    reduce_k24,
    reduce_lx,
    reduce_to_planar,
    reduced_decide,
)
from rootedminors.structure.webs import WebSpec, build_class_graph, generate_class

C4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
K5 = Graph.from_edges(5, itertools.combinations(range(5), 2))
BOWTIE = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
PATTERNS = ("k4x", "w4x", "k24x", "k22x", "lx", "lprimex")


def oracle_fold(inst):
    _, tree, _ = fixpoint_reduce(inst)
    return tree.fold(lambda leaf: leaf.decide())


class TestCutVertex:
    def test_bowtie_two_and_two(self):
        step = reduce_cut_vertex(Instance.of(RootedGraph(BOWTIE, (0, 1, 3, 4)), "k4x"))
        assert step.lemma == "cut-vertex-split-roots" and step.combiner == "forced-no"

    def test_one_root_across_is_replaced_by_the_cut_vertex(self):
        # K4 on a, b, c, v with a pendant triangle v d e
        g = Graph.from_edges(6, list(itertools.combinations(range(4), 2)) + [(3, 4), (3, 5), (4, 5)])
        inst = Instance.of(RootedGraph(g, (0, 1, 2, 4)), "k4x")
        step = reduce_cut_vertex(inst)
        assert step.lemma == "cut-vertex-one-across" and step.boundary == (3,)
        (child,) = step.children
        assert child.graph.n == 4 and len(child.graph.edges) == 6 and child.rooted.roots == (0, 1, 2, 3)
        assert inst.decide() == child.decide() is True

    def test_all_roots_in_one_block(self):
        g = Graph.from_edges(6, list(itertools.combinations(range(4), 2)) + [(3, 4), (3, 5), (4, 5)])
        inst = Instance.of(RootedGraph(g, (0, 1, 2, 3)), "k4x")
        step = reduce_cut_vertex(inst)
        assert step.lemma == "cut-vertex-all-one-side"
        assert step.children[0].graph.n == 4

    def test_root_at_the_cut_vertex(self):
        step = reduce_cut_vertex(Instance.of(RootedGraph(BOWTIE, (0, 1, 2, 3)), "w4x"))
        assert step.lemma == "cut-vertex-root-at-cut" and step.combiner == "forced-no"


class TestTwoSeparation:
    def test_square_two_roots_in_boundary(self):
        step = reduce_2_separation(Instance.of(RootedGraph(C4, (0, 1, 2, 3)), "w4x"))
        assert step.lemma == "2sep-roots-in-boundary" and step.combiner == "forced-no"
        assert set(step.boundary) in ({0, 2}, {1, 3})

    def test_two_and_two_gives_two_children(self):
        rg, _ = generate_class("C")
        inst = Instance.of(rg, "w4x")
        step = _two_sep_rule(inst, (5, 6), mask_of([0, 1, 4]), mask_of([2, 3]))
        assert step.lemma == "2sep-two-two" and step.combiner == "or" and len(step.children) == 2

    @pytest.mark.parametrize("pattern", PATTERNS)
    def test_square_with_apex_on_b_c(self, pattern):
        # every root on the side {a, b, c, d}; the kept side gains bc
        g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (0, 3), (4, 1), (4, 2)])
        roots = (0, 1, 3) if pattern == "lprimex" else (0, 1, 2, 3)
        inst = Instance.of(RootedGraph(g, roots), pattern)
        step = _two_sep_rule(inst, (1, 2), mask_of([0, 3]), mask_of([4]))
        assert step.lemma == "2sep-all-one-side"
        (child,) = step.children
        assert child.graph.n == 4 and child.graph.edges == C4.edges
        assert inst.decide() == child.decide()

    def test_needs_3_connected_pattern(self):
        assert reduce_2_separation(Instance.of(RootedGraph(C4, (0, 1, 2, 3)), "k22x")) is None


class TestK24Rules:
    def test_class_b_or_and(self):
        inst = Instance.of(generate_class("B")[0], "k24x")
        step = reduce_k24(inst)
        assert step.lemma == "k24-two-two" and step.combiner == "or-and"
        assert set(step.boundary) == {4, 5}
        k22_sides = step.children[2:]
        assert all(c.pattern == "k22x" and c.decide() for c in k22_sides)
        assert oracle_fold(inst) is True

    def test_class_a_root_at_cut(self):
        inst = Instance.of(generate_class("A")[0], "k24x")
        assert oracle_fold(inst) is False
        step = next_step(inst)
        assert step.combiner == "forced-no"

    def test_tight_triangle_on_a_clique(self):
        web = WebSpec("ac", [(0, 2)])
        full, _ = build_class_graph("D", web, {(0, 1, 4): 2})
        inst = Instance.of(RootedGraph(full, (0, 1, 2, 3)), "k24x")
        step = next_step(inst)
        assert step.lemma == "k24-tight-3sep" and set(step.boundary) == {0, 1, 4}
        (child,) = step.children
        assert child.graph.n == 5
        assert inst.decide() == child.decide()


class TestLXRules:
    def test_boundary_of_two_roots(self):
        step = reduce_lx(Instance.of(RootedGraph(C4, (0, 1, 2, 3)), "lx"))
        assert step.lemma == "lx-roots-in-boundary" and step.combiner == "forced-no"

    def test_all_on_one_side(self):
        g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (0, 3), (4, 1), (4, 2)])
        step = reduce_lx(Instance.of(RootedGraph(g, (0, 1, 2, 3)), "lx"))
        assert step.combiner in ("forced-no", "same-answer")

    def test_counterexample_breaks_the_two_and_two_split(self):
        rg, boundary = lx_two_two_counterexample()
        inst = Instance.of(rg, "lx")
        assert inst.decide() is True
        assert reduced_decide(inst, allow_unsound=True) is False
        assert reduced_decide(inst) is True

    def test_root_in_boundary_is_only_an_advisory(self):
        rg, _ = lx_two_two_counterexample()
        _, _, trace = fixpoint_reduce(Instance.of(rg, "lx"))
        assert trace.advisories and all(a["lemma"] == "lx-root-in-boundary" for a in trace.advisories)
        assert "lx-root-in-boundary" not in {s["lemma"] for s in trace.steps}


class TestFixpoint:
    def test_square_w4(self):
        leaves, tree, trace = fixpoint_reduce(Instance.of(RootedGraph(C4, (0, 1, 2, 3)), "w4x"))
        assert leaves == [] and tree.kind == "no" and len(trace.steps) == 1

    def test_class_c_follows_the_separation_at_g_f_then_g_e(self):
        rg, _ = generate_class("C")
        inst = Instance.of(rg, "w4x")
        step = _two_sep_rule(inst, (5, 6), mask_of([0, 1, 4]), mask_of([2, 3]))
        first = step.children[0]
        assert first.graph.labels == ("a", "b", "e", "f", "g")
        follow = next_step(first)
        labels = first.graph.labels
        assert {labels[v] for v in follow.boundary} == {"e", "g"}
        assert all(oracle_fold(c) is False for c in step.children)
        leaves, tree, trace = fixpoint_reduce(inst)
        assert tree.fold(lambda leaf: leaf.decide()) is False and leaves == []

    def test_3_connected_input_is_a_leaf(self):
        inst = Instance.of(RootedGraph(K5, (0, 1, 2, 3)), "w4x")
        leaves, tree, trace = fixpoint_reduce(inst)
        assert leaves == [inst] and tree.kind == "leaf" and trace.steps == []

    def test_trace_serializes(self):
        rg, _ = generate_class("B")
        _, _, trace = fixpoint_reduce(Instance.of(rg, "k24x"))
        back = json.loads(json.dumps(trace.to_json()))
        assert back["steps"][0]["lemma"] == "k24-two-two"
        assert len(back["steps"][0]["children"]) == 4

    def test_answer_is_preserved_on_a_corpus_slice(self):
        for inst in reduction_corpus()[:1200]:
            assert oracle_fold(inst) == inst.decide(), inst.to_json()

    def test_every_step_shrinks(self):
        for inst in reduction_corpus()[:600]:
            _, tree, _ = fixpoint_reduce(inst)
            stack = [(tree, inst)]
            while stack:
                node, cur = stack.pop()
                if node.step is None:
                    continue
                for ch, sub in zip(node.step.children, node.children):
                    assert ch.size() < cur.size()
                    stack.append((sub, ch))

    def test_wrong_root_count(self):
        with pytest.raises(DomainError):
            Instance.of(RootedGraph(C4, (0, 1, 2)), "k4x")

    def test_step_arity_is_checked(self):
        with pytest.raises(ValueError):
            ReductionStep("x", (), "or-and", [])


class TestPlanarReduction:
    def test_connected_clique_becomes_one_vertex_on_the_triangle(self):
        full, cert = build_class_graph("D", WebSpec("ac", [(0, 2)]), {(0, 1, 4): 2})
        out = reduce_to_planar(Instance.of(RootedGraph(full, (0, 1, 2, 3)), "w4x"), cert)
        assert out.n == 6 and is_planar(out)
        v_t = out.n - 1
        assert {x for x in range(out.n) if out.has_edge(v_t, x)} == {0, 1, 4}

    def test_empty_cliques_are_left_alone(self):
        rg, cert = generate_class("D", WebSpec("bd", [(1, 3)]))
        out = reduce_to_planar(Instance.of(rg, "w4x"), cert)
        assert out.n == rg.n and out.edges == rg.graph.edges

    def test_three_two_sided_components(self):
        # three clique vertices on triangle (0, 1, 2), each seeing a different pair
        full, cert = build_class_graph("D", WebSpec("ac"), {(0, 1, 2): 3})
        gone = {(4, 5), (4, 6), (5, 6), (2, 4), (0, 5), (1, 6)}
        keep = [e not in gone for e in full.sorted_edges()]
        rg, cert = generate_class("D", WebSpec("ac"), {(0, 1, 2): 3}, keep)
        assert vertex_connectivity(rg.graph) == 2
        out = reduce_to_planar(Instance.of(rg, "k22x"), cert)
        assert is_planar(out) and out.n == 7
        pairs = {frozenset(x for x in range(4) if out.has_edge(v, x)) for v in range(4, 7)}
        assert pairs == {frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2})}

    def test_needs_a_web_certificate(self):
        rg, cert = generate_class("A")
        with pytest.raises(DomainError):
            reduce_to_planar(Instance.of(rg, "w4x"), cert)
        with pytest.raises(DomainError):
            reduce_to_planar(Instance.of(rg, "w4x"), None)

    def test_random_webs_reduce_to_planar_graphs_with_the_same_answer(self):
        from rootedminors.structure.webs import random_instance

        rng = random.Random(12)
        for _ in range(60):
            rg, cert = random_instance("D", rng, max_n=10, cap=3, delete_p=0.0)
            inst = Instance.of(rg, "w4x")
            out = reduce_to_planar(inst, cert)
            assert is_planar(out)
            if vertex_connectivity(rg.graph) >= 3:
                assert Instance.of(RootedGraph(out, rg.roots), "w4x").decide() == inst.decide()

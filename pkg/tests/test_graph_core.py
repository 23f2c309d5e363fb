import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from rootedminors.graph_core import (
    Graph,
    Graph6Error,
    GraphError,
    MinorModel,
    RootedGraph,
    bits,
    components,
    contract_edge,
    encode_graph6,
    induced_subgraph,
    is_connected,
    mask_of,
    parse_edge_list,
    parse_graph6,
    rooted_subgraph,
    write_dot,
    write_edge_list,
)

K4 = Graph.from_edges(4, itertools.combinations(range(4), 2))
C4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
K3 = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@st.composite
def graphs(draw, max_n=10):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


def nx_graph6(g: Graph) -> str:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return nx.to_graph6_bytes(h, header=False).decode().strip()


def test_graph_rejects_loops_and_out_of_range():
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 2)])
    with pytest.raises(GraphError):
        RootedGraph(K3, (0, 0))


def test_bits_and_masks_invert():
    assert bits(0b101001) == [0, 3, 5]
    assert mask_of([0, 3, 5]) == 0b101001


class TestGraph6:
    def test_complete_graph_on_four(self):
        g = parse_graph6("C~")
        assert g.n == 4 and g.edges == K4.edges

    def test_triangle(self):
        assert parse_graph6("Bw").edges == K3.edges

    def test_header_is_skipped(self):
        assert parse_graph6(">>graph6<<C~").edges == K4.edges

    def test_short_body_is_rejected_with_offset(self):
        with pytest.raises(Graph6Error) as exc:
            parse_graph6("D?")
        assert exc.value.offset == 2

    def test_empty_five_vertex_record_matches_reference(self):
        # two body bytes of zeros are exactly the 10 bits of an edgeless 5-vertex graph
        g = parse_graph6("D??")
        ref = nx.from_graph6_bytes(b"D??")
        assert g.n == ref.number_of_nodes() == 5 and not g.edges and ref.number_of_edges() == 0

    @pytest.mark.parametrize("text,offset", [("D???", 3), ("C~ ", 2), ("", 0), ("~?", 2)])
    def test_malformed_records(self, text, offset):
        with pytest.raises(Graph6Error) as exc:
            parse_graph6(text)
        assert exc.value.offset == offset

    def test_nonzero_padding_is_rejected(self):
        with pytest.raises(Graph6Error):
            parse_graph6("B~")

    @settings(max_examples=300, deadline=None)
    @given(graphs())
    def test_round_trip_matches_reference_encoder(self, g):
        text = encode_graph6(g)
        assert text == nx_graph6(g)
        back = parse_graph6(text)
        assert back.n == g.n and back.edges == g.edges

    def test_large_vertex_count_prefix(self):
        g = Graph.from_edges(70, [(0, 69), (3, 4)])
        text = encode_graph6(g)
        assert text.startswith("~") and text == nx_graph6(g)
        assert parse_graph6(text).edges == g.edges


class TestContraction:
    def test_triangle_edge_gives_single_edge(self):
        assert contract_edge(K3, (0, 1)).edges == {(0, 1)}

    def test_square_edge_gives_triangle(self):
        out = contract_edge(C4, (1, 2))
        assert out.n == 3 and out.edges == K3.edges

    def test_parallel_edges_collapse(self):
        out = contract_edge(K4, (0, 3))
        assert out.n == 3 and out.edges == K3.edges

    def test_non_edge_is_an_error(self):
        with pytest.raises(GraphError):
            contract_edge(C4, (0, 2))

    @settings(max_examples=100, deadline=None)
    @given(graphs(max_n=8), st.data())
    def test_contraction_matches_networkx(self, g, data):
        if not g.edges:
            return
        u, v = data.draw(st.sampled_from(sorted(g.edges)))
        ours = contract_edge(g, (u, v))
        ref = nx.contracted_nodes(g.to_networkx(), u, v, self_loops=False)
        assert ours.n == ref.number_of_nodes()
        assert len(ours.edges) == ref.number_of_edges()


class TestInducedSubgraph:
    def test_three_vertices_of_k4(self):
        sub, index = induced_subgraph(K4, [0, 2, 3])
        assert sub.edges == K3.edges and index == {0: 0, 2: 1, 3: 2}

    def test_square_minus_vertex_is_a_path(self):
        sub, _ = induced_subgraph(C4, [0, 1, 2])
        assert sub.edges == {(0, 1), (1, 2)}

    def test_empty_selection(self):
        sub, index = induced_subgraph(C4, [])
        assert sub.n == 0 and not sub.edges and index == {}

    def test_out_of_range(self):
        with pytest.raises(GraphError):
            induced_subgraph(C4, [7])

    def test_rooted_subgraph_carries_roots_and_extra_edges(self):
        rg = RootedGraph(C4, (0, 1, 2, 3))
        sub, index = rooted_subgraph(rg, [0, 1, 2], roots=(0, 2), extra_edges=[(0, 2)])
        assert sub.roots == (0, 2) and sub.graph.edges == K3.edges


def test_components_and_connectivity():
    g = Graph.from_edges(5, [(0, 1), (2, 3)])
    assert sorted(components(g)) == [0b00011, 0b01100, 0b10000]
    assert not is_connected(g) and is_connected(C4)


class TestExport:
    def test_dot_triangle(self):
        text = write_dot(K3)
        assert text.count(" -- ") == 3
        assert all(f"  {v};" in text for v in range(3))

    def test_dot_flags_roots(self):
        text = write_dot(RootedGraph(C4, (0, 1, 2, 3)))
        assert text.count("doublecircle") == 4

    def test_dot_empty_graph(self):
        assert write_dot(Graph(0, frozenset())) == "graph G {\n}\n"

    def test_edge_list_round_trip(self):
        text = write_edge_list(C4)
        assert parse_edge_list("# comment\n" + text).edges == C4.edges

    def test_malformed_edge_list(self):
        with pytest.raises(GraphError):
            parse_edge_list("3\n0 1 2\n")


def test_model_json_round_trip():
    m = MinorModel("k4x", {"p1": frozenset({0, 4}), "p2": frozenset({1})}, {0: "p1", 1: "p2"})
    back = MinorModel.from_json(m.to_json())
    assert back == m
    with pytest.raises(GraphError):
        MinorModel.from_json('{"pattern": "k4x"}')

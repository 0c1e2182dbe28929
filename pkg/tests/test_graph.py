import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smalluniv.enumeration import all_graphs
from smalluniv.graph import (Graph, Graph6Error, complement, complete_graph, cycle_graph,
                             decode_graph6, disjoint_union, edge_extremeness, empty_graph,
                             encode_graph6, flip_edge, induced_subgraph, validate)


@st.composite
def graphs(draw, max_order=12):
    n = draw(st.integers(0, max_order))
    pairs = list(itertools.combinations(range(n), 2))
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, b in zip(pairs, bits) if b])


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.order))
    h.add_edges_from(g.edges())
    return h


# -- graph6 ---------------------------------------------------------------


def test_universal5_encoding_matches_reference_encoder(first_universal5):
    ref = nx.to_graph6_bytes(to_nx(first_universal5), header=False).decode().strip()
    assert encode_graph6(first_universal5) == ref == "DCs"
    assert decode_graph6(ref) == first_universal5


def test_listed_example_string_decodes_to_a_star():
    # "D?{" is the star K_{1,4} centred at vertex 4, not the graph it is listed for
    g = decode_graph6("D?{")
    assert sorted(g.edges()) == [(0, 4), (1, 4), (2, 4), (3, 4)]
    assert sorted(nx.from_graph6_bytes(b"D?{").edges()) == sorted(g.edges())


def test_empty_graph_encoding():
    assert encode_graph6(empty_graph(0)) == "?"
    assert decode_graph6("?") == Graph(0, ())


def test_k2_encoding():
    # one pair, bit 1, padded to 100000 -> 32 + 63 = '_'
    assert encode_graph6(complete_graph(2)) == "A_"


def test_dqc_round_trip():
    g = decode_graph6("DQc")
    assert g.order == 5
    assert decode_graph6(encode_graph6(g)) == g


def test_header_and_newline_accepted():
    assert decode_graph6(">>graph6<<DCs\n") == decode_graph6("DCs")


def test_round_trip_orders_up_to_8():
    for n in range(9):
        for g in all_graphs(n):
            assert decode_graph6(encode_graph6(g)) == g


def test_round_trip_all_156_of_order_6_against_networkx():
    for g in all_graphs(6):
        s = encode_graph6(g)
        assert s == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()


@settings(max_examples=200, deadline=None)
@given(graphs(max_order=64))
def test_matches_networkx_encoder(g):
    assert encode_graph6(g) == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert decode_graph6(encode_graph6(g)) == g


def test_large_order_prefix():
    g = empty_graph(63)
    s = encode_graph6(g)
    assert s.startswith("~??~")
    assert decode_graph6(s) == g


@pytest.mark.parametrize("text, offset", [
    ("D?{ ", 3),          # space is outside 63..126
    ("D?", 2),            # payload too short
    ("D?{?", 3),          # payload too long
    ("A`", 1),            # padding bit set
    ("~~??", 0),          # 8-byte prefix is unsupported
    ("~??A", 0),          # non-minimal long prefix
    ("", 0),
])
def test_decode_errors_carry_offsets(text, offset):
    with pytest.raises(Graph6Error) as exc:
        decode_graph6(text)
    assert exc.value.offset == offset


# -- operations -----------------------------------------------------------


def test_complement_examples():
    assert complement(complete_graph(5)) == empty_graph(5)
    assert complement(empty_graph(0)) == empty_graph(0)
    triangles = disjoint_union(complete_graph(3), complete_graph(3))
    k33 = Graph.from_edges(6, [(i, j) for i in range(3) for j in range(3, 6)])
    assert complement(triangles) == k33


def test_induced_subgraph_examples(first_universal5):
    assert induced_subgraph(complete_graph(5), {0, 2, 4}) == complete_graph(3)
    assert induced_subgraph(first_universal5, {1, 2, 3}) == empty_graph(3)
    assert induced_subgraph(first_universal5, 0b11111) == first_universal5


def test_induced_subgraph_rejects_outside_vertices():
    with pytest.raises(ValueError):
        induced_subgraph(complete_graph(3), 0b1000)


def test_flip_edge_examples():
    assert flip_edge(empty_graph(2), 0, 1) == complete_graph(2)
    assert flip_edge(complete_graph(2), 0, 1) == empty_graph(2)
    with pytest.raises(ValueError):
        flip_edge(complete_graph(3), 1, 1)


def test_edge_extremeness_examples():
    assert edge_extremeness(complete_graph(5)) == 10
    assert edge_extremeness(empty_graph(5)) == 10
    assert edge_extremeness(cycle_graph(5)) == 0


@given(graphs())
def test_complement_involution_and_validity(g):
    c = complement(g)
    validate(c)
    assert complement(c) == g


@given(graphs(), st.data())
def test_induced_commutes_with_complement(g, data):
    s = data.draw(st.integers(0, (1 << g.order) - 1))
    sub = induced_subgraph(g, s)
    validate(sub)
    assert induced_subgraph(complement(g), s) == complement(sub)


@given(graphs(), st.data())
def test_flip_edge_changes_one_edge(g, data):
    if g.order < 2:
        return
    v = data.draw(st.integers(0, g.order - 1))
    w = data.draw(st.integers(0, g.order - 1).filter(lambda x: x != v))
    h = flip_edge(g, v, w)
    validate(h)
    assert abs(h.num_edges() - g.num_edges()) == 1
    assert flip_edge(h, v, w) == g


def test_validate_rejects_bad_rows():
    with pytest.raises(ValueError):
        validate(Graph(2, (0b10, 0)))
    with pytest.raises(ValueError):
        validate(Graph(2, (0b1, 0)))
    with pytest.raises(ValueError):
        validate(Graph(2, (0b100, 0)))

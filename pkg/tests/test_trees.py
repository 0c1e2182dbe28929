import pytest

from smalluniv.enumeration import all_graphs
from smalluniv.graph import Graph, disjoint_union, empty_graph, induced_subgraph, star_graph
from smalluniv.iso import canonical_graph6, find_embedding, is_isomorphic
from smalluniv.search import all_induced_universal_graphs, is_induced_universal
from smalluniv.trees import (complete_search, make_graph, naive_complete_search,
                             sequence_bound, tree_family)
from smalluniv.enumeration import small_canonical_matrices


def keys(res):
    return sorted(canonical_graph6(g) for g in res.graphs)


def test_make_graph_examples():
    assert make_graph(7, 7, [0] * 7, Graph(0, ())) == star_graph(7)
    g = make_graph(6, 5, [0] * 5, Graph(1, (0,)))
    assert g == disjoint_union(star_graph(5), Graph(1, (0,)))
    for tail in small_canonical_matrices(3):
        g = make_graph(9, 6, [5, 3, 3, 1, 0, 0], tail)
        assert induced_subgraph(g, {6, 7, 8}) == tail
        assert induced_subgraph(g, range(6)) == star_graph(6)


def test_make_graph_row_bits():
    # most significant bit of the row is the first tail vertex
    g = make_graph(5, 3, [0b10, 0, 0b01], empty_graph(2))
    assert g.has_edge(0, 3) and not g.has_edge(0, 4)
    assert g.has_edge(2, 4) and not g.has_edge(2, 3)


def test_make_graph_rejects_bad_dimensions():
    with pytest.raises(ValueError):
        make_graph(6, 5, [0] * 4, Graph(1, (0,)))
    with pytest.raises(ValueError):
        make_graph(6, 5, [0] * 5, empty_graph(2))
    with pytest.raises(ValueError):
        make_graph(6, 5, [2, 0, 0, 0, 0], Graph(1, (0,)))


@pytest.mark.parametrize("n, k, count", [(1, 1, 1), (2, 2, 1), (3, 3, 1), (5, 4, 2), (7, 5, 18),
                                         (9, 6, 66)])
def test_completion_counts(n, k, count):
    assert len(complete_search(n, k).graphs) == count


@pytest.mark.parametrize("n, k", [(4, 4), (5, 5), (6, 6), (6, 5), (8, 6)])
def test_below_minimum_is_empty(n, k):
    assert complete_search(n, k).graphs == []


@pytest.mark.parametrize("n, k", [(5, 4), (6, 5), (7, 5)])
def test_symmetry_breaking_is_sound(n, k):
    fast, slow = complete_search(n, k), naive_complete_search(n, k)
    assert keys(fast) == keys(slow)
    assert fast.matrices_tested <= slow.matrices_tested


def test_naive_examples():
    assert len(naive_complete_search(7, 5).graphs) == 18
    assert len(naive_complete_search(5, 4).graphs) == 2


def test_matches_brute_force_over_all_graphs():
    fam = tree_family(5)
    brute, _ = all_induced_universal_graphs(fam, all_graphs(7))
    assert sorted(map(canonical_graph6, brute)) == keys(complete_search(7, 5))
    fam = tree_family(4)
    brute, _ = all_induced_universal_graphs(fam, all_graphs(5))
    assert sorted(map(canonical_graph6, brute)) == keys(complete_search(5, 4))


def test_results_are_universal_contain_star_and_are_distinct():
    res = complete_search(9, 6)
    fam = tree_family(6)
    for g in res.graphs:
        assert is_induced_universal(fam, g)
        assert find_embedding(star_graph(6), g) is not None
    for i, a in enumerate(res.graphs):
        for b in res.graphs[i + 1:]:
            assert not is_isomorphic(a, b)


def test_sequences_tested_within_bound():
    for n, k in [(5, 4), (7, 5), (9, 6)]:
        res = complete_search(n, k)
        tails = len(small_canonical_matrices(n - k))
        assert res.matrices_tested <= sequence_bound(n, k) * tails
    # the bound is tight for the monotone enumeration
    assert complete_search(9, 6).matrices_tested == sequence_bound(9, 6) * 4


def test_parallel_completion_matches():
    assert keys(complete_search(9, 6, jobs=2)) == keys(complete_search(9, 6))


def test_errors():
    with pytest.raises(ValueError):
        complete_search(12, 6)
    with pytest.raises(ValueError):
        complete_search(4, 5)
    with pytest.raises(ValueError, match="free bits"):
        naive_complete_search(11, 7)

import pytest

from smalluniv.graph import Graph, complete_graph, empty_graph
from smalluniv.heuristic import (ClimbConfig, default_max_iter, hill_climb, make_seed_template,
                                 score)
from smalluniv.iso import induced_subgraph_iso, naive_induced_iso
from smalluniv.search import GraphFamily, family_from_descriptor
from smalluniv.verify import verify_universal
from conftest import universal5_graphs


def test_template_counts():
    t = make_seed_template("clique-indep", 6, 14)
    assert (len(t.frozen_ones), len(t.frozen_zeros), len(t.free_pairs)) == (15, 15, 61)
    assert t.init_probability == 0.5
    t = make_seed_template("star", 6, 9)
    assert (len(t.frozen_ones), len(t.frozen_zeros), len(t.free_pairs)) == (5, 10, 21)
    assert t.init_probability == 0.1


def test_template_regions_share_one_vertex():
    t = make_seed_template("clique-indep", 6, 14)
    clique = {v for p in t.frozen_ones for v in p}
    indep = {v for p in t.frozen_zeros for v in p}
    assert clique & indep == {5}


def test_template_errors():
    with pytest.raises(ValueError):
        make_seed_template("clique-indep", 6, 10)
    with pytest.raises(ValueError):
        make_seed_template("star", 6, 5)
    with pytest.raises(ValueError):
        make_seed_template("wheel", 4, 6)


def test_score_examples():
    f3 = family_from_descriptor("all:3")
    assert score(universal5_graphs()[0], f3, 0) == 4
    assert score(empty_graph(6), f3, 0) == 1
    assert score(complete_graph(5), f3, 4) == -1


def test_default_max_iter():
    assert default_max_iter(6) == 1000 and default_max_iter(7) == 10000


def test_max_iter_must_be_positive():
    with pytest.raises(ValueError):
        ClimbConfig(make_seed_template("star", 4, 5), family_from_descriptor("trees:4"), 0)


def test_empty_family_succeeds_at_once():
    cfg = ClimbConfig(make_seed_template("star", 4, 6), GraphFamily([], "empty"), 10, 5.0, 1)
    trace = []
    g, rec = hill_climb(cfg, trace)
    assert g is not None and rec.stats["iterations"] == 0
    assert trace[0][1] == 0


def test_star_template_finds_order_7_for_trees_of_order_5():
    fam = family_from_descriptor("trees:5")
    g, rec = hill_climb(ClimbConfig(make_seed_template("star", 5, 7), fam, 1000, 60.0, 3))
    assert g is not None and g.order == 7
    assert verify_universal(g, fam).valid
    assert rec.stats["verified"] is True


def _traced_run(seed):
    fam = family_from_descriptor("all:4")
    tpl = make_seed_template("clique-indep", 4, 8)
    trace = []
    g, rec = hill_climb(ClimbConfig(tpl, fam, 200, 60.0, seed, max_restarts=3), trace)
    return tpl, fam, trace, g, rec


def test_frozen_regions_and_monotone_scores():
    tpl, fam, trace, _, _ = _traced_run(5)
    assert trace
    last = {}
    for restart, it, s, rows in trace:
        g = Graph(tpl.order, rows)
        assert all(g.has_edge(u, v) for u, v in tpl.frozen_ones)
        assert not any(g.has_edge(u, v) for u, v in tpl.frozen_zeros)
        assert s >= last.get(restart, -1)
        last[restart] = s


def test_scores_match_naive_count_on_intermediates():
    _, fam, trace, _, _ = _traced_run(6)
    for _, _, s, rows in trace[:: max(1, len(trace) // 15)]:
        g = Graph(8, rows)
        assert s == sum(naive_induced_iso(h, g) for h in fam)


def test_same_seed_same_run():
    a, b = _traced_run(11), _traced_run(11)
    assert a[2] == b[2] and a[3] == b[3]
    assert a[4].stats == b[4].stats


def test_result_is_certified():
    _, fam, _, g, rec = _traced_run(2)
    if g is not None:
        assert verify_universal(g, fam).valid
        assert all(induced_subgraph_iso(h, g) for h in fam)


def test_failure_returns_none():
    # no order-7 graph is universal for all 4-vertex graphs
    fam = family_from_descriptor("all:4")
    cfg = ClimbConfig(make_seed_template("clique-indep", 4, 7), fam, 50, 30.0, 0, max_restarts=2)
    g, rec = hill_climb(cfg)
    assert g is None and rec.results == [] and rec.stats["restarts"] == 2


def test_parallel_workers_find_and_certify():
    fam = family_from_descriptor("trees:5")
    cfg = ClimbConfig(make_seed_template("star", 5, 7), fam, 1000, 60.0, 4, jobs=2)
    g, rec = hill_climb(cfg)
    assert g is not None and verify_universal(g, fam).valid

import json
import random

import pytest

from smalluniv.graph import Graph, complete_graph, empty_graph, induced_subgraph_ordered
from smalluniv.iso import is_isomorphic
from smalluniv.search import family_from_descriptor
from smalluniv.verify import (MatrixFormatError, certificate_json, cross_check,
                              format_matrix_text, parse_matrix_text, replay_witness,
                              verify_universal)
from conftest import DATA, universal5_graphs
from test_iso import random_graph


def load(name):
    return parse_matrix_text((DATA / name).read_text())


def test_order_14_matrix_shape():
    g = load("univ14_all6.txt")
    assert g.order == 14 and g.num_edges() == 45


def test_order_14_certificate():
    cert = verify_universal(load("univ14_all6.txt"), family_from_descriptor("all:6"))
    assert cert.valid and cert.passed == 156


def test_witnesses_replay_through_induced_subgraph():
    g = load("univ14_all6.txt")
    cert = verify_universal(g, family_from_descriptor("all:6"))
    for v in cert.verdicts:
        assert is_isomorphic(induced_subgraph_ordered(g, list(v.witness)), v.member)


def test_clique_is_not_universal():
    cert = verify_universal(complete_graph(14), family_from_descriptor("all:6"))
    assert not cert.valid
    assert empty_graph(6) in cert.failures()
    assert cert.passed == 1


def test_matrix_parse_examples():
    assert parse_matrix_text("0\n") == Graph(1, (0,))
    with pytest.raises(MatrixFormatError, match="row 0, column 0"):
        parse_matrix_text("1 0\n0 0\n")


@pytest.mark.parametrize("text, where", [
    ("0 1\n0 0\n", "row 0, column 1"),
    ("0 1\n1\n", "row 1"),
    ("0 2\n2 0\n", "row 0, column 1"),
])
def test_matrix_errors(text, where):
    with pytest.raises(MatrixFormatError, match=where):
        parse_matrix_text(text)


def test_matrix_round_trip():
    g = load("univ18_all7.txt")
    assert parse_matrix_text(format_matrix_text(g)) == g


def test_replay_rejects_bad_witness():
    g = universal5_graphs()[0]
    assert replay_witness(empty_graph(3), g, (1, 2, 3))
    assert not replay_witness(empty_graph(3), g, (0, 3, 4))
    assert not replay_witness(empty_graph(3), g, (1, 1, 2))


def test_cross_check_examples():
    f3 = family_from_descriptor("all:3")
    assert all(cross_check(g, f3) for g in universal5_graphs())
    assert cross_check(load("univ14_all6.txt"), family_from_descriptor("all:6"))


def test_cross_check_random_order_9_against_five_vertex_graphs():
    f5 = family_from_descriptor("all:5")
    rng = random.Random(2024)
    for _ in range(100):
        assert cross_check(random_graph(9, rng.random(), rng), f5)


def test_reports():
    cert = verify_universal(universal5_graphs()[0], family_from_descriptor("all:3"))
    data = json.loads(certificate_json(cert))
    assert data["valid"] and data["passed"] == 4
    text = cert.to_text()
    assert "VALID  4/4" in text and len(text.splitlines()) == 4 + 4

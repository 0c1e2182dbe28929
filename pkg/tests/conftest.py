from pathlib import Path

import pytest

from smalluniv.graph import Graph

DATA = Path(__file__).parent / "data"

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: dict[str, str] = {}


def universal5_graphs() -> list[Graph]:
    """The five order-5 graphs universal for all 3-vertex graphs."""
    edge_sets = [
        [(0, 3), (0, 4), (1, 4), (3, 4)],
        [(0, 3), (0, 4), (1, 4), (2, 4), (3, 4)],
        [(0, 3), (1, 3), (0, 4), (2, 4), (3, 4)],
        [(0, 3), (1, 3), (0, 4), (1, 4), (3, 4)],
        [(0, 3), (1, 3), (0, 4), (1, 4), (2, 4), (3, 4)],
    ]
    return [Graph.from_edges(5, es) for es in edge_sets]


@pytest.fixture
def first_universal5() -> Graph:
    return universal5_graphs()[0]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])

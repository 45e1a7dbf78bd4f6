from __future__ import annotations

import networkx as nx
import pytest

from dimerflip.lattice import Lattice
from dimerflip.matching import canonical_cycle

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])


def to_networkx(lat: Lattice) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(lat.num_vertices))
    g.add_edges_from(lat.edges())
    return g


def nx_cycles(lat: Lattice, max_len: int) -> list[tuple[int, ...]]:
    """Independent oracle: networkx simple cycles, canonicalised and sorted."""
    g = to_networkx(lat)
    return sorted({canonical_cycle(c) for c in nx.simple_cycles(g, length_bound=max_len)})


@pytest.fixture
def nx_graph():
    return to_networkx

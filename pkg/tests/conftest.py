import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from quasiclique import Block, Graph


@st.composite
def graphs(draw, min_n=0, max_n=10):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, b in zip(pairs, bits) if b])


@st.composite
def graph_and_subset(draw, max_n=10):
    g = draw(graphs(max_n=max_n))
    mask = draw(st.integers(0, (1 << g.n) - 1)) if g.n else 0
    return g, mask


def gnp(n, p, rng):
    """Plain G(n, p) from a numpy generator, independent of the package sampler."""
    upper = np.triu(rng.random((n, n)) < p, k=1)
    return Graph.from_adjacency(upper | upper.T)


@pytest.fixture
def block_kernel():
    return Block((0.0, 0.5, 1.0), ((0.5, 0.2), (0.2, 0.4)))


# acceptance verdict lines, printed at the end of the session
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)

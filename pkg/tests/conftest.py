from pathlib import Path

import pytest

from abckit.core import make_election
from abckit.graphs import make_graph

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def six_voter_election():
    """Six voters over three candidates; the running example for AV/SAV/CC."""
    return make_election(3, 2, [{1}, {1, 3}, {1, 3}, {2, 3}, {2, 3}, {2}])


@pytest.fixture
def equal_shares_election():
    """Four voters, four candidates, k=3; exercises both equal-shares phases."""
    return make_election(4, 3, [{1, 3}, {1, 3}, {1, 2}, {2, 4}])


@pytest.fixture
def k4():
    return make_graph(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])


@pytest.fixture
def k33():
    """Complete bipartite graph on parts {1, 2, 6} / {3, 4, 5}."""
    edges = [(u, v) for u in (1, 2, 6) for v in (3, 4, 5)]
    return make_graph(6, [(min(u, v), max(u, v)) for u, v in edges])


@pytest.fixture
def cycle5():
    return make_graph(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])

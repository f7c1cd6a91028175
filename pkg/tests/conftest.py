import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bmetric import SemimetricSpace


@pytest.fixture
def triple_114():
    """Three points with distances 1, 1, 4: relaxation and polygonal 2."""
    return SemimetricSpace(
        ("a", "b", "c"), np.array([[0, 1, 4], [1, 0, 1], [4, 1, 0]], dtype=float)
    )


@pytest.fixture
def uniform6():
    return SemimetricSpace(tuple("abcdef"), np.ones((6, 6)) - np.eye(6))


def path_graph_metric(n):
    """Shortest-path metric of the n-vertex path graph."""
    idx = np.arange(n)
    d = np.abs(idx[:, None] - idx[None, :]).astype(float)
    return SemimetricSpace(tuple(str(i) for i in range(n)), d)

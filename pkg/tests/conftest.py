from __future__ import annotations

import pytest

from strongpfd import Graph, path_graph, strong_product


def house_graph() -> Graph:
    """Five-cycle with one chord under the apex.

    The apex (vertex 0) has no neighbor that sees it in a singleton class,
    which makes fibers through it invisible to 1-neighborhood analysis in
    products; several tests rely on that.
    """
    return Graph(5, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 4), (3, 4)])


def wheel_graph(rim: int = 5) -> Graph:
    edges = [(i, (i + 1) % rim) for i in range(rim)]
    edges += [(i, rim) for i in range(rim)]
    return Graph(rim + 1, edges)


def neighborhood_blind_product():
    """Product of a path and the house graph; the path-direction fiber over
    the apex satisfies no singleton-class condition in any 1-neighborhood."""
    return strong_product([path_graph(3), house_graph()])


@pytest.fixture(scope="session")
def p3xp3():
    return strong_product([path_graph(3), path_graph(3)])

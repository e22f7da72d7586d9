from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strongpfd import (
    DisconnectedError,
    Graph,
    GraphError,
    complete_graph,
    cycle_graph,
    is_isomorphic,
    path_graph,
    strong_product,
)


def test_rejects_self_loops_and_bad_ids():
    with pytest.raises(GraphError):
        Graph(3, [(0, 0)])
    with pytest.raises(GraphError):
        Graph(3, [(0, 3)])
    with pytest.raises(GraphError):
        Graph(-1)


def test_duplicate_edges_collapse():
    g = Graph(3, [(0, 1), (1, 0), (0, 1)])
    assert g.edge_count == 1


def test_closed_neighborhood_p3():
    p3 = path_graph(3)
    assert p3.closed_neighborhood(1) == (0, 1, 2)
    assert p3.closed_neighborhood(0) == (0, 1)


def test_closed_neighborhood_c5_size():
    c5 = cycle_graph(5)
    for v in c5.vertices():
        assert len(c5.closed_neighborhood(v)) == 3


def test_closed_neighborhood_contains_self():
    g = Graph(4, [(0, 1), (2, 3), (1, 2)])
    for v in g.vertices():
        assert v in g.closed_neighborhood(v)


def test_n_neighborhood_radius_zero_and_path():
    p5 = path_graph(5)
    assert p5.n_neighborhood(2, 0) == (2,)
    assert p5.n_neighborhood(0, 2) == (0, 1, 2)


def test_n_neighborhood_matches_closed_at_radius_one():
    g = Graph(6, [(0, 1), (0, 2), (2, 3), (3, 4), (1, 4), (4, 5)])
    for v in g.vertices():
        assert g.n_neighborhood(v, 1) == g.closed_neighborhood(v)


def test_n_neighborhood_product_center(p3xp3):
    graph, coords = p3xp3
    center = coords.vertex_at((1, 1))
    assert graph.n_neighborhood(center, 1) == tuple(range(9))


def test_induced_subgraph_full_is_isomorphic():
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)])
    sub, mapping = g.induced_subgraph(g.vertices())
    assert mapping == {v: v for v in g.vertices()}
    assert sub == g


def test_induced_subgraph_c5_arc_is_p3():
    c5 = cycle_graph(5)
    sub, _ = c5.induced_subgraph([1, 2, 3])
    assert is_isomorphic(sub, path_graph(3))


def test_induced_subgraph_of_corner_neighborhood_is_k4(p3xp3):
    graph, coords = p3xp3
    corner = coords.vertex_at((0, 0))
    sub, _ = graph.induced_subgraph(graph.closed_neighborhood(corner))
    assert is_isomorphic(sub, complete_graph(4))


def test_induced_subgraph_empty_rejected():
    with pytest.raises(GraphError):
        path_graph(3).induced_subgraph([])


def test_distance_basics():
    p4 = path_graph(4)
    assert p4.distance(0, 0) == 0
    assert p4.distance(0, 3) == 3
    assert p4.distance(3, 0) == 3


def test_distance_unreachable_raises():
    g = Graph(4, [(0, 1), (2, 3)])
    with pytest.raises(DisconnectedError):
        g.distance(0, 3)


def test_connectivity_and_degrees():
    assert Graph(1).is_connected()
    assert Graph(1).max_degree() == 0
    two_edges = Graph(4, [(0, 1), (2, 3)])
    assert not two_edges.is_connected()
    c5 = cycle_graph(5)
    assert c5.is_connected()
    assert c5.max_degree() == 2
    assert c5.degree(0) == 2


def test_relabeled_roundtrip():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    perm = [2, 0, 3, 1]
    h = g.relabeled(perm)
    assert is_isomorphic(g, h)
    inverse = [0] * 4
    for old, new in enumerate(perm):
        inverse[new] = old
    assert h.relabeled(inverse) == g


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**30), st.integers(min_value=2, max_value=9))
def test_random_graph_invariants(seed, n):
    rng = random.Random(seed)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5
    ]
    g = Graph(n, edges)
    for v in g.vertices():
        assert v in g.closed_neighborhood(v)
        ball1 = set(g.n_neighborhood(v, 1))
        ball2 = set(g.n_neighborhood(v, 2))
        assert ball1 <= ball2
    if g.is_connected() and n >= 3:
        a, b, c = rng.sample(range(n), 3)
        assert g.distance(a, c) <= g.distance(a, b) + g.distance(b, c)


def test_distance_on_product_is_max_of_factor_distances():
    rng = random.Random(5)
    p4, c5 = path_graph(4), cycle_graph(5)
    graph, coords = strong_product([p4, c5])
    for _ in range(50):
        u, v = rng.randrange(20), rng.randrange(20)
        cu, cv = coords.coords[u], coords.coords[v]
        expected = max(p4.distance(cu[0], cv[0]), c5.distance(cu[1], cv[1]))
        assert graph.distance(u, v) == expected

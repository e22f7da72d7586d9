from __future__ import annotations

import random

import pytest

from strongpfd import (
    GraphError,
    backbone,
    backbone_bfs,
    cartesian_index,
    color_fibers_from,
    cycle_graph,
    extend_to_s1_fibers,
    is_isomorphic,
    oracle_pfd,
    path_graph,
    strong_product,
)
from strongpfd.graph import edge_key
from strongpfd.oracle import random_thin_graph
from strongpfd.recognize import _fiber_component

from conftest import neighborhood_blind_product, wheel_graph


def test_covering_sequence_on_prime_graphs_covers_backbone():
    rng = random.Random(4)
    found = 0
    trial = 0
    while found < 6 and trial < 60:
        trial += 1
        g = random_thin_graph(rng.randint(3, 9), rng.uniform(0.35, 0.6), seed=11000 + trial)
        if oracle_pfd(g).prime_count != 1:
            continue
        found += 1
        members = backbone(g)
        seq = backbone_bfs(g, members, members[0], 0)
        assert set(seq.vertices) == set(members)
        covered = set()
        for w in seq.vertices:
            covered.update(g.closed_neighborhood(w))
        assert covered == set(g.vertices())
    assert found == 6


def test_covering_sequence_single_vertex_backbones(p3xp3):
    graph, coords = p3xp3
    center = coords.vertex_at((1, 1))
    seq = backbone_bfs(graph, backbone(graph), center, 0)
    assert seq.vertices == (center,)
    w5 = wheel_graph(5)
    seq = backbone_bfs(w5, backbone(w5), 5, 0)
    assert seq.vertices == (5,)


def test_backbone_bfs_validates_anchor_and_color(p3xp3):
    graph, _ = p3xp3
    with pytest.raises(GraphError):
        backbone_bfs(graph, backbone(graph), 0, 0)  # corner is not backbone
    with pytest.raises(GraphError):
        backbone_bfs(graph, backbone(graph), 4, 5)


def test_color_fibers_p3_product(p3xp3):
    graph, coords = p3xp3
    center = coords.vertex_at((1, 1))
    coloring = color_fibers_from(graph, center)
    assert len(coloring.palette) == 2
    # every colored edge is a ground-truth product edge with consistent label
    label_dir = {}
    for (u, v), raw in coloring.colors.items():
        true_dir = cartesian_index(graph, coords, u, v)
        assert true_dir is not None
        assert label_dir.setdefault(raw, true_dir) == true_dir
    # both fibers through the anchor are complete, two edges each
    for raw in (0, 1):
        members = _fiber_component(graph, coloring.colors, raw, center)
        assert len(members) == 3
        edges = [
            e for e, c in coloring.colors.items() if c == raw and set(e) <= set(members)
        ]
        assert len(edges) == 2
    # all four parallel copies are colored too
    assert len(coloring.colors) == 12


def test_color_fibers_recovers_both_factors():
    graph, coords = strong_product([path_graph(4), cycle_graph(5)])
    anchor = min(backbone(graph))
    coloring = color_fibers_from(graph, anchor)
    shapes = []
    for raw in range(len(coloring.palette)):
        members = _fiber_component(graph, coloring.colors, raw, anchor)
        sub, _ = graph.induced_subgraph(members)
        shapes.append(sub)
    assert sorted(s.vertex_count for s in shapes) == [4, 5]
    assert any(is_isomorphic(s, path_graph(4)) for s in shapes)
    assert any(is_isomorphic(s, cycle_graph(5)) for s in shapes)


def test_color_fibers_on_prime_cycle_covers_all_edges():
    g = cycle_graph(7)
    anchor = min(backbone(g))
    coloring = color_fibers_from(g, anchor)
    assert len(coloring.palette) == 1
    assert set(coloring.colors) == set(g.edges())


def test_blind_fiber_stays_uncolored():
    graph, coords = neighborhood_blind_product()
    anchor = min(backbone(graph))
    coloring = color_fibers_from(graph, anchor)
    fiber = [v for v in range(graph.vertex_count) if coords.coords[v][1] == 0]
    blind_edges = [
        edge_key(u, v) for u in fiber for v in fiber if u < v and graph.adjacent(u, v)
    ]
    for e in blind_edges:
        assert e not in coloring.colors
    # while plenty of other product edges are colored
    assert len(coloring.colors) > 10


def test_mismatched_local_counts_abort(p3xp3):
    # a pendant hung off a product corner promotes the corner into the
    # backbone with a prime neighborhood, while the center still factors
    # into two parts; the anchored run must refuse to continue
    from strongpfd import ColoringError, Graph, backbone as bb

    base, _ = p3xp3
    graph = Graph(10, list(base.edges()) + [(0, 9)])
    assert bb(graph) == (0, 4)
    with pytest.raises(ColoringError, match="local factors"):
        color_fibers_from(graph, 0)


def test_extend_is_idempotent_after_run(p3xp3):
    graph, coords = p3xp3
    center = coords.vertex_at((1, 1))
    coloring = color_fibers_from(graph, center)
    before = dict(coloring.colors)
    assert extend_to_s1_fibers(graph, coloring) == 0
    assert coloring.colors == before


def test_coloring_is_deterministic():
    graph, _ = strong_product([path_graph(4), cycle_graph(5)])
    anchor = min(backbone(graph))
    a = color_fibers_from(graph, anchor)
    b = color_fibers_from(graph, anchor)
    assert a.colors == b.colors
    assert a.stages == b.stages
    assert [(c.anchor, c.local_index) for c in a.palette] == [
        (c.anchor, c.local_index) for c in b.palette
    ]


def test_anchor_choice_gives_same_partition_where_both_color():
    # coverage depends on the anchor, but on the commonly colored edges the
    # class structure must agree up to renaming
    graph, _ = strong_product([path_graph(4), cycle_graph(5)])
    anchors = backbone(graph)
    colorings = [color_fibers_from(graph, anchor) for anchor in anchors[:3]]
    for other in colorings[1:]:
        common = set(colorings[0].colors) & set(other.colors)
        assert common

        def restricted(coloring):
            classes = {}
            for e in common:
                classes.setdefault(coloring.colors[e], set()).add(e)
            return {frozenset(s) for s in classes.values()}

        assert restricted(colorings[0]) == restricted(other)

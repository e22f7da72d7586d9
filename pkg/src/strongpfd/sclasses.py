"""Neighborhood-equivalence machinery: relative classes, thinness, quotient,
backbone, and witnesses for the singleton-class edge condition.

Two vertices are equivalent relative to a vertex subset H when their closed
neighborhoods intersected with H coincide.  The backbone is the set of
vertices whose closed neighborhood is strictly maximal; on thin connected
graphs it induces a connected dominating set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .graph import Graph, GraphError, VertexSet


class NotThinError(GraphError):
    """Operation requires a thin graph (all global classes singletons)."""


@dataclass(frozen=True)
class SPartition:
    """Partition of ``host`` by the fingerprint N[x] intersected with host."""

    host: VertexSet
    classes: tuple[VertexSet, ...]
    class_index: dict[int, int] = field(compare=False)

    def class_of(self, v: int) -> VertexSet:
        return self.classes[self.class_index[v]]


@dataclass(frozen=True)
class QuotientResult:
    quotient: Graph
    class_map: tuple[int, ...]
    class_members: tuple[VertexSet, ...]


def relative_s_partition(graph: Graph, host: Iterable[int]) -> SPartition:
    """Group the vertices of ``host`` by their closed neighborhood within it."""
    members = tuple(sorted(set(host)))
    if not members:
        raise GraphError("relative partition of an empty host set")
    host_mask = 0
    for v in members:
        host_mask |= 1 << v
    masks = graph.closed_masks
    groups: dict[int, list[int]] = {}
    for v in members:
        groups.setdefault(masks[v] & host_mask, []).append(v)
    classes = tuple(tuple(g) for g in sorted(groups.values(), key=lambda g: g[0]))
    class_index = {v: i for i, cls in enumerate(classes) for v in cls}
    return SPartition(host=members, classes=classes, class_index=class_index)


def s_class_size(graph: Graph, z: int, x: int) -> int:
    """Size of the class of x relative to the closed neighborhood of z."""
    masks = graph.closed_masks
    zmask = masks[z]
    if not (zmask >> x) & 1:
        raise GraphError(f"vertex {x} is not in the closed neighborhood of {z}")
    target = masks[x] & zmask
    count = 0
    m = zmask
    while m:
        low = m & -m
        w = low.bit_length() - 1
        if masks[w] & zmask == target:
            count += 1
        m ^= low
    return count


def is_thin(graph: Graph) -> bool:
    """True iff no two vertices share a closed neighborhood."""
    return len(set(graph.closed_masks)) == graph.vertex_count


def quotient(graph: Graph) -> QuotientResult:
    """Collapse every global class to one vertex; the result is thin."""
    n = graph.vertex_count
    if n == 0:
        return QuotientResult(Graph(0), (), ())
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(graph.closed_masks[v], []).append(v)
    classes = tuple(tuple(g) for g in sorted(groups.values(), key=lambda g: g[0]))
    class_map = [0] * n
    for i, cls in enumerate(classes):
        for v in cls:
            class_map[v] = i
    edges = set()
    for u, v in graph.edges():
        cu, cv = class_map[u], class_map[v]
        if cu != cv:
            edges.add((min(cu, cv), max(cu, cv)))
    return QuotientResult(Graph(len(classes), sorted(edges)), tuple(class_map), classes)


def backbone(graph: Graph) -> VertexSet:
    """Vertices whose closed neighborhood is strictly maximal.

    Equivalently the vertices whose own class relative to their neighborhood
    is a singleton.  Requires a thin connected graph.
    """
    if not graph.is_connected():
        raise GraphError("backbone requires a connected graph")
    if not is_thin(graph):
        raise NotThinError("backbone requires a thin graph; quotient first")
    masks = graph.closed_masks
    result = []
    for v in graph.vertices():
        mv = masks[v]
        if all(mv | masks[u] != masks[u] for u in graph.neighbors(v)):
            result.append(v)
    return tuple(result)


def s1_witness(
    graph: Graph,
    u: int,
    v: int,
    backbone_vertices: VertexSet | None = None,
) -> int | None:
    """Witness z with u, v in N[z] and a singleton class at u or v, if any.

    Backbone vertices are searched first in ascending order, then the rest,
    so a backbone witness is returned whenever one exists.
    """
    if not graph.adjacent(u, v):
        raise GraphError(f"({u}, {v}) is not an edge")
    if not is_thin(graph):
        raise NotThinError("the singleton-class condition is defined on thin graphs")
    if backbone_vertices is None:
        backbone_vertices = backbone(graph)
    bset = set(backbone_vertices)
    masks = graph.closed_masks
    common = masks[u] & masks[v]
    candidates = []
    m = common
    while m:
        low = m & -m
        candidates.append(low.bit_length() - 1)
        m ^= low
    ordered = [z for z in candidates if z in bset] + [z for z in candidates if z not in bset]
    for z in ordered:
        if s_class_size(graph, z, u) == 1 or s_class_size(graph, z, v) == 1:
            return z
    return None

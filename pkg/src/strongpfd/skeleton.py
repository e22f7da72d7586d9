"""Colored Cartesian skeleton assembly: all-anchor fiber coloring, square
merging of parallel fiber colors, and the 2-neighborhood sweep for product
edges that no 1-neighborhood can certify.

Raw colors are opened per (anchor, local factor); classes that must belong
to one factor are merged through a union-find, either because two anchors
colored a common edge or because a diagonal-free square pairs their edges.
The expensive 2-neighborhood sweep runs only when the colored structure
does not already verify as a product; on locally unrefined inputs whose
fibers are all witnessed it is skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Edge, Graph, GraphError, edge_key
from .coloring import (
    STAGE_COMPLETION,
    STAGE_LIFT,
    STAGE_N2,
    ColoringError,
    NeighborhoodCache,
    PartialProductColoring,
    color_fibers_from,
    completion_sweep,
)
from .factorize import FactorSizeError, factor_exact
from .products import cartesian_index
from .sclasses import NotThinError, backbone, is_thin, quotient

_STAGE_RANK = {STAGE_LIFT: 0, STAGE_COMPLETION: 1, STAGE_N2: 2}


class SkeletonError(RuntimeError):
    """Skeleton construction failed; carries the originating diagnostic."""


class UnionFind:
    """Disjoint sets over dense integer ids, path compression + union by size."""

    def __init__(self) -> None:
        self.parent: list[int] = []
        self.size: list[int] = []

    def add(self) -> int:
        self.parent.append(len(self.parent))
        self.size.append(1)
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass
class ColoredSkeleton:
    """Final product coloring: every identified Cartesian edge with its color."""

    graph: Graph
    edge_color: dict[Edge, int]
    n_colors: int
    stage_of: dict[Edge, str]
    local_prime_counts: dict[int, int]
    n2_prime_counts: dict[int, int] = field(default_factory=dict)
    n2_ran: bool = False
    diagnostics: list[str] = field(default_factory=list)

    @property
    def cartesian_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edge_color))

    def stage_counts(self) -> dict[str, int]:
        counts = {STAGE_LIFT: 0, STAGE_COMPLETION: 0, STAGE_N2: 0}
        for stage in self.stage_of.values():
            counts[stage] += 1
        return counts


def find_square(graph: Graph, e: Edge, f: Edge) -> tuple[int, int, int, int] | None:
    """The unique diagonal-free 4-cycle through two incident edges, if any.

    Returns (u, p, d, q) walking the cycle, where u is the shared endpoint;
    None when no such square exists or it is not unique.  Diagonals are
    checked against the edges of ``graph`` itself, so pass the skeleton
    subgraph when searching within identified product edges.
    """
    shared = set(e) & set(f)
    if len(shared) != 1:
        raise GraphError(f"edges {e} and {f} are not incident at one vertex")
    u = shared.pop()
    p = e[0] if e[1] == u else e[1]
    q = f[0] if f[1] == u else f[1]
    if graph.adjacent(p, q):
        return None
    candidates = [
        d
        for d in graph.adjacency_set(p) & graph.adjacency_set(q)
        if d != u and not graph.adjacent(d, u)
    ]
    if len(candidates) != 1:
        return None
    return (u, p, candidates[0], q)


def merge_parallel_colors(
    graph: Graph, edge_color: dict[Edge, int], uf: UnionFind
) -> int:
    """Union colors of opposite edges over every diagonal-free skeleton square.

    Iterates incident differently-colored edge pairs (ordered by shared
    vertex, then neighbor ids) until no merge fires.  Returns the number of
    unions performed.
    """
    skeleton = Graph(graph.vertex_count, edge_color.keys())
    merged_total = 0
    while True:
        merged = 0
        for u in skeleton.vertices():
            nbrs = skeleton.neighbors(u)
            for i, p in enumerate(nbrs):
                for q in nbrs[i + 1 :]:
                    ep, eq = edge_key(u, p), edge_key(u, q)
                    if uf.find(edge_color[ep]) == uf.find(edge_color[eq]):
                        continue
                    square = find_square(skeleton, ep, eq)
                    if square is None:
                        continue
                    _, sp, d, sq = square
                    if uf.union(edge_color[ep], edge_color[edge_key(sq, d)]):
                        merged += 1
                    if uf.union(edge_color[eq], edge_color[edge_key(sp, d)]):
                        merged += 1
        merged_total += merged
        if not merged:
            return merged_total


def n2_sweep(
    graph: Graph,
    edge_color: dict[Edge, int],
    uf: UnionFind,
    stage_of: dict[Edge, str],
    size_cap: int | None = None,
    targets: list[int] | None = None,
) -> dict[int, int]:
    """Identify product edges inside 2-neighborhoods of under-colored vertices.

    For each target vertex (default: every vertex with an uncolored incident
    edge), the 2-neighborhood is factored through its quotient; the center's
    class is a singleton in a thin graph, so every product edge at the
    center is identified and gets a fresh raw color.  Returns the per-vertex
    prime counts observed.
    """
    if targets is None:
        targets = [
            v
            for v in graph.vertices()
            if any(edge_key(v, w) not in edge_color for w in graph.neighbors(v))
        ]
    targets = sorted(targets)
    counts: dict[int, int] = {}
    fresh: dict[tuple[int, int], int] = {}
    for x in targets:
        members = graph.n_neighborhood(x, 2)
        sub, to_sub = graph.induced_subgraph(members)
        host_of = {h: g for g, h in to_sub.items()}
        quot = quotient(sub)
        if size_cap is not None and quot.quotient.vertex_count > size_cap:
            raise SkeletonError(
                f"N2 sweep infeasible at this degree: quotient of the "
                f"2-neighborhood of {x} has {quot.quotient.vertex_count} vertices, "
                f"cap is {size_cap}"
            )
        try:
            fact = factor_exact(quot.quotient, size_cap=size_cap)
        except FactorSizeError as exc:
            raise SkeletonError(f"N2 sweep infeasible at this degree: {exc}") from exc
        counts[x] = fact.prime_count
        qx = quot.class_map[to_sub[x]]
        if len(quot.class_members[qx]) != 1:
            raise SkeletonError(
                f"2-neighborhood class of {x} is not a singleton; host graph is not thin"
            )
        if not fact.factors:
            continue
        assert fact.coords is not None
        for qy in quot.quotient.neighbors(qx):
            idx = cartesian_index(quot.quotient, fact.coords, qx, qy)
            if idx is None:
                continue
            for hy in quot.class_members[qy]:
                edge = edge_key(x, host_of[hy])
                if edge in edge_color:
                    continue
                key = (x, idx)
                color = fresh.get(key)
                if color is None:
                    color = uf.add()
                    fresh[key] = color
                edge_color[edge] = color
                stage_of[edge] = STAGE_N2
    return counts


def _note_stage(stage_of: dict[Edge, str], edge: Edge, stage: str) -> None:
    old = stage_of.get(edge)
    if old is None or _STAGE_RANK[stage] < _STAGE_RANK[old]:
        stage_of[edge] = stage


def _renumber(edge_color: dict[Edge, int], uf: UnionFind) -> tuple[dict[Edge, int], int]:
    final: dict[Edge, int] = {}
    relabel: dict[int, int] = {}
    for edge in sorted(edge_color):
        root = uf.find(edge_color[edge])
        if root not in relabel:
            relabel[root] = len(relabel)
        final[edge] = relabel[root]
    return final, len(relabel)


def build_skeleton(
    graph: Graph,
    size_cap: int | None = None,
    cache: NeighborhoodCache | None = None,
) -> ColoredSkeleton:
    """Assemble the full colored skeleton of a thin connected graph.

    Runs the anchored fiber coloring from every backbone vertex, merges the
    per-anchor colors through shared edges and diagonal-free squares, and
    falls back to the 2-neighborhood sweep when the result does not already
    verify as a product coloring.
    """
    if not graph.is_connected():
        raise GraphError("skeleton construction requires a connected graph")
    if not is_thin(graph):
        raise NotThinError("skeleton construction requires a thin graph")
    from .recognize import product_coordinates  # local import; recognizer uses us too

    anchors = backbone(graph)
    if cache is None:
        cache = NeighborhoodCache(graph, size_cap)
    uf = UnionFind()
    edge_color: dict[Edge, int] = {}
    stage_of: dict[Edge, str] = {}
    diagnostics: list[str] = []

    for anchor in anchors:
        try:
            partial = color_fibers_from(
                graph, anchor, backbone_vertices=anchors, cache=cache, size_cap=size_cap
            )
        except ColoringError as exc:
            raise SkeletonError(str(exc)) from exc
        raw_to_global = [uf.add() for _ in partial.palette]
        for edge, raw in partial.colors.items():
            color = raw_to_global[raw]
            existing = edge_color.get(edge)
            if existing is None:
                edge_color[edge] = color
            else:
                uf.union(existing, color)
            _note_stage(stage_of, edge, partial.stages[edge])

    merge_parallel_colors(graph, edge_color, uf)
    counts = {v: cache.entries[v].prime_count for v in cache.entries}

    final, n_colors = _renumber(edge_color, uf)
    skeleton = ColoredSkeleton(
        graph=graph,
        edge_color=final,
        n_colors=n_colors,
        stage_of=dict(stage_of),
        local_prime_counts=counts,
    )
    ok, _, _, diag = product_coordinates(graph, final, n_colors)
    if ok:
        return skeleton

    # The colored structure is not yet a product coloring: hunt for product
    # edges that have no witness in any 1-neighborhood.  Vertices sitting in
    # undersized fibers of some color are swept first; if that does not
    # repair the coloring, every under-colored vertex is swept.
    n2_counts: dict[int, int] = {}
    swept: set[int] = set()
    for attempt in range(2):
        if attempt == 0:
            targets = _undersized_fiber_vertices(graph, final, n_colors)
        else:
            targets = [
                v
                for v in graph.vertices()
                if any(edge_key(v, w) not in edge_color for w in graph.neighbors(v))
            ]
        targets = [v for v in targets if v not in swept]
        swept.update(targets)
        if targets:
            n2_counts.update(
                n2_sweep(graph, edge_color, uf, stage_of, size_cap=size_cap, targets=targets)
            )
            coloring = PartialProductColoring()
            coloring.colors = edge_color
            coloring.stages = stage_of
            completion_sweep(graph, coloring, stage=STAGE_N2)
            merge_parallel_colors(graph, edge_color, uf)
            final, n_colors = _renumber(edge_color, uf)
        ok, _, _, diag = product_coordinates(graph, final, n_colors)
        if ok:
            break
    skeleton = ColoredSkeleton(
        graph=graph,
        edge_color=final,
        n_colors=n_colors,
        stage_of=dict(stage_of),
        local_prime_counts=counts,
        n2_prime_counts=n2_counts,
        n2_ran=True,
        diagnostics=diagnostics,
    )
    if not ok:
        diagnostics.extend(diag)
    return skeleton


def _undersized_fiber_vertices(
    graph: Graph, edge_color: dict[Edge, int], n_colors: int
) -> list[int]:
    """Vertices lying in a smaller-than-maximal fiber of some color."""
    targets: set[int] = set()
    for color in range(n_colors):
        adj: dict[int, list[int]] = {v: [] for v in graph.vertices()}
        for (u, v), c in edge_color.items():
            if c == color:
                adj[u].append(v)
                adj[v].append(u)
        comp = [-1] * graph.vertex_count
        sizes: list[int] = []
        for v in graph.vertices():
            if comp[v] >= 0:
                continue
            comp[v] = len(sizes)
            stack = [v]
            count = 0
            while stack:
                u = stack.pop()
                count += 1
                for w in adj[u]:
                    if comp[w] < 0:
                        comp[w] = comp[v]
                        stack.append(w)
            sizes.append(count)
        top = max(sizes)
        if min(sizes) != top:
            targets.update(v for v in graph.vertices() if sizes[comp[v]] < top)
    return sorted(targets)

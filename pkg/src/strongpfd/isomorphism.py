"""Exact graph isomorphism for small graphs.

Two routes: a canonical form built by color refinement with backtracking
individualization (equal byte strings iff isomorphic), and a direct
backtracking isomorphism search that also produces a witness bijection.
Both are exponential in the worst case; intended for graphs up to a few
dozen vertices.
"""

from __future__ import annotations

from .graph import Graph


def _refine(graph: Graph, colors: list[int]) -> list[int]:
    """Iterate (color, sorted neighbor colors) re-ranking until stable."""
    n = graph.vertex_count
    while True:
        keys = [
            (colors[v], tuple(sorted(colors[u] for u in graph.neighbors(v))))
            for v in range(n)
        ]
        rank = {k: i for i, k in enumerate(sorted(set(keys)))}
        new = [rank[keys[v]] for v in range(n)]
        if new == colors:
            return new
        colors = new


def _adjacency_code(graph: Graph, order: list[int]) -> bytes:
    """Upper-triangle adjacency bits of the graph relabeled by ``order``."""
    n = graph.vertex_count
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    bits = 0
    idx = 0
    for i in range(n):
        u = order[i]
        adj = graph.adjacency_set(u)
        for j in range(i + 1, n):
            if order[j] in adj:
                bits |= 1 << idx
            idx += 1
    return bits.to_bytes((idx + 7) // 8 or 1, "big")


def canonical_form(graph: Graph) -> bytes:
    """Canonical byte string: equal for two graphs iff they are isomorphic."""
    n = graph.vertex_count
    if n == 0:
        return b"\x00"
    best: list[bytes | None] = [None]

    def search(colors: list[int]) -> None:
        colors = _refine(graph, colors)
        cells: dict[int, list[int]] = {}
        for v in range(n):
            cells.setdefault(colors[v], []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            order = sorted(range(n), key=lambda v: colors[v])
            code = _adjacency_code(graph, order)
            if best[0] is None or code < best[0]:
                best[0] = code
            return
        for v in target:
            branched = list(colors)
            branched[v] = -1
            search(branched)

    search([graph.degree(v) for v in range(n)])
    assert best[0] is not None
    return n.to_bytes(4, "big") + best[0]


def _profiles(graph: Graph) -> list[tuple[int, tuple[int, ...]]]:
    return [
        (graph.degree(v), tuple(sorted(graph.degree(u) for u in graph.neighbors(v))))
        for v in graph.vertices()
    ]


def find_isomorphism(g1: Graph, g2: Graph) -> dict[int, int] | None:
    """Vertex bijection g1 -> g2 preserving adjacency exactly, or None."""
    n = g1.vertex_count
    if n != g2.vertex_count or g1.edge_count != g2.edge_count:
        return None
    p1, p2 = _profiles(g1), _profiles(g2)
    if sorted(p1) != sorted(p2):
        return None
    if n == 0:
        return {}

    # candidate targets per source vertex, filtered by local profile
    cands = [[u for u in range(n) if p2[u] == p1[v]] for v in range(n)]

    # order the source vertices: rarest profile first, then expand by adjacency
    # so every later vertex has a mapped neighbor where possible
    remaining = set(range(n))
    order: list[int] = []
    while remaining:
        attached = [v for v in remaining if any(u in order for u in g1.neighbors(v))]
        pool = attached if order and attached else list(remaining)
        v = min(pool, key=lambda x: (len(cands[x]), x))
        order.append(v)
        remaining.discard(v)

    mapping: dict[int, int] = {}
    used = [False] * n

    def extend(idx: int) -> bool:
        if idx == n:
            return True
        v = order[idx]
        for u in cands[v]:
            if used[u]:
                continue
            ok = True
            for w, t in mapping.items():
                if g1.adjacent(v, w) != g2.adjacent(u, t):
                    ok = False
                    break
            if ok:
                mapping[v] = u
                used[u] = True
                if extend(idx + 1):
                    return True
                del mapping[v]
                used[u] = False
        return False

    if extend(0):
        return dict(mapping)
    return None


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    return find_isomorphism(g1, g2) is not None

"""Graph file formats: edge-list text, JSON, and DOT output with edge colors.

Edge-list format: first line ``n m``, then m lines ``u v`` with 0-based ids.
JSON format: ``{"n": int, "edges": [[u, v], ...]}``.  Both loaders validate
simplicity (no loops, no duplicates) and id ranges.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .graph import Edge, Graph, GraphError, edge_key


def loads_edgelist(text: str) -> Graph:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines:
        raise GraphError("empty edge-list input")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphError(f"header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphError(f"non-integer header {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise GraphError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    seen: set[Edge] = set()
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphError(f"non-integer edge line {ln!r}") from exc
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        key = edge_key(u, v)
        if key in seen:
            raise GraphError(f"duplicate edge {key}")
        seen.add(key)
        edges.append(key)
    return Graph(n, edges)


def dumps_edgelist(graph: Graph) -> str:
    lines = [f"{graph.vertex_count} {graph.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def graph_to_dict(graph: Graph) -> dict:
    return {"n": graph.vertex_count, "edges": [[u, v] for u, v in graph.edges()]}


def graph_from_dict(data: dict) -> Graph:
    if not isinstance(data, dict) or "n" not in data or "edges" not in data:
        raise GraphError("graph JSON needs 'n' and 'edges' keys")
    edges = data["edges"]
    seen: set[Edge] = set()
    pairs = []
    for item in edges:
        if not (isinstance(item, (list, tuple)) and len(item) == 2):
            raise GraphError(f"bad edge entry {item!r}")
        u, v = int(item[0]), int(item[1])
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        key = edge_key(u, v)
        if key in seen:
            raise GraphError(f"duplicate edge {key}")
        seen.add(key)
        pairs.append(key)
    return Graph(int(data["n"]), pairs)


def load_graph(path: str | Path, fmt: str | None = None) -> Graph:
    """Load a graph from ``path``; format inferred from the suffix unless given."""
    path = Path(path)
    text = path.read_text()
    if fmt is None:
        fmt = "json" if path.suffix.lower() == ".json" else "edgelist"
    if fmt == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON in {path}: {exc}") from exc
        return graph_from_dict(data)
    if fmt == "edgelist":
        return loads_edgelist(text)
    raise GraphError(f"unknown graph format {fmt!r}")


def save_graph(graph: Graph, path: str | Path, fmt: str | None = None) -> None:
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix.lower() == ".json" else "edgelist"
    if fmt == "json":
        path.write_text(json.dumps(graph_to_dict(graph), sort_keys=True) + "\n")
    elif fmt == "edgelist":
        path.write_text(dumps_edgelist(graph))
    else:
        raise GraphError(f"unknown graph format {fmt!r}")


# -- DOT emission -----------------------------------------------------------

_DOT_EDGE = re.compile(r"^\s*(\d+)\s*--\s*(\d+)\s*(?:\[.*?colorclass=\"(\d+)\".*?\])?\s*;?\s*$")

_PALETTE = [
    "black", "red", "blue", "forestgreen", "darkorange", "purple",
    "deeppink", "teal", "saddlebrown", "gray40",
]


def write_dot(graph: Graph, edge_colors: dict[Edge, int] | None = None, name: str = "G") -> str:
    """Render the graph in DOT syntax, tagging colored edges with ``colorclass``."""
    out = [f"graph {name} {{"]
    for v in graph.vertices():
        out.append(f"  {v};")
    for u, v in graph.edges():
        color = None if edge_colors is None else edge_colors.get(edge_key(u, v))
        if color is None:
            out.append(f"  {u} -- {v};")
        else:
            dot_color = _PALETTE[color % len(_PALETTE)]
            out.append(f'  {u} -- {v} [colorclass="{color}", color="{dot_color}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def parse_dot_edge_colors(text: str) -> dict[Edge, int]:
    """Recover the edge -> color-class map from DOT text written by write_dot."""
    colors: dict[Edge, int] = {}
    for line in text.splitlines():
        m = _DOT_EDGE.match(line)
        if m and m.group(3) is not None:
            colors[edge_key(int(m.group(1)), int(m.group(2)))] = int(m.group(3))
    return colors

"""Multigraphs with loops and parallel edges, spanning trees and named families.

Edges are stored as an ordered list of ``(tail, head)`` pairs. The position in
that list is the edge id and the pair order is the edge orientation; nothing
else in the package orients edges.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path

from .errors import GraphDisconnectedError, InvalidParameterError

__all__ = [
    "MultiGraph",
    "SpanningTree",
    "UnionFind",
    "betti_number",
    "spanning_tree",
    "components",
    "is_connected_base",
    "make_family",
    "parse_family",
    "FAMILIES",
    "bouquet",
    "barbell",
    "cycle",
    "complete",
    "path",
    "theta",
    "dumbbell",
]


class UnionFind:
    """Disjoint sets over ``0..size-1`` with path halving and union by size."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size
        self.count = size

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True


@dataclass(frozen=True)
class MultiGraph:
    """Undirected multigraph with a fixed orientation on every edge.

    Loops ``(v, v)`` and repeated pairs are allowed. A loop contributes 2 to
    the degree of its vertex.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if self.vertex_count < 1:
            raise InvalidParameterError("a graph needs at least one vertex")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise InvalidParameterError(
                    f"edge ({u}, {v}) has an endpoint outside 0..{self.vertex_count - 1}"
                )
        object.__setattr__(self, "edges", edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[tuple[int, int, bool], ...], ...]:
        """Per vertex, ``(edge_id, other_end, forward)`` in edge-id order.

        A loop appears twice at its vertex, once per direction.
        """
        inc: list[list[tuple[int, int, bool]]] = [[] for _ in range(self.vertex_count)]
        for e, (u, v) in enumerate(self.edges):
            inc[u].append((e, v, True))
            inc[v].append((e, u, False))
        return tuple(tuple(x) for x in inc)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.vertex_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    def degree(self, v: int) -> int:
        return self.degrees[v]

    def to_text(self) -> str:
        lines = [f"{self.vertex_count} {self.edge_count}"]
        lines.extend(f"{u} {v}" for u, v in self.edges)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> MultiGraph:
        rows = [line.split() for line in text.splitlines() if line.strip()]
        if not rows or len(rows[0]) != 2:
            raise InvalidParameterError("graph file must start with a 'V E' line")
        n_vertices, n_edges = (int(x) for x in rows[0])
        body = rows[1:]
        if len(body) != n_edges:
            raise InvalidParameterError(f"header declares {n_edges} edges, found {len(body)}")
        edges = []
        for row in body:
            if len(row) != 2:
                raise InvalidParameterError(f"malformed edge line: {' '.join(row)!r}")
            edges.append((int(row[0]), int(row[1])))
        return cls(n_vertices, tuple(edges))

    @classmethod
    def from_file(cls, path: str | Path) -> MultiGraph:
        return cls.from_text(Path(path).read_text())

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())


@dataclass(frozen=True)
class SpanningTree:
    tree_edges: frozenset[int]
    # parent[v] = (parent vertex, connecting edge id); None at the root
    parent: tuple[tuple[int, int] | None, ...]
    root: int = 0

    def non_tree_edges(self, g: MultiGraph) -> list[int]:
        return [e for e in range(g.edge_count) if e not in self.tree_edges]


def components(g: MultiGraph) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by smallest vertex."""
    uf = UnionFind(g.vertex_count)
    for u, v in g.edges:
        uf.union(u, v)
    groups: dict[int, list[int]] = {}
    for v in range(g.vertex_count):
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


def is_connected_base(g: MultiGraph) -> bool:
    uf = UnionFind(g.vertex_count)
    for u, v in g.edges:
        uf.union(u, v)
        if uf.count == 1:
            return True
    return uf.count == 1


def spanning_tree(g: MultiGraph) -> SpanningTree:
    """Grow a tree from vertex 0, always taking the lowest-id frontier edge.

    The frontier holds every edge joining a reached vertex to an unreached one;
    loops and edges between reached vertices never enter the tree. The result
    depends only on the edge order.
    """
    reached = [False] * g.vertex_count
    parent: list[tuple[int, int] | None] = [None] * g.vertex_count
    tree: set[int] = set()
    frontier: list[tuple[int, int, int]] = []

    def reach(v: int) -> None:
        reached[v] = True
        for e, w, _ in g.incidence[v]:
            if not reached[w]:
                heapq.heappush(frontier, (e, v, w))

    reach(0)
    while frontier:
        e, u, w = heapq.heappop(frontier)
        if reached[w]:
            continue
        tree.add(e)
        parent[w] = (u, e)
        reach(w)
    if not all(reached):
        raise GraphDisconnectedError("graph is not connected")
    return SpanningTree(frozenset(tree), tuple(parent), 0)


def betti_number(g: MultiGraph) -> int:
    """Number of independent cycles, ``|E| - |V| + 1``, of a connected graph."""
    if not is_connected_base(g):
        raise GraphDisconnectedError("Betti number is defined here for connected graphs only")
    return g.edge_count - g.vertex_count + 1


def _need(cond: bool, message: str) -> None:
    if not cond:
        raise InvalidParameterError(message)


def bouquet(d: int) -> MultiGraph:
    _need(d >= 1, "bouquet needs d >= 1")
    return MultiGraph(1, ((0, 0),) * d)


def barbell(k: int) -> MultiGraph:
    """Two (k+1)-cliques on ``0..k`` and ``k+1..2k+1`` joined by the bridge ``(k, k+1)``.

    The bridge is the last edge.
    """
    _need(k >= 2, "barbell needs k >= 2")
    left = list(combinations(range(k + 1), 2))
    right = [(u + k + 1, v + k + 1) for u, v in left]
    return MultiGraph(2 * k + 2, tuple(left + right + [(k, k + 1)]))


def cycle(m: int) -> MultiGraph:
    _need(m >= 3, "cycle needs m >= 3")
    return MultiGraph(m, tuple((i, (i + 1) % m) for i in range(m)))


def complete(m: int) -> MultiGraph:
    _need(m >= 2, "complete graph needs m >= 2")
    return MultiGraph(m, tuple(combinations(range(m), 2)))


def path(m: int) -> MultiGraph:
    _need(m >= 1, "path needs m >= 1 vertices")
    return MultiGraph(m, tuple((i, i + 1) for i in range(m - 1)))


def theta() -> MultiGraph:
    return MultiGraph(2, ((0, 1), (0, 1), (0, 1)))


def dumbbell() -> MultiGraph:
    # loop, connecting edge, loop
    return MultiGraph(2, ((0, 0), (0, 1), (1, 1)))


FAMILIES = {
    "bouquet": (bouquet, 1),
    "barbell": (barbell, 1),
    "cycle": (cycle, 1),
    "complete": (complete, 1),
    "path": (path, 1),
    "theta": (theta, 0),
    "dumbbell": (dumbbell, 0),
}


def make_family(name: str, *params: int) -> MultiGraph:
    if name not in FAMILIES:
        raise InvalidParameterError(f"unknown graph family {name!r}; known: {sorted(FAMILIES)}")
    builder, arity = FAMILIES[name]
    if len(params) != arity:
        raise InvalidParameterError(f"family {name!r} takes {arity} parameter(s), got {len(params)}")
    return builder(*params)


def parse_family(text: str) -> MultiGraph:
    """Build a graph from ``name`` or ``name:p1,p2`` (e.g. ``bouquet:3``)."""
    name, _, rest = text.partition(":")
    try:
        params = [int(x) for x in rest.split(",") if x.strip()]
    except ValueError:
        raise InvalidParameterError(f"bad family parameters in {text!r}") from None
    return make_family(name.strip(), *params)

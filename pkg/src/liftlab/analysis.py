"""Connectivity, global edge connectivity and exact edge expansion."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .errors import SizeLimitError
from .graph import MultiGraph, components, is_connected_base
from .lift import LiftedGraph

__all__ = [
    "CutReport",
    "ExpansionReport",
    "is_connected",
    "edge_connectivity",
    "edge_connectivity_value",
    "edge_expansion_exact",
    "min_degree",
    "cut_size",
    "MAX_EXPANSION_VERTICES",
]

MAX_EXPANSION_VERTICES = 24
_CHUNK = 1 << 20

GraphLike = Union[MultiGraph, LiftedGraph]


def _as_graph(h: GraphLike) -> MultiGraph:
    return h.graph if isinstance(h, LiftedGraph) else h


@dataclass(frozen=True)
class CutReport:
    edge_connectivity: int
    # the two sides, each sorted; the first is the lexicographically smaller
    witness_cut: tuple[tuple[int, ...], tuple[int, ...]]

    def to_dict(self) -> dict:
        return {
            "edge_connectivity": self.edge_connectivity,
            "witness_cut": [list(self.witness_cut[0]), list(self.witness_cut[1])],
        }


@dataclass(frozen=True)
class ExpansionReport:
    expansion: Fraction
    witness_set: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "expansion": str(self.expansion),
            "expansion_float": float(self.expansion),
            "witness_set": list(self.witness_set),
        }


def is_connected(h: GraphLike) -> bool:
    return is_connected_base(_as_graph(h))


def min_degree(h: GraphLike) -> int:
    """Minimum degree, loops counting 2."""
    return min(_as_graph(h).degrees)


def cut_size(h: GraphLike, side) -> int:
    """Number of edges with exactly one endpoint in ``side``."""
    s = set(side)
    return sum((u in s) != (v in s) for u, v in _as_graph(h).edges)


def _bipartition(vertex_count: int, side) -> tuple[tuple[int, ...], tuple[int, ...]]:
    a = tuple(sorted(side))
    inside = set(a)
    b = tuple(v for v in range(vertex_count) if v not in inside)
    return (a, b) if a < b else (b, a)


def edge_connectivity(h: GraphLike) -> CutReport:
    """Global minimum edge cut (Stoer-Wagner), parallel edges counted, loops ignored.

    Disconnected graphs report 0 with the component of vertex 0 as witness.
    A single vertex reports 0 with an empty side.
    """
    g = _as_graph(h)
    n = g.vertex_count
    if n == 1:
        return CutReport(0, ((), (0,)))
    comps = components(g)
    if len(comps) > 1:
        return CutReport(0, _bipartition(n, comps[0]))

    w = np.zeros((n, n), dtype=np.int64)
    for u, v in g.edges:
        if u != v:
            w[u, v] += 1
            w[v, u] += 1
    members: list[list[int]] = [[v] for v in range(n)]
    alive = np.ones(n, dtype=bool)
    best = None
    best_side: list[int] = []
    remaining = n
    while remaining > 1:
        # maximum-adjacency order; ties go to the lowest index
        start = int(np.flatnonzero(alive)[0])
        added = np.zeros(n, dtype=bool)
        added[start] = True
        conn = w[start].copy()
        prev, last, last_weight = start, start, 0
        for _ in range(remaining - 1):
            cand = np.where(alive & ~added, conn, -1)
            z = int(np.argmax(cand))
            last_weight = int(cand[z])
            added[z] = True
            prev, last = last, z
            conn += w[z]
        if best is None or last_weight < best:
            best = last_weight
            best_side = list(members[last])
        # merge `last` into `prev`
        w[prev] += w[last]
        w[:, prev] += w[:, last]
        w[prev, prev] = 0
        w[last] = 0
        w[:, last] = 0
        alive[last] = False
        members[prev].extend(members[last])
        remaining -= 1
    return CutReport(int(best), _bipartition(n, best_side))


def edge_connectivity_value(h: GraphLike, cap: int | None = None) -> int:
    """Edge connectivity as ``min_t maxflow(0, t)``; vertex 0 lies on one side of every cut.

    With ``cap`` set, stops as soon as a cut below ``cap`` is found and returns
    ``min(edge connectivity, cap)``, which is all a threshold test needs.
    """
    g = _as_graph(h)
    n = g.vertex_count
    if n == 1:
        return 0
    if not is_connected_base(g):
        return 0
    rows, cols = [], []
    for u, v in g.edges:
        if u != v:
            rows += (u, v)
            cols += (v, u)
    data = np.ones(len(rows), dtype=np.int32)
    m = csr_matrix((data, (rows, cols)), shape=(n, n))
    m.sum_duplicates()
    best = min(g.degrees) if cap is None else min(cap, min(g.degrees))
    # a starting upper bound only; loops count in degrees but the flows do not
    for t in range(1, n):
        if best == 0:
            break
        best = min(best, int(maximum_flow(m, 0, t).flow_value))
    return best


def _lexmin_mask(masks: np.ndarray) -> int:
    """Mask whose sorted vertex tuple is lexicographically smallest."""
    remaining = masks
    prefix = 0
    while True:
        if np.any(remaining == prefix):
            return prefix
        rest = remaining ^ prefix
        low = rest & -rest
        pick = low.min()
        remaining = remaining[low == pick]
        prefix |= int(pick)


def edge_expansion_exact(h: GraphLike, max_vertices: int = MAX_EXPANSION_VERTICES) -> ExpansionReport:
    """Minimum of ``|E(S, S^c)| / |S|`` over nonempty ``S`` with ``|S| <= |V|/2``.

    Every subset is evaluated, chunk by chunk, with vectorised boundary
    counts. Ties go to the lexicographically smallest sorted vertex set.
    """
    g = _as_graph(h)
    n = g.vertex_count
    if n > max_vertices:
        raise SizeLimitError(f"exact expansion is limited to {max_vertices} vertices, got {n}")
    if n < 2:
        raise SizeLimitError("edge expansion needs at least two vertices")
    half = n // 2
    pairs: dict[tuple[int, int], int] = {}
    for u, v in g.edges:
        if u != v:
            key = (min(u, v), max(u, v))
            pairs[key] = pairs.get(key, 0) + 1
    us = np.array([p[0] for p in pairs], dtype=np.int64)
    vs = np.array([p[1] for p in pairs], dtype=np.int64)
    mult = np.array(list(pairs.values()), dtype=np.int64)

    best: Fraction | None = None
    best_mask = 0
    total = 1 << n
    for lo in range(1, total, _CHUNK):
        masks = np.arange(lo, min(lo + _CHUNK, total), dtype=np.int64)
        sizes = np.bitwise_count(masks).astype(np.int64)
        keep = sizes <= half
        masks, sizes = masks[keep], sizes[keep]
        if masks.size == 0:
            continue
        boundary = np.zeros(masks.size, dtype=np.int64)
        for u, v, m in zip(us, vs, mult):
            boundary += m * (((masks >> u) ^ (masks >> v)) & 1)
        # exact minimum ratio: compare b1*s2 against b2*s1
        chunk_best = None
        for s in np.unique(sizes):
            b = int(boundary[sizes == s].min())
            r = Fraction(b, int(s))
            if chunk_best is None or r < chunk_best:
                chunk_best = r
        hits = masks[boundary * chunk_best.denominator == sizes * chunk_best.numerator]
        mask = _lexmin_mask(hits)
        if best is None or chunk_best < best:
            best, best_mask = chunk_best, mask
        elif chunk_best == best:
            cand = _lexmin_mask(np.array([best_mask, mask], dtype=np.int64))
            best_mask = cand
    witness = tuple(v for v in range(n) if best_mask >> v & 1)
    return ExpansionReport(best, witness)

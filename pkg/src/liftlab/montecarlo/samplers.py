"""Bernoulli event samplers.

Each sampler is a small picklable object called as ``sampler(rng, count)``
and returning a boolean array of ``count`` independent outcomes. The
``event_*`` functions draw a single outcome through the object path
(``random_lift``, ``GroupHandle``, ...) and are what the batched samplers
are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..analysis import is_connected
from ..graph import MultiGraph, spanning_tree
from ..lift import (
    build_iterated_lift,
    build_lift,
    random_iterated_lift,
    random_lift,
)
from ..perm import GroupHandle, random_permutation
from ..wreath import random_wreath, wreath_orbit_transitive

__all__ = [
    "random_perm_batch",
    "LiftConnected",
    "Transitive",
    "SymOrAlt",
    "KTransitive",
    "ParityEven",
    "IteratedLiftConnected",
    "WreathTransitive",
    "event_lift_connected",
    "event_transitive",
    "event_sym_or_alt",
    "event_k_transitive",
]


def random_perm_batch(rng: np.random.Generator, shape: tuple[int, ...], n: int) -> np.ndarray:
    """Array of shape ``shape + (n,)`` whose last-axis rows are independent uniform permutations."""
    base = np.broadcast_to(np.arange(n, dtype=np.int64), tuple(shape) + (n,)).copy()
    return rng.permuted(base, axis=-1)


def _blocks_connected(src: np.ndarray, dst: np.ndarray, batch: int, block: int) -> np.ndarray:
    """``src``/``dst`` index vertices of ``batch`` disjoint graphs of ``block`` vertices each."""
    total = batch * block
    m = coo_matrix(
        (np.ones(src.size, dtype=np.int8), (src.ravel(), dst.ravel())), shape=(total, total)
    ).tocsr()
    _, labels = connected_components(m, directed=False)
    labels = labels.reshape(batch, block)
    return (labels == labels[:, :1]).all(axis=1)


@dataclass(frozen=True)
class LiftConnected:
    """Is a random ``n``-lift of ``graph`` connected? Vectorised over the batch."""

    graph: MultiGraph
    n: int
    name: str = "lift_connected"

    def __call__(self, rng: np.random.Generator, count: int) -> np.ndarray:
        g, n = self.graph, self.n
        tree = spanning_tree(g).tree_edges
        non_tree = [e for e in range(g.edge_count) if e not in tree]
        block = g.vertex_count * n
        if g.edge_count == 0:
            return np.full(count, block == 1)
        offsets = (np.arange(count, dtype=np.int64) * block)[:, None, None]
        idx = np.arange(n, dtype=np.int64)
        labels = np.broadcast_to(idx, (count, g.edge_count, n)).copy()
        if non_tree:
            labels[:, non_tree, :] = random_perm_batch(rng, (count, len(non_tree)), n)
        tails = np.array([u for u, _ in g.edges], dtype=np.int64)[None, :, None] * n
        heads = np.array([v for _, v in g.edges], dtype=np.int64)[None, :, None] * n
        src = offsets + tails + idx[None, None, :]
        dst = offsets + heads + labels
        return _blocks_connected(np.broadcast_to(src, dst.shape), dst, count, block)


@dataclass(frozen=True)
class Transitive:
    """Do ``l`` uniform permutations of degree ``n`` generate a transitive group?"""

    n: int
    l: int
    name: str = "transitive"

    def __call__(self, rng: np.random.Generator, count: int) -> np.ndarray:
        n, l = self.n, self.l
        if n == 1:
            return np.ones(count, dtype=bool)
        if l == 0:
            return np.zeros(count, dtype=bool)
        perms = random_perm_batch(rng, (count, l), n)
        offsets = (np.arange(count, dtype=np.int64) * n)[:, None, None]
        src = np.broadcast_to(offsets + np.arange(n), perms.shape)
        return _blocks_connected(src, offsets + perms, count, n)


def _per_trial(fn, rng, count) -> np.ndarray:
    return np.fromiter((fn(rng) for _ in range(count)), dtype=bool, count=count)


@dataclass(frozen=True)
class SymOrAlt:
    n: int
    l: int
    name: str = "sym_or_alt"

    def __call__(self, rng, count):
        return _per_trial(lambda r: event_sym_or_alt(self.n, self.l, r), rng, count)


@dataclass(frozen=True)
class KTransitive:
    n: int
    l: int
    k: int
    name: str = "k_transitive"

    def __call__(self, rng, count):
        return _per_trial(lambda r: event_k_transitive(self.n, self.l, self.k, r), rng, count)


@dataclass(frozen=True)
class ParityEven:
    """Is a uniform permutation of degree ``n`` even?"""

    n: int
    name: str = "even_permutation"

    def __call__(self, rng, count):
        return _per_trial(lambda r: random_permutation(self.n, r).is_even(), rng, count)


@dataclass(frozen=True)
class IteratedLiftConnected:
    graph: MultiGraph
    signature: tuple[int, ...]
    name: str = "iterated_lift_connected"

    def __call__(self, rng, count):
        def one(r):
            return is_connected(build_iterated_lift(random_iterated_lift(self.graph, self.signature, r)))

        return _per_trial(one, rng, count)


@dataclass(frozen=True)
class WreathTransitive:
    signature: tuple[int, ...]
    l: int
    name: str = "wreath_transitive"

    def __call__(self, rng, count):
        def one(r):
            gens = [random_wreath(self.signature, r) for _ in range(self.l)]
            return wreath_orbit_transitive(gens, self.signature)

        return _per_trial(one, rng, count)


def event_lift_connected(g: MultiGraph, n: int, rng: np.random.Generator) -> bool:
    return is_connected(build_lift(random_lift(g, n, rng)))


def _random_group(n: int, l: int, rng: np.random.Generator) -> GroupHandle:
    return GroupHandle([random_permutation(n, rng) for _ in range(l)], n)


def event_transitive(n: int, l: int, rng: np.random.Generator) -> bool:
    return _random_group(n, l, rng).is_transitive()


def event_sym_or_alt(n: int, l: int, rng: np.random.Generator) -> bool:
    return _random_group(n, l, rng).is_sym_or_alt()


def event_k_transitive(n: int, l: int, k: int, rng: np.random.Generator) -> bool:
    return _random_group(n, l, rng).is_k_transitive(k).transitive_on_k_tuples

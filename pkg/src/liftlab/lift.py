"""Random n-lifts and iterated lifts, walk-products and walk lifting.

A lift vertex ``(v, i)`` is flattened to ``v * fiber_size + i`` and the lift
edge over base edge ``e`` that leaves fiber index ``i`` of the tail gets id
``e * fiber_size + i``. For iterated lifts the fiber index is the
mixed-radix index of the point in the wreath product domain, which is also
what two successive plain lifts produce, so both constructions share vertex
and edge numbering.

Walk-products follow the package composition convention (right factor acts
first). Lifting a walk from ``(start, i)`` ends at ``(end, sigma(i))`` where
``sigma = walk_product(a, w)``; equivalently ``sigma`` is the label of the
last step composed after all earlier ones.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .errors import BudgetExceededError, InvalidParameterError, InvalidWalkError
from .graph import MultiGraph, UnionFind, is_connected_base, parse_family, spanning_tree
from .perm import GroupHandle, Permutation, compose, identity, random_permutation
from .wreath import WreathElement, random_wreath, wreath_identity

__all__ = [
    "LiftAssignment",
    "IteratedLiftAssignment",
    "LiftedGraph",
    "Walk",
    "LiftedWalk",
    "random_lift",
    "build_lift",
    "random_iterated_lift",
    "build_iterated_lift",
    "random_stagewise_lift",
    "walk_product",
    "walk_end",
    "walk_subgroup_generators",
    "iterated_walk_generators",
    "enumerate_walk_subset",
    "lift_walk",
    "dump_assignment",
    "load_assignment",
]


def _check_flat_set(base: MultiGraph, flat_set: frozenset[int]) -> None:
    uf = UnionFind(base.vertex_count)
    for e in sorted(flat_set):
        if not 0 <= e < base.edge_count:
            raise InvalidParameterError(f"flat edge {e} is not an edge of the base graph")
        u, v = base.edges[e]
        if not uf.union(u, v):
            raise InvalidParameterError("flat edges must not contain a cycle")


@dataclass(frozen=True)
class LiftAssignment:
    base: MultiGraph
    n: int
    labels: tuple[Permutation, ...]
    flat_set: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameterError("lift degree must be >= 1")
        if len(self.labels) != self.base.edge_count:
            raise InvalidParameterError(
                f"{len(self.labels)} labels for {self.base.edge_count} base edges"
            )
        for e, p in enumerate(self.labels):
            if p.degree != self.n:
                raise InvalidParameterError(f"label of edge {e} has degree {p.degree}, expected {self.n}")
        object.__setattr__(self, "flat_set", frozenset(self.flat_set))
        _check_flat_set(self.base, self.flat_set)
        for e in self.flat_set:
            if not self.labels[e].is_identity():
                raise InvalidParameterError(f"flat edge {e} carries a non-identity label")

    @property
    def fiber_size(self) -> int:
        return self.n

    def flat_images(self) -> list[tuple[int, ...]]:
        return [p.images for p in self.labels]


@dataclass(frozen=True)
class IteratedLiftAssignment:
    base: MultiGraph
    signature: tuple[int, ...]
    labels: tuple[WreathElement, ...]
    flat_set: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        sig = tuple(int(x) for x in self.signature)
        object.__setattr__(self, "signature", sig)
        if len(self.labels) != self.base.edge_count:
            raise InvalidParameterError(
                f"{len(self.labels)} labels for {self.base.edge_count} base edges"
            )
        for e, w in enumerate(self.labels):
            if w.signature != sig:
                raise InvalidParameterError(f"label of edge {e} has signature {w.signature}, expected {sig}")
        object.__setattr__(self, "flat_set", frozenset(self.flat_set))
        _check_flat_set(self.base, self.flat_set)
        for e in self.flat_set:
            if not self.labels[e].is_identity():
                raise InvalidParameterError(f"flat edge {e} carries a non-identity label")

    @property
    def fiber_size(self) -> int:
        return math.prod(self.signature)

    def flat_images(self) -> list[tuple[int, ...]]:
        return [w.flat.images for w in self.labels]


Assignment = Union[LiftAssignment, IteratedLiftAssignment]


@dataclass(frozen=True)
class LiftedGraph:
    graph: MultiGraph
    base: MultiGraph
    fiber_size: int

    def vertex(self, v: int, i: int) -> int:
        return v * self.fiber_size + i

    def project_vertex(self, x: int) -> tuple[int, int]:
        return divmod(x, self.fiber_size)

    def project_edge(self, x: int) -> int:
        return x // self.fiber_size

    def fiber(self, v: int) -> range:
        return range(v * self.fiber_size, (v + 1) * self.fiber_size)

    def edge_fiber(self, e: int) -> range:
        return range(e * self.fiber_size, (e + 1) * self.fiber_size)

    def section(self, i: int) -> list[int]:
        return [v * self.fiber_size + i for v in range(self.base.vertex_count)]


@dataclass(frozen=True)
class Walk:
    """Steps are ``(edge_id, forward)``; a backward step runs head to tail."""

    start: int
    steps: tuple[tuple[int, bool], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple((int(e), bool(f)) for e, f in self.steps))

    def reversed(self, g: MultiGraph) -> Walk:
        return Walk(walk_end(g, self), tuple((e, not f) for e, f in reversed(self.steps)))


@dataclass(frozen=True)
class LiftedWalk:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def end(self) -> int:
        return self.vertices[-1]


def walk_end(g: MultiGraph, w: Walk) -> int:
    """Vertex where ``w`` finishes; raises if any step does not leave the current vertex."""
    if not 0 <= w.start < g.vertex_count:
        raise InvalidWalkError(f"walk starts at {w.start}, not a vertex")
    at = w.start
    for t, (e, forward) in enumerate(w.steps):
        if not 0 <= e < g.edge_count:
            raise InvalidWalkError(f"step {t} uses unknown edge {e}")
        u, v = g.edges[e]
        if forward:
            if u != at:
                raise InvalidWalkError(f"step {t}: edge {e} does not leave vertex {at} forwards")
            at = v
        else:
            if v != at:
                raise InvalidWalkError(f"step {t}: edge {e} does not leave vertex {at} backwards")
            at = u
    return at


def random_lift(
    g: MultiGraph, n: int, rng: np.random.Generator, flatten: bool = True
) -> LiftAssignment:
    """Random n-lift with the spanning-tree edges flat.

    Non-tree edges get independent uniform labels, drawn in edge-id order.
    ``flatten=False`` labels every edge at random and also accepts
    disconnected graphs.
    """
    if n < 1:
        raise InvalidParameterError("lift degree must be >= 1")
    flat = spanning_tree(g).tree_edges if flatten else frozenset()
    ident = identity(n)
    labels = tuple(
        ident if e in flat else random_permutation(n, rng) for e in range(g.edge_count)
    )
    return LiftAssignment(g, n, labels, flat)


def random_iterated_lift(
    g: MultiGraph, signature: Sequence[int], rng: np.random.Generator, flatten: bool = True
) -> IteratedLiftAssignment:
    sig = tuple(int(x) for x in signature)
    flat = spanning_tree(g).tree_edges if flatten else frozenset()
    ident = wreath_identity(sig)
    labels = tuple(ident if e in flat else random_wreath(sig, rng) for e in range(g.edge_count))
    return IteratedLiftAssignment(g, sig, labels, flat)


def _build(base: MultiGraph, fiber: int, images: list[tuple[int, ...]]) -> LiftedGraph:
    edges = []
    for (u, v), pi in zip(base.edges, images):
        ub, vb = u * fiber, v * fiber
        edges.extend((ub + i, vb + pi[i]) for i in range(fiber))
    return LiftedGraph(MultiGraph(base.vertex_count * fiber, tuple(edges)), base, fiber)


def build_lift(a: Assignment) -> LiftedGraph:
    """Edge ``(u, i) -- (v, pi(i))`` for every base edge ``(u, v)`` with label ``pi``."""
    return _build(a.base, a.fiber_size, a.flat_images())


def build_iterated_lift(a: IteratedLiftAssignment) -> LiftedGraph:
    return _build(a.base, a.fiber_size, a.flat_images())


def random_stagewise_lift(
    g: MultiGraph, signature: Sequence[int], rng: np.random.Generator
) -> LiftedGraph:
    """Lift ``g`` by ``signature[0]``, lift the result by ``signature[1]``, and so on.

    Every stage labels every edge at random, i.e. the plain definition of a
    lift of a lift with no flattening anywhere.
    """
    current = g
    fiber = 1
    for n in signature:
        current = build_lift(random_lift(current, int(n), rng, flatten=False)).graph
        fiber *= int(n)
    return LiftedGraph(current, g, fiber)


def _step_label(a: LiftAssignment, e: int, forward: bool) -> Permutation:
    p = a.labels[e]
    return p if forward else p.inverse()


def walk_product(a: LiftAssignment, w: Walk) -> Permutation:
    walk_end(a.base, w)
    acc = identity(a.n)
    for e, forward in w.steps:
        acc = compose(_step_label(a, e, forward), acc)
    return acc


def lift_walk(a: Assignment, w: Walk, start_fiber_index: int) -> LiftedWalk:
    walk_end(a.base, w)
    fiber = a.fiber_size
    if not 0 <= start_fiber_index < fiber:
        raise InvalidWalkError(f"fiber index {start_fiber_index} outside 0..{fiber - 1}")
    images = a.flat_images()
    inverses: dict[int, list[int]] = {}
    x = start_fiber_index
    vertices = [w.start * fiber + x]
    edges = []
    for e, forward in w.steps:
        u, v = a.base.edges[e]
        if forward:
            edges.append(e * fiber + x)
            x = images[e][x]
            vertices.append(v * fiber + x)
        else:
            if e not in inverses:
                inv = [0] * fiber
                for i, j in enumerate(images[e]):
                    inv[j] = i
                inverses[e] = inv
            x = inverses[e][x]
            edges.append(e * fiber + x)
            vertices.append(u * fiber + x)
    return LiftedWalk(tuple(vertices), tuple(edges))


def _require_spanning_flat_set(base: MultiGraph, flat_set: frozenset[int]) -> None:
    if len(flat_set) != base.vertex_count - 1 or not is_connected_base(base):
        raise InvalidParameterError("flat edges do not form a spanning tree of the base graph")


def walk_subgroup_generators(a: LiftAssignment) -> GroupHandle:
    """Labels of the non-flat edges, in edge-id order, as group generators."""
    _require_spanning_flat_set(a.base, a.flat_set)
    gens = [a.labels[e] for e in range(a.base.edge_count) if e not in a.flat_set]
    return GroupHandle(gens, a.n)


def iterated_walk_generators(a: IteratedLiftAssignment) -> list[WreathElement]:
    _require_spanning_flat_set(a.base, a.flat_set)
    return [a.labels[e] for e in range(a.base.edge_count) if e not in a.flat_set]


def enumerate_walk_subset(a: LiftAssignment, budget: int = 1_000_000) -> set[Permutation]:
    """All walk-products, by closure over (current vertex, product so far) states.

    The empty walk at each vertex contributes the identity.
    """
    ident = identity(a.n)
    g = a.base
    step_labels = {}
    for e in range(g.edge_count):
        step_labels[(e, True)] = a.labels[e]
        step_labels[(e, False)] = a.labels[e].inverse()
    seen = {(v, ident) for v in range(g.vertex_count)}
    queue = deque(seen)
    while queue:
        v, acc = queue.popleft()
        for e, w, forward in g.incidence[v]:
            state = (w, compose(step_labels[(e, forward)], acc))
            if state not in seen:
                seen.add(state)
                if len(seen) > budget:
                    raise BudgetExceededError(f"walk closure exceeded {budget} states")
                queue.append(state)
    return {acc for _, acc in seen}


def dump_assignment(a: Assignment, graph_ref: str) -> str:
    """Text form: graph reference, degree or signature, flat edges, one label per edge."""
    lines = [f"graph {graph_ref}"]
    if isinstance(a, IteratedLiftAssignment):
        lines.append("signature " + ",".join(map(str, a.signature)))
    else:
        lines.append(f"degree {a.n}")
    lines.append("flat " + " ".join(map(str, sorted(a.flat_set))))
    lines.extend(str(label) for label in a.labels)
    return "\n".join(lines) + "\n"


def _resolve_graph_ref(ref: str) -> MultiGraph:
    if ref.startswith("family:"):
        return parse_family(ref[len("family:") :])
    return MultiGraph.from_file(Path(ref))


def load_assignment(text: str, base: MultiGraph | None = None) -> Assignment:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if len(lines) < 3 or not lines[0].startswith("graph "):
        raise InvalidParameterError("assignment must start with 'graph', size and 'flat' lines")
    if base is None:
        base = _resolve_graph_ref(lines[0][len("graph ") :].strip())
    kind, _, value = lines[1].partition(" ")
    flat_fields = lines[2].split()
    if flat_fields[0] != "flat":
        raise InvalidParameterError("third line must list the flat edges")
    flat = frozenset(int(x) for x in flat_fields[1:])
    body = lines[3:]
    if kind == "degree":
        return LiftAssignment(base, int(value), tuple(Permutation.parse(s) for s in body), flat)
    if kind == "signature":
        sig = tuple(int(x) for x in value.split(","))
        return IteratedLiftAssignment(base, sig, tuple(WreathElement.parse(s) for s in body), flat)
    raise InvalidParameterError(f"unknown size line {lines[1]!r}")

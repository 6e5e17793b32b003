"""Exact probabilities by exhaustive enumeration and by counting recursion."""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Callable, Hashable, Sequence

from ..analysis import edge_connectivity, is_connected
from ..errors import BudgetExceededError, InvalidParameterError
from ..graph import MultiGraph, UnionFind, spanning_tree
from ..lift import (
    IteratedLiftAssignment,
    LiftAssignment,
    LiftedGraph,
    build_lift,
)
from ..perm import Permutation, identity
from ..wreath import all_wreath_elements, wreath_identity, wreath_order, wreath_orbit_transitive

__all__ = [
    "ENUMERATION_BUDGET",
    "transitive_tuple_count",
    "exact_transitive_probability",
    "enumerate_transitive_probability",
    "exact_lift_connectivity",
    "exact_wreath_transitive_probability",
    "stagewise_transitive_probability",
    "iterated_lift_distribution",
    "stagewise_lift_distribution",
    "connectivity_statistic",
    "enumerate_assignments",
]

ENUMERATION_BUDGET = 10_000_000


@lru_cache(maxsize=None)
def transitive_tuple_count(n: int, l: int) -> int:
    """Number of ``l``-tuples in S_n generating a transitive group.

    Condition on the orbit of point 0 having size ``r``: choose the other
    ``r - 1`` points, act transitively on the orbit and arbitrarily on the rest,

        (n!)**l = sum_{r=1..n} C(n-1, r-1) * t(r) * ((n-r)!)**l.
    """
    if n < 1 or l < 0:
        raise InvalidParameterError("need n >= 1 and l >= 0")
    total = math.factorial(n) ** l
    rest = sum(
        math.comb(n - 1, r - 1) * transitive_tuple_count(r, l) * math.factorial(n - r) ** l
        for r in range(1, n)
    )
    return total - rest


def _is_transitive_images(n: int, gens: Sequence[tuple[int, ...]]) -> bool:
    uf = UnionFind(n)
    for g in gens:
        for i, j in enumerate(g):
            uf.union(i, j)
    return uf.count == 1


def enumerate_transitive_probability(n: int, l: int, budget: int = ENUMERATION_BUDGET) -> Fraction:
    """Brute force over all ``(n!)**l`` generator tuples."""
    size = math.factorial(n) ** l
    if size > budget:
        raise BudgetExceededError(f"(n!)^l = {size} exceeds the enumeration budget {budget}")
    elems = list(permutations(range(n)))
    hits = sum(_is_transitive_images(n, gens) for gens in product(elems, repeat=l))
    return Fraction(hits, size)


def exact_transitive_probability(n: int, l: int, method: str = "recursion") -> Fraction:
    """Probability that ``l`` uniform permutations of degree ``n`` generate a transitive group."""
    if method == "recursion":
        return Fraction(transitive_tuple_count(n, l), math.factorial(n) ** l)
    if method == "enumerate":
        return enumerate_transitive_probability(n, l)
    raise InvalidParameterError(f"unknown method {method!r}")


def _all_perms(n: int) -> list[Permutation]:
    return [Permutation._trusted(p) for p in permutations(range(n))]


def enumerate_assignments(g: MultiGraph, n: int, flatten: bool = True, budget: int = 1_000_000):
    """Yield ``(assignment, total)`` for every labelling of the non-flat edges."""
    flat = spanning_tree(g).tree_edges if flatten else frozenset()
    free = [e for e in range(g.edge_count) if e not in flat]
    size = math.factorial(n) ** len(free)
    if size > budget:
        raise BudgetExceededError(f"{size} assignments exceed the enumeration budget {budget}")
    ident = identity(n)
    elems = _all_perms(n)
    for choice in product(elems, repeat=len(free)):
        labels = [ident] * g.edge_count
        for e, p in zip(free, choice):
            labels[e] = p
        yield LiftAssignment(g, n, tuple(labels), flat), size


def exact_lift_connectivity(
    g: MultiGraph, n: int, flatten: bool = True, budget: int = 1_000_000
) -> Fraction:
    """Fraction of all assignments whose lift is connected, counted by building every lift."""
    hits = 0
    size = 1
    for a, size in enumerate_assignments(g, n, flatten, budget):
        hits += is_connected(build_lift(a))
    return Fraction(hits, size)


def exact_wreath_transitive_probability(
    signature: Sequence[int], l: int, budget: int = 1_000_000
) -> Fraction:
    """Brute force over all ``l``-tuples of wreath product elements."""
    order = wreath_order(signature)
    size = order**l
    if size > budget:
        raise BudgetExceededError(f"{size} generator tuples exceed the enumeration budget {budget}")
    elems = list(all_wreath_elements(signature))
    sig = tuple(signature)
    hits = sum(wreath_orbit_transitive(list(gens), sig) for gens in product(elems, repeat=l))
    return Fraction(hits, size)


def stagewise_transitive_probability(signature: Sequence[int], l: int) -> Fraction:
    """Product of per-stage exact probabilities.

    Stage ``i`` lifts a connected graph whose Betti number is
    ``(l-1) * n1 * ... * n_{i-1} + 1``, so it succeeds with the transitivity
    probability for that many generators of degree ``n_i``.
    """
    p = Fraction(1)
    below = 1
    for n in signature:
        p *= exact_transitive_probability(int(n), (l - 1) * below + 1)
        below *= int(n)
    return p


Statistic = Callable[[LiftedGraph], Hashable]


def connectivity_statistic(h: LiftedGraph) -> tuple[bool, int]:
    """``(connected?, edge connectivity)``; the statistic the iterated-lift checks compare."""
    return is_connected(h), edge_connectivity(h).edge_connectivity


def iterated_lift_distribution(
    g: MultiGraph,
    signature: Sequence[int],
    statistic: Statistic = connectivity_statistic,
    budget: int = 1_000_000,
) -> dict[Hashable, Fraction]:
    """Exact law of ``statistic`` over all flattened wreath-labelled lifts."""
    sig = tuple(int(x) for x in signature)
    flat = spanning_tree(g).tree_edges
    free = [e for e in range(g.edge_count) if e not in flat]
    size = wreath_order(sig) ** len(free)
    if size > budget:
        raise BudgetExceededError(f"{size} assignments exceed the enumeration budget {budget}")
    ident = wreath_identity(sig)
    elems = list(all_wreath_elements(sig))
    counts: Counter = Counter()
    for choice in product(elems, repeat=len(free)):
        labels = [ident] * g.edge_count
        for e, w in zip(free, choice):
            labels[e] = w
        counts[statistic(build_lift(IteratedLiftAssignment(g, sig, tuple(labels), flat)))] += 1
    return {k: Fraction(v, size) for k, v in counts.items()}


def stagewise_lift_distribution(
    g: MultiGraph,
    signature: Sequence[int],
    statistic: Statistic = connectivity_statistic,
    budget: int = 1_000_000,
) -> dict[Hashable, Fraction]:
    """Exact law of ``statistic`` for a lift of a lift, every edge of every stage labelled freely."""
    sig = tuple(int(x) for x in signature)
    law: Counter = Counter()
    visited = 0

    def recurse(current: MultiGraph, stage: int, weight: Fraction) -> None:
        nonlocal visited
        if stage == len(sig):
            visited += 1
            if visited > budget:
                raise BudgetExceededError(f"stagewise enumeration exceeded {budget} leaves")
            lifted = LiftedGraph(current, g, math.prod(sig))
            law[statistic(lifted)] += weight
            return
        n = sig[stage]
        count = math.factorial(n) ** current.edge_count
        for a, _ in enumerate_assignments(current, n, flatten=False, budget=budget):
            recurse(build_lift(a).graph, stage + 1, weight / count)

    recurse(g, 0, Fraction(1))
    return dict(law)

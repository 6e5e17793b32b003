"""Iterated wreath products of symmetric groups acting on product domains.

An element with signature ``(n1, n2, ..., nk)`` is a top permutation of
degree ``n1`` together with ``n1`` children of signature ``(n2, ..., nk)``.
It acts on tuples ``(i1, ..., ik)`` by

    (i1, rest) -> (top(i1), child[i1](rest))

where the child is chosen by the coordinate *before* the move. Composition
is whatever makes this action a homomorphism (``wreath_compose(a, b)`` acts
as ``a`` after ``b``):

    top      = top_a * top_b
    child[s] = child_a[top_b(s)] * child_b[s]
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceededError, InvalidParameterError, SignatureMismatchError
from .perm import Permutation, compose, identity, random_permutation

__all__ = [
    "WreathElement",
    "wreath_identity",
    "wreath_act",
    "wreath_compose",
    "wreath_inverse",
    "random_wreath",
    "all_wreath_elements",
    "wreath_order",
    "wreath_orbit_transitive",
    "DEFAULT_DOMAIN_BUDGET",
]

DEFAULT_DOMAIN_BUDGET = 1_000_000


@dataclass(frozen=True)
class WreathElement:
    top: Permutation
    children: tuple[WreathElement, ...] = ()

    def __post_init__(self):
        if self.children:
            if len(self.children) != self.top.degree:
                raise InvalidParameterError(
                    f"top of degree {self.top.degree} needs {self.top.degree} children, "
                    f"got {len(self.children)}"
                )
            sig = self.children[0].signature
            if any(c.signature != sig for c in self.children):
                raise SignatureMismatchError("children must share one signature")

    @cached_property
    def signature(self) -> tuple[int, ...]:
        if not self.children:
            return (self.top.degree,)
        return (self.top.degree,) + self.children[0].signature

    @property
    def depth(self) -> int:
        return len(self.signature)

    @property
    def domain_size(self) -> int:
        return math.prod(self.signature)

    def act(self, point: Sequence[int]) -> tuple[int, ...]:
        return wreath_act(self, point)

    @cached_property
    def flat(self) -> Permutation:
        """Induced permutation of the product domain in mixed-radix order.

        The point ``(i1, ..., ik)`` has index ``i1*n2*...*nk + ... + ik``.
        """
        if not self.children:
            return self.top
        sub = self.children[0].domain_size
        images = [0] * self.domain_size
        top = self.top.images
        for s, child in enumerate(self.children):
            base_out = top[s] * sub
            base_in = s * sub
            for t, ct in enumerate(child.flat.images):
                images[base_in + t] = base_out + ct
        return Permutation._trusted(tuple(images))

    def is_identity(self) -> bool:
        return self.flat.is_identity()

    def __str__(self) -> str:
        if not self.children:
            return str(self.top)
        return "(" + " ".join([str(self.top)] + [str(c) for c in self.children]) + ")"

    @classmethod
    def parse(cls, text: str) -> WreathElement:
        """Read the nested form produced by ``str``: ``([1 0] [0 1] [1 0])``."""
        tokens = text.replace("(", " ( ").replace(")", " ) ").replace("[", " [ ").replace("]", " ] ").split()
        pos = 0

        def perm_at():
            nonlocal pos
            if tokens[pos] != "[":
                raise InvalidParameterError(f"expected '[' in {text!r}")
            end = tokens.index("]", pos)
            p = Permutation(int(x) for x in tokens[pos + 1 : end])
            pos = end + 1
            return p

        def element():
            nonlocal pos
            if tokens[pos] == "[":
                return cls(perm_at())
            if tokens[pos] != "(":
                raise InvalidParameterError(f"unexpected token {tokens[pos]!r} in {text!r}")
            pos += 1
            top = perm_at()
            kids = []
            while tokens[pos] != ")":
                kids.append(element())
            pos += 1
            return cls(top, tuple(kids))

        try:
            out = element()
        except IndexError:
            raise InvalidParameterError(f"truncated wreath element: {text!r}") from None
        if pos != len(tokens):
            raise InvalidParameterError(f"trailing input in {text!r}")
        return out


def _check_signature(signature: Sequence[int]) -> tuple[int, ...]:
    sig = tuple(int(x) for x in signature)
    if not sig or any(x < 1 for x in sig):
        raise InvalidParameterError(f"signature entries must be >= 1: {signature}")
    return sig


def wreath_identity(signature: Sequence[int]) -> WreathElement:
    sig = _check_signature(signature)
    if len(sig) == 1:
        return WreathElement(identity(sig[0]))
    child = wreath_identity(sig[1:])
    return WreathElement(identity(sig[0]), (child,) * sig[0])


def wreath_act(w: WreathElement, point: Sequence[int]) -> tuple[int, ...]:
    sig = w.signature
    if len(point) != len(sig) or any(not 0 <= x < n for x, n in zip(point, sig)):
        raise InvalidParameterError(f"point {tuple(point)} outside domain of signature {sig}")
    out = []
    node = w
    for x in point:
        out.append(node.top(x))
        if node.children:
            node = node.children[x]
    return tuple(out)


def wreath_compose(a: WreathElement, b: WreathElement) -> WreathElement:
    if a.signature != b.signature:
        raise SignatureMismatchError(f"signatures differ: {a.signature} vs {b.signature}")
    top = compose(a.top, b.top)
    if not a.children:
        return WreathElement(top)
    kids = tuple(
        wreath_compose(a.children[b.top(s)], b.children[s]) for s in range(b.top.degree)
    )
    return WreathElement(top, kids)


def wreath_inverse(a: WreathElement) -> WreathElement:
    top_inv = a.top.inverse()
    if not a.children:
        return WreathElement(top_inv)
    kids = tuple(wreath_inverse(a.children[top_inv(s)]) for s in range(a.top.degree))
    return WreathElement(top_inv, kids)


def random_wreath(signature: Sequence[int], rng: np.random.Generator) -> WreathElement:
    """Uniform element: top and every child drawn independently and uniformly."""
    sig = _check_signature(signature)
    top = random_permutation(sig[0], rng)
    if len(sig) == 1:
        return WreathElement(top)
    kids = tuple(random_wreath(sig[1:], rng) for _ in range(sig[0]))
    return WreathElement(top, kids)


def wreath_order(signature: Sequence[int]) -> int:
    """|S_nk wr ... wr S_n1| computed by the recursion |W(n, rest)| = n! * |W(rest)|^n."""
    sig = _check_signature(signature)
    if len(sig) == 1:
        return math.factorial(sig[0])
    return math.factorial(sig[0]) * wreath_order(sig[1:]) ** sig[0]


def all_wreath_elements(signature: Sequence[int], budget: int = 1_000_000) -> Iterator[WreathElement]:
    sig = _check_signature(signature)
    if wreath_order(sig) > budget:
        raise BudgetExceededError(f"wreath product of signature {sig} has more than {budget} elements")
    tops = [Permutation._trusted(p) for p in permutations(range(sig[0]))]
    if len(sig) == 1:
        for t in tops:
            yield WreathElement(t)
        return
    subs = list(all_wreath_elements(sig[1:], budget))
    for t in tops:
        for kids in product(subs, repeat=sig[0]):
            yield WreathElement(t, kids)


def wreath_orbit_transitive(
    gens: Sequence[WreathElement],
    signature: Sequence[int] | None = None,
    budget: int = DEFAULT_DOMAIN_BUDGET,
) -> bool:
    """True iff the generated group has a single orbit on the product domain."""
    if signature is None:
        if not gens:
            raise InvalidParameterError("signature is required when there are no generators")
        signature = gens[0].signature
    sig = _check_signature(signature)
    for g in gens:
        if g.signature != sig:
            raise SignatureMismatchError(f"generator signature {g.signature} != {sig}")
    size = math.prod(sig)
    if size > budget:
        raise BudgetExceededError(f"domain of size {size} exceeds the budget of {budget}")
    flat = [g.flat.images for g in gens]
    seen = [False] * size
    seen[0] = True
    reached = 1
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g in flat:
            y = g[x]
            if not seen[y]:
                seen[y] = True
                reached += 1
                queue.append(y)
    return reached == size

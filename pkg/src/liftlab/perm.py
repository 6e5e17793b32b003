"""Permutations of ``{0, ..., n-1}`` and the groups they generate.

Composition convention, used everywhere in the package: ``compose(a, b)``
applies ``b`` first, so ``compose(a, b)(i) == a(b(i))``.
"""

from __future__ import annotations

import math
import random
import threading
from collections import deque
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceededError, DegreeMismatchError, InvalidParameterError

__all__ = [
    "Permutation",
    "compose",
    "inverse",
    "identity",
    "random_permutation",
    "cycle_perm",
    "GroupHandle",
    "TupleOrbitReport",
    "orbits",
    "is_transitive",
    "is_k_transitive",
    "group_order",
    "is_sym_or_alt",
    "DEFAULT_TUPLE_BUDGET",
    "DEFAULT_MAX_CHAIN_DEGREE",
]

DEFAULT_TUPLE_BUDGET = 5_000_000
DEFAULT_MAX_CHAIN_DEGREE = 64


class Permutation:
    """Immutable permutation stored as its image table."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        imgs = tuple(int(x) for x in images)
        if sorted(imgs) != list(range(len(imgs))):
            raise InvalidParameterError(f"not a permutation of 0..{len(imgs) - 1}: {list(imgs)}")
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "_hash", hash(imgs))

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> Permutation:
        p = object.__new__(cls)
        object.__setattr__(p, "images", images)
        object.__setattr__(p, "_hash", hash(images))
        return p

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    def __str__(self) -> str:
        return "[" + " ".join(map(str, self.images)) + "]"

    def __reduce__(self):
        return (Permutation, (self.images,))

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation._trusted(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def is_even(self) -> bool:
        seen = [False] * len(self.images)
        transpositions = 0
        for start in range(len(self.images)):
            if seen[start]:
                continue
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = self.images[j]
                length += 1
            transpositions += length - 1
        return transpositions % 2 == 0

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(len(self.images)):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    @classmethod
    def parse(cls, text: str) -> Permutation:
        """Inverse of ``str``: ``"[2 0 1]"``."""
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise InvalidParameterError(f"permutation must look like '[p0 p1 ...]': {text!r}")
        return cls(int(x) for x in body[1:-1].split())


def identity(n: int) -> Permutation:
    return Permutation._trusted(tuple(range(n)))


def compose(a: Permutation, b: Permutation) -> Permutation:
    """``a`` after ``b``."""
    if a.degree != b.degree:
        raise DegreeMismatchError(f"cannot compose degrees {a.degree} and {b.degree}")
    ai = a.images
    return Permutation._trusted(tuple(ai[j] for j in b.images))


def inverse(a: Permutation) -> Permutation:
    return a.inverse()


def cycle_perm(n: int, *cycles: Sequence[int]) -> Permutation:
    """Build a degree-``n`` permutation from disjoint cycles, e.g. ``cycle_perm(3, (0, 1))``."""
    images = list(range(n))
    for cyc in cycles:
        for k, x in enumerate(cyc):
            images[x] = cyc[(k + 1) % len(cyc)]
    return Permutation(images)


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    """Uniform element of S_n (numpy's Fisher-Yates shuffle)."""
    if n < 1:
        raise InvalidParameterError("degree must be >= 1")
    return Permutation._trusted(tuple(rng.permutation(n).tolist()))


class TupleOrbitReport:
    __slots__ = ("k", "transitive_on_k_tuples", "orbit_count")

    def __init__(self, k: int, orbit_count: int):
        self.k = k
        self.orbit_count = orbit_count
        self.transitive_on_k_tuples = orbit_count == 1

    def __bool__(self) -> bool:
        return self.transitive_on_k_tuples

    def __repr__(self) -> str:
        return f"TupleOrbitReport(k={self.k}, orbit_count={self.orbit_count})"


class _StabilizerChain:
    """Base, strong generators per level and explicit transversals.

    Construction runs a seeded randomized pass first. Every element it
    stores is a genuine group element, so its order is a lower bound; when
    that bound reaches the obvious upper bound (n!, or n!/2 if all
    generators are even) the chain is already complete. Otherwise the
    deterministic Schreier-Sims loop verifies and completes it.
    """

    def __init__(self, n: int, gens: list[tuple[int, ...]], random_rounds: int = 40):
        self.n = n
        self.ident = tuple(range(n))
        self.base: list[int] = []
        self.level_gens: list[list[tuple[int, ...]]] = []
        # transversal[i][b] maps base[i] to b; inverse_transversal holds the inverses
        self.transversal: list[dict[int, tuple[int, ...]]] = []
        self.inverse_transversal: list[dict[int, tuple[int, ...]]] = []
        gens = [g for g in gens if g != self.ident]
        self.gens = gens
        for g in gens:
            if all(g[b] == b for b in self.base):
                self._add_base_point(g)
        for level in range(len(self.base)):
            fixed = self.base[:level]
            self.level_gens[level] = [g for g in gens if all(g[b] == b for b in fixed)]
            self._orbit(level)
        if gens:
            self._randomized(random_rounds)
            if self.order() < self._upper_bound():
                self._deterministic()

    @staticmethod
    def _mul(a, b):
        return tuple(a[j] for j in b)

    @staticmethod
    def _inv(a):
        inv = [0] * len(a)
        for i, j in enumerate(a):
            inv[j] = i
        return tuple(inv)

    def _upper_bound(self) -> int:
        full = math.factorial(self.n)
        all_even = all(Permutation._trusted(g).is_even() for g in self.gens)
        return full // 2 if all_even and self.n >= 2 else full

    def _orbit(self, level: int) -> None:
        beta = self.base[level]
        trans = {beta: self.ident}
        inv = {beta: self.ident}
        queue = deque([beta])
        gens = self.level_gens[level]
        while queue:
            x = queue.popleft()
            tx = trans[x]
            for s in gens:
                y = s[x]
                if y not in trans:
                    t = self._mul(s, tx)
                    trans[y] = t
                    inv[y] = self._inv(t)
                    queue.append(y)
        self.transversal[level] = trans
        self.inverse_transversal[level] = inv

    def _add_base_point(self, g) -> None:
        point = next(i for i in range(self.n) if g[i] != i)
        self.base.append(point)
        self.level_gens.append([])
        self.transversal.append({})
        self.inverse_transversal.append({})

    def strip(self, g, start: int = 0):
        """Sift ``g`` from ``start``; return residue and the level where sifting stopped."""
        for level in range(start, len(self.base)):
            b = g[self.base[level]]
            t = self.inverse_transversal[level].get(b)
            if t is None:
                return g, level
            g = self._mul(t, g)
        return g, len(self.base)

    def _add_strong(self, h, lowest: int, j: int) -> None:
        if j == len(self.base):
            self._add_base_point(h)
        for level in range(lowest, j + 1):
            self.level_gens[level].append(h)
            self._orbit(level)

    def _randomized(self, rounds: int) -> None:
        # product replacement with an accumulator, fixed seed
        rnd = random.Random(0x5EED)
        pool = list(self.gens)
        while len(pool) < 10:
            pool.extend(self.gens)
        acc = self.ident
        for _ in range(50):
            i, j = rnd.sample(range(len(pool)), 2)
            pool[i] = self._mul(pool[i], pool[j])
            acc = self._mul(acc, pool[i])
        bound = self._upper_bound()
        quiet = 0
        while quiet < rounds and self.order() < bound:
            i, j = rnd.sample(range(len(pool)), 2)
            pool[i] = self._mul(pool[i], pool[j]) if rnd.random() < 0.5 else self._mul(pool[j], pool[i])
            acc = self._mul(acc, pool[i])
            h, j = self.strip(acc)
            if j < len(self.base) or h != self.ident:
                self._add_strong(h, 0, j)
                quiet = 0
            else:
                quiet += 1

    def _deterministic(self) -> None:
        ident = self.ident
        i = len(self.base) - 1
        while i >= 0:
            restart = False
            trans = self.transversal[i]
            inv = self.inverse_transversal[i]
            for u in list(trans):
                tu = trans[u]
                for s in self.level_gens[i]:
                    # Schreier generator t_{s(u)}^{-1} s t_u fixes base[i]
                    h = self._mul(inv[s[u]], self._mul(s, tu))
                    h, j = self.strip(h, i + 1)
                    if j < len(self.base) or h != ident:
                        self._add_strong(h, i + 1, j)
                        i = j
                        restart = True
                        break
                if restart:
                    break
            if not restart:
                i -= 1

    def order(self) -> int:
        return math.prod(len(t) for t in self.transversal)

    def contains(self, g: tuple[int, ...]) -> bool:
        h, j = self.strip(g)
        return j == len(self.base) and h == self.ident


class GroupHandle:
    """Subgroup of S_n given by generators.

    The stabilizer chain is built on first use of ``order``/``contains`` and
    cached; construction is guarded by a lock so a handle can be shared.
    """

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None):
        gens = tuple(generators)
        if degree is None:
            if not gens:
                raise InvalidParameterError("degree is required when there are no generators")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatchError(f"generator of degree {g.degree} in a degree-{degree} group")
        self.generators = gens
        self.degree = degree
        self._chain: _StabilizerChain | None = None
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"GroupHandle(degree={self.degree}, generators={[str(g) for g in self.generators]})"

    def __getstate__(self):
        return {"generators": self.generators, "degree": self.degree}

    def __setstate__(self, state):
        self.__init__(state["generators"], state["degree"])

    def orbits(self) -> list[list[int]]:
        n = self.degree
        seen = [False] * n
        out = []
        gens = [g.images for g in self.generators]
        for start in range(n):
            if seen[start]:
                continue
            seen[start] = True
            orbit = [start]
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for g in gens:
                    y = g[x]
                    if not seen[y]:
                        seen[y] = True
                        orbit.append(y)
                        queue.append(y)
            out.append(sorted(orbit))
        return out

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def is_k_transitive(self, k: int, budget: int = DEFAULT_TUPLE_BUDGET) -> TupleOrbitReport:
        """Orbit count on ordered k-tuples of distinct points, by plain BFS."""
        n = self.degree
        if not 1 <= k <= n:
            raise InvalidParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
        size = math.perm(n, k)
        if size > budget:
            raise BudgetExceededError(f"{size} ordered {k}-tuples exceed the budget of {budget}")
        gens = [g.images for g in self.generators]
        weights = [n ** (k - 1 - i) for i in range(k)]

        def encode(t):
            return sum(x * w for x, w in zip(t, weights))

        seen: set[int] = set()
        orbit_count = 0
        for start in permutations(range(n), k):
            code = encode(start)
            if code in seen:
                continue
            orbit_count += 1
            seen.add(code)
            queue = deque([start])
            while queue:
                t = queue.popleft()
                for g in gens:
                    image = tuple(g[x] for x in t)
                    c = encode(image)
                    if c not in seen:
                        seen.add(c)
                        queue.append(image)
        return TupleOrbitReport(k, orbit_count)

    def _get_chain(self, max_degree: int) -> _StabilizerChain:
        if self.degree > max_degree:
            raise BudgetExceededError(
                f"degree {self.degree} exceeds the stabilizer-chain limit {max_degree}"
            )
        with self._lock:
            if self._chain is None:
                self._chain = _StabilizerChain(self.degree, [g.images for g in self.generators])
            return self._chain

    def order(self, max_degree: int = DEFAULT_MAX_CHAIN_DEGREE) -> int:
        return self._get_chain(max_degree).order()

    def contains(self, p: Permutation, max_degree: int = DEFAULT_MAX_CHAIN_DEGREE) -> bool:
        return self._get_chain(max_degree).contains(p.images)

    def is_sym_or_alt(self, max_degree: int = DEFAULT_MAX_CHAIN_DEGREE) -> bool:
        n = self.degree
        full = math.factorial(n)
        if n <= 2:
            return self.order(max_degree) == full
        if not self.is_transitive():
            return False
        return self.order(max_degree) in (full, full // 2)

    def elements(self, budget: int = 1_000_000) -> set[Permutation]:
        """Every group element, by closure under right multiplication by generators."""
        ident = identity(self.degree)
        found = {ident}
        queue = deque([ident])
        while queue:
            x = queue.popleft()
            for g in self.generators:
                y = compose(x, g)
                if y not in found:
                    found.add(y)
                    if len(found) > budget:
                        raise BudgetExceededError(f"group has more than {budget} elements")
                    queue.append(y)
        return found


def orbits(h: GroupHandle) -> list[list[int]]:
    return h.orbits()


def is_transitive(h: GroupHandle) -> bool:
    return h.is_transitive()


def is_k_transitive(h: GroupHandle, k: int, budget: int = DEFAULT_TUPLE_BUDGET) -> TupleOrbitReport:
    return h.is_k_transitive(k, budget)


def group_order(h: GroupHandle, max_degree: int = DEFAULT_MAX_CHAIN_DEGREE) -> int:
    return h.order(max_degree)


def is_sym_or_alt(h: GroupHandle, max_degree: int = DEFAULT_MAX_CHAIN_DEGREE) -> bool:
    return h.is_sym_or_alt(max_degree)

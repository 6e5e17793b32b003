"""Closed-form leading-order probabilities with an error band.

Each evaluator returns ``(value, band)``. The band stands in for the
unspecified ``O(.)`` remainder and is ``C / n**(exponent + 1)`` for the
relevant exponent, with ``C`` configurable (default 10).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

from ..errors import InvalidParameterError

__all__ = [
    "DEFAULT_BAND_CONSTANT",
    "FORMULAS",
    "formula_value",
    "lift_connectivity",
    "iterated_connectivity",
    "stage_exponents",
    "transitivity_failure_bound",
]

DEFAULT_BAND_CONSTANT = 10.0


def lift_connectivity(n: int, l: int, C: float = DEFAULT_BAND_CONSTANT) -> tuple[float, float]:
    """``1 - 1/n**(l-1)`` with band ``C/n**l``."""
    if n < 1 or l < 1:
        raise InvalidParameterError("need n >= 1 and l >= 1")
    return 1.0 - n ** -(l - 1), C / n**l


def stage_exponents(signature: Sequence[int], l: int) -> list[int]:
    """Failure exponent per stage: ``l-1`` for the first, ``(l-1)*n1*...*n_{i-1}`` after."""
    out = []
    below = 1
    for n in signature:
        out.append((l - 1) * below)
        below *= n
    return out


def iterated_connectivity(
    signature: Sequence[int], l: int, C: float = DEFAULT_BAND_CONSTANT
) -> tuple[float, float]:
    """Product over stages of ``1 - 1/n_i**e_i``; the band adds the per-stage bands."""
    if l < 1 or not signature or any(n < 1 for n in signature):
        raise InvalidParameterError("need l >= 1 and a signature of positive degrees")
    value = 1.0
    band = 0.0
    for n, e in zip(signature, stage_exponents(signature, l)):
        value *= 1.0 - n ** -e
        band += C / n ** (e + 1)
    return value, band


def transitivity_failure_bound(n: int, l: int) -> Fraction:
    """Union bound ``sum_{1 <= r <= n/2} C(n, r)**(1 - l)`` on intransitivity."""
    if n < 1 or l < 1:
        raise InvalidParameterError("need n >= 1 and l >= 1")
    return sum((Fraction(1, math.comb(n, r) ** (l - 1)) for r in range(1, n // 2 + 1)), Fraction(0))


def _regular(n: int, d: int, C: float = DEFAULT_BAND_CONSTANT) -> tuple[float, float]:
    return lift_connectivity(n, d, C)


def _bound(n: int, l: int, C: float = DEFAULT_BAND_CONSTANT) -> tuple[float, float]:
    return float(transitivity_failure_bound(n, l)), 0.0


FORMULAS: dict[str, Callable[..., tuple[float, float]]] = {
    # random n-lift of a base graph with Betti number l is connected
    "lift-connectivity": lift_connectivity,
    # l random permutations generate S_n or A_n
    "sym-or-alt": lift_connectivity,
    # expansion bounded below by a positive constant
    "lift-expansion": lift_connectivity,
    # lift of the bouquet of d loops is connected / has expansion >= 1
    "regular-connectivity": _regular,
    "regular-expansion": _regular,
    # iterated lift connected, and l random wreath elements act transitively
    "iterated-connectivity": iterated_connectivity,
    "wreath-transitivity": iterated_connectivity,
    # upper bound on the probability of failing to be transitive
    "transitivity-failure-bound": _bound,
}


def formula_value(name: str, *params, C: float = DEFAULT_BAND_CONSTANT) -> tuple[float, float]:
    try:
        fn = FORMULAS[name]
    except KeyError:
        raise InvalidParameterError(f"unknown formula {name!r}; known: {sorted(FORMULAS)}") from None
    return fn(*params, C=C)

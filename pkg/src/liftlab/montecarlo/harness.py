"""Seeded trial runner and binomial estimates.

Trials are cut into blocks of ``BLOCK_SIZE`` consecutive trial indices. Block
``b`` of a run keyed by ``key`` draws from the stream
``SeedSequence(seed, spawn_key=key + (b,))``, so trial ``t`` always sees the
same randomness whatever the number of workers. Workers only change which
process evaluates a block; results are reassembled in block order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Any, Callable, Sequence

import numpy as np

from ..errors import InvalidParameterError

__all__ = [
    "BLOCK_SIZE",
    "DEFAULT_SEED",
    "CONFIDENCE",
    "block_rng",
    "run_blocks",
    "run_trials",
    "count_successes",
    "wilson_interval",
    "EstimateResult",
    "estimate_event",
    "two_proportion_test",
]

BLOCK_SIZE = 4096
DEFAULT_SEED = 20240611
CONFIDENCE = 0.99

BlockFn = Callable[[np.random.Generator, int], Any]


def block_rng(seed: int, key: Sequence[int], block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key) + (int(block),))
    return np.random.Generator(np.random.PCG64(ss))


def _run_one(args):
    fn, seed, key, block, count = args
    return fn(block_rng(seed, key, block), count)


def run_blocks(
    fn: BlockFn, trials: int, seed: int, key: Sequence[int] = (), workers: int = 1
) -> list:
    """Evaluate ``fn(rng, count)`` on every block; list of block results in order."""
    if trials < 1:
        raise InvalidParameterError("trials must be >= 1")
    if workers < 1:
        raise InvalidParameterError("workers must be >= 1")
    jobs = []
    for b, start in enumerate(range(0, trials, BLOCK_SIZE)):
        jobs.append((fn, seed, tuple(key), b, min(BLOCK_SIZE, trials - start)))
    if workers == 1 or len(jobs) == 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, jobs))


def run_trials(fn: BlockFn, trials: int, seed: int, key: Sequence[int] = (), workers: int = 1) -> list:
    """Like ``run_blocks`` for block functions that return per-trial lists; flattened."""
    out: list = []
    for part in run_blocks(fn, trials, seed, key, workers):
        out.extend(part)
    return out


def count_successes(
    sampler: BlockFn, trials: int, seed: int, key: Sequence[int] = (), workers: int = 1
) -> int:
    return int(sum(int(np.count_nonzero(r)) for r in run_blocks(sampler, trials, seed, key, workers)))


def wilson_interval(successes: int, trials: int, confidence: float = CONFIDENCE) -> tuple[float, float]:
    if trials < 1:
        raise InvalidParameterError("trials must be >= 1")
    z = NormalDist().inv_cdf(1 - (1 - confidence) / 2)
    p = successes / trials
    z2n = z * z / trials
    centre = (p + z2n / 2) / (1 + z2n)
    half = z / (1 + z2n) * math.sqrt(p * (1 - p) / trials + z2n / (4 * trials))
    lo, hi = max(0.0, centre - half), min(1.0, centre + half)
    return min(lo, p), max(hi, p)


def _fraction_dict(x: Fraction | None) -> dict | None:
    if x is None:
        return None
    return {"fraction": str(x), "float": float(x)}


@dataclass
class EstimateResult:
    event: str
    trials: int
    successes: int
    p_hat: float = field(init=False)
    ci_low: float = field(init=False)
    ci_high: float = field(init=False)
    confidence: float = CONFIDENCE
    formula_value: float | None = None
    formula_band: float | None = None
    exact_value: Fraction | None = None

    def __post_init__(self):
        if not 0 <= self.successes <= self.trials:
            raise InvalidParameterError("successes must lie in [0, trials]")
        self.p_hat = self.successes / self.trials
        self.ci_low, self.ci_high = wilson_interval(self.successes, self.trials, self.confidence)

    def ci_contains(self, x: float | Fraction) -> bool:
        return self.ci_low <= float(x) <= self.ci_high

    @property
    def failure_rate(self) -> float:
        return 1.0 - self.p_hat

    def exact_in_ci(self) -> bool | None:
        return None if self.exact_value is None else self.ci_contains(self.exact_value)

    def within_formula_band(self) -> bool | None:
        if self.formula_value is None:
            return None
        band = self.formula_band or 0.0
        return self.formula_value - band <= self.p_hat <= self.formula_value + band

    def to_dict(self) -> dict:
        return {
            "event": self.event,
            "trials": self.trials,
            "successes": self.successes,
            "p_hat": self.p_hat,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "confidence": self.confidence,
            "formula_value": self.formula_value,
            "formula_band": self.formula_band,
            "within_formula_band": self.within_formula_band(),
            "exact_value": _fraction_dict(self.exact_value),
            "exact_in_ci": self.exact_in_ci(),
        }


def estimate_event(
    sampler: BlockFn,
    trials: int,
    seed: int = DEFAULT_SEED,
    *,
    key: Sequence[int] = (),
    workers: int = 1,
    event: str | None = None,
    formula: tuple[float, float] | None = None,
    exact: Fraction | None = None,
) -> EstimateResult:
    successes = count_successes(sampler, trials, seed, key, workers)
    value, band = formula if formula is not None else (None, None)
    return EstimateResult(
        event or getattr(sampler, "name", type(sampler).__name__),
        trials,
        successes,
        formula_value=value,
        formula_band=band,
        exact_value=exact,
    )


def two_proportion_test(s1: int, n1: int, s2: int, n2: int) -> tuple[float, float]:
    """Pooled two-sided z-test for equal proportions; returns ``(z, p_value)``."""
    pooled = (s1 + s2) / (n1 + n2)
    var = pooled * (1 - pooled) * (1 / n1 + 1 / n2)
    if var == 0:
        return 0.0, 1.0
    z = (s1 / n1 - s2 / n2) / math.sqrt(var)
    return z, 2 * (1 - NormalDist().cdf(abs(z)))

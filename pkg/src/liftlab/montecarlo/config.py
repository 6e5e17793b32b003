"""Experiment configuration, dispatch and the output document."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction
from typing import Any

from .. import __version__
from ..errors import InvalidParameterError
from ..graph import MultiGraph, betti_number, bouquet, parse_family
from .exact import ENUMERATION_BUDGET, enumerate_transitive_probability, exact_transitive_probability
from .experiments import (
    KEYS,
    exhaustive_barbell,
    experiment_barbell,
    experiment_connectivity,
    experiment_delta_connectivity,
    experiment_expansion,
    experiment_homotopy_invariance,
    experiment_iterated_connectivity,
    experiment_regular_multigraph,
    experiment_wreath_transitivity,
    slope_fit,
)
from .formulas import DEFAULT_BAND_CONSTANT, formula_value, transitivity_failure_bound
from .harness import DEFAULT_SEED, EstimateResult, estimate_event
from .samplers import (
    IteratedLiftConnected,
    KTransitive,
    LiftConnected,
    SymOrAlt,
    Transitive,
    WreathTransitive,
)

__all__ = [
    "KINDS",
    "ExperimentConfig",
    "estimate",
    "run_experiment",
    "run_document",
    "payload_hash",
    "canonical_json",
    "with_workers",
]

KINDS = (
    "connectivity",
    "transitive",
    "sym-or-alt",
    "k-transitive",
    "expansion",
    "delta-conn",
    "barbell",
    "iterated",
    "wreath",
    "regular",
    "homotopy",
    "exact",
    "slope",
)

@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    family: str | None = None
    graph_file: str | None = None
    families: tuple[str, ...] = ()
    n: int | None = None
    ns: tuple[int, ...] = ()
    signature: tuple[int, ...] = ()
    l: int | None = None
    k: int | None = None
    d: int | None = None
    delta: int | None = None
    trials: int = 10_000
    expansion_trials: int = 1000
    seed: int = DEFAULT_SEED
    workers: int = 1
    band_constant: float = DEFAULT_BAND_CONSTANT
    exhaustive: bool = False
    method: str = "recursion"
    exact_n: int = 3

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameterError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise InvalidParameterError("trials must be >= 1")
        if self.expansion_trials < 1:
            raise InvalidParameterError("expansion trials must be >= 1")
        if self.workers < 1:
            raise InvalidParameterError("workers must be >= 1")
        if self.seed < 0:
            raise InvalidParameterError("seed must be non-negative")
        for name in ("n", "l", "k", "d", "delta"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise InvalidParameterError(f"{name} must be non-negative")
        if any(x < 1 for x in self.ns) or any(x < 1 for x in self.signature):
            raise InvalidParameterError("degrees must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("families", "ns", "signature"):
            d[key] = list(d[key])
        return d

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise InvalidParameterError(f"unknown config fields: {sorted(extra)}")
        data = dict(data)
        for key in ("families", "ns", "signature"):
            if key in data and data[key] is not None:
                data[key] = tuple(data[key])
        return cls(**data)

    def graph(self) -> MultiGraph:
        if self.graph_file is not None:
            return MultiGraph.from_file(self.graph_file)
        if self.family is not None:
            return parse_family(self.family)
        raise InvalidParameterError(f"{self.kind} needs --family or --graph")

    def need(self, *names: str) -> None:
        missing = [x for x in names if not getattr(self, x)]
        if missing:
            raise InvalidParameterError(f"{self.kind} needs: {', '.join(missing)}")

    def degrees(self) -> tuple[int, ...]:
        if self.ns:
            return self.ns
        if self.n is not None:
            return (self.n,)
        raise InvalidParameterError(f"{self.kind} needs --n or --ns")


def _need_int(cfg: ExperimentConfig, name: str) -> int:
    value = getattr(cfg, name)
    if value is None:
        raise InvalidParameterError(f"{cfg.kind} needs --{name}")
    return value


def estimate(cfg: ExperimentConfig) -> EstimateResult:
    """Single Bernoulli estimate for the event kinds; keyed exactly like ``run_experiment``."""
    C = cfg.band_constant
    common = dict(workers=cfg.workers)
    if cfg.kind == "connectivity":
        g = cfg.graph()
        n = cfg.degrees()[0]
        l = betti_number(g)
        return estimate_event(
            LiftConnected(g, n),
            cfg.trials,
            cfg.seed,
            key=(KEYS["connectivity"], n),
            formula=formula_value("lift-connectivity", n, l, C=C) if l >= 1 else None,
            exact=exact_transitive_probability(n, l),
            **common,
        )
    if cfg.kind == "transitive":
        n, l = cfg.degrees()[0], _need_int(cfg, "l")
        return estimate_event(
            Transitive(n, l),
            cfg.trials,
            cfg.seed,
            key=(KEYS["transitive"], n, l),
            formula=formula_value("lift-connectivity", n, l, C=C) if l >= 1 else None,
            exact=exact_transitive_probability(n, l),
            **common,
        )
    if cfg.kind == "sym-or-alt":
        n, l = cfg.degrees()[0], _need_int(cfg, "l")
        return estimate_event(
            SymOrAlt(n, l),
            cfg.trials,
            cfg.seed,
            key=(KEYS["sym-or-alt"], n, l),
            formula=formula_value("sym-or-alt", n, l, C=C) if l >= 1 else None,
            **common,
        )
    if cfg.kind == "k-transitive":
        n, l, k = cfg.degrees()[0], _need_int(cfg, "l"), _need_int(cfg, "k")
        return estimate_event(
            KTransitive(n, l, k), cfg.trials, cfg.seed, key=(KEYS["k-transitive"], n, l, k), **common
        )
    if cfg.kind == "iterated":
        cfg.need("signature")
        g = cfg.graph()
        return estimate_event(
            IteratedLiftConnected(g, cfg.signature),
            cfg.trials,
            cfg.seed,
            key=(KEYS["iterated"],) + cfg.signature,
            **common,
        )
    if cfg.kind == "wreath":
        cfg.need("signature")
        l = _need_int(cfg, "l")
        return estimate_event(
            WreathTransitive(cfg.signature, l),
            cfg.trials,
            cfg.seed,
            key=(KEYS["wreath"], l) + cfg.signature,
            **common,
        )
    if cfg.kind == "regular":
        d, n = _need_int(cfg, "d"), cfg.degrees()[0]
        return estimate_event(
            LiftConnected(bouquet(d), n),
            cfg.trials,
            cfg.seed,
            key=(KEYS["regular"], d, n),
            formula=formula_value("regular-connectivity", n, d, C=C),
            exact=exact_transitive_probability(n, d),
            **common,
        )
    raise InvalidParameterError(f"{cfg.kind} is not a single-estimate experiment")


def _frac(x: Fraction) -> dict:
    return {"fraction": str(x), "float": float(x)}


def _exact_payload(cfg: ExperimentConfig) -> dict:
    n, l = cfg.degrees()[0], _need_int(cfg, "l")
    if cfg.method not in ("recursion", "enumerate", "both"):
        raise InvalidParameterError(f"unknown method {cfg.method!r}")
    rec = exact_transitive_probability(n, l)
    out: dict[str, Any] = {"n": n, "l": l, "recursion": _frac(rec)}
    ok = True
    if cfg.method in ("enumerate", "both"):
        enum = enumerate_transitive_probability(n, l, ENUMERATION_BUDGET)
        out["enumeration"] = _frac(enum)
        ok = enum == rec
        out["agree"] = ok
    value = rec
    out["probability"] = _frac(value)
    if l >= 1:
        bound = transitivity_failure_bound(n, l)
        out["failure_bound"] = _frac(bound)
        out["bound_holds"] = 1 - value <= bound
        # the union bound is informative only for l >= 2
        if l >= 2:
            ok = ok and out["bound_holds"]
    out["ok"] = ok
    return out


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Run ``cfg`` and return the payload; ``payload['ok']`` is the overall verdict."""
    kind = cfg.kind
    C = cfg.band_constant
    seed, workers = cfg.seed, cfg.workers
    if kind == "exact":
        return _exact_payload(cfg)
    if kind == "connectivity":
        return experiment_connectivity(cfg.graph(), cfg.degrees(), cfg.trials, seed, workers, C)
    if kind in ("transitive", "sym-or-alt", "k-transitive"):
        res = estimate(cfg)
        ok = res.exact_in_ci()
        return {"experiment": kind, "estimate": res.to_dict(), "ok": True if ok is None else ok}
    if kind == "slope":
        l = _need_int(cfg, "l")
        if cfg.family or cfg.graph_file:
            g = cfg.graph()
            if betti_number(g) != l:
                raise InvalidParameterError("--l must equal the Betti number of the base graph")
            sampler_for = lambda n: LiftConnected(g, n)  # noqa: E731
        else:
            sampler_for = lambda n: Transitive(n, l)  # noqa: E731
        out = slope_fit(sampler_for, cfg.degrees(), l, cfg.trials, seed, workers)
        out["experiment"] = "slope"
        out["ok"] = True
        return out
    if kind == "barbell":
        k, n = _need_int(cfg, "k"), cfg.degrees()[0]
        if cfg.exhaustive:
            return exhaustive_barbell(k, n)
        return experiment_barbell(k, n, cfg.trials, seed, workers)
    if kind == "delta-conn":
        return experiment_delta_connectivity(
            cfg.graph(), cfg.degrees(), cfg.trials, seed, workers, cfg.delta
        )
    if kind == "homotopy":
        if len(cfg.families) < 2:
            raise InvalidParameterError("homotopy needs at least two --family values")
        graphs = [(name, parse_family(name)) for name in cfg.families]
        return experiment_homotopy_invariance(
            graphs, cfg.degrees()[0], cfg.trials, seed, workers, cfg.exact_n
        )
    if kind == "wreath":
        cfg.need("signature")
        return experiment_wreath_transitivity(cfg.signature, _need_int(cfg, "l"), cfg.trials, seed, workers, C)
    if kind == "iterated":
        cfg.need("signature")
        return experiment_iterated_connectivity(cfg.graph(), cfg.signature, cfg.trials, seed, workers, C)
    if kind == "regular":
        return experiment_regular_multigraph(
            _need_int(cfg, "d"),
            cfg.degrees()[0],
            cfg.trials,
            seed,
            workers,
            C,
            cfg.expansion_trials,
        )
    if kind == "expansion":
        return experiment_expansion(cfg.graph(), cfg.degrees()[0], cfg.trials, seed, workers)
    raise InvalidParameterError(f"unknown experiment kind {kind!r}")


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def payload_hash(payload: dict) -> str:
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


def run_document(cfg: ExperimentConfig) -> dict:
    """Full output record: tool, version, resolved config, seed, payload, hash and duration."""
    start = time.perf_counter()
    payload = run_experiment(cfg)
    return {
        "tool": "liftlab",
        "version": __version__,
        "config": cfg.to_dict(),
        "seed": cfg.seed,
        "payload": payload,
        "payload_sha256": payload_hash(payload),
        "duration_seconds": round(time.perf_counter() - start, 6),
    }


def with_workers(cfg: ExperimentConfig, workers: int) -> ExperimentConfig:
    return replace(cfg, workers=workers)

"""Seeded Monte Carlo experiments on random lifts, with exact oracles and closed forms."""

from .config import ExperimentConfig, estimate, run_document, run_experiment
from .exact import (
    exact_lift_connectivity,
    exact_transitive_probability,
    exact_wreath_transitive_probability,
    stagewise_transitive_probability,
)
from .formulas import formula_value, transitivity_failure_bound
from .harness import DEFAULT_SEED, EstimateResult, estimate_event, wilson_interval
from .samplers import (
    IteratedLiftConnected,
    KTransitive,
    LiftConnected,
    SymOrAlt,
    Transitive,
    WreathTransitive,
    event_k_transitive,
    event_lift_connected,
    event_sym_or_alt,
    event_transitive,
)
from .experiments import (
    exhaustive_barbell,
    experiment_barbell,
    experiment_delta_connectivity,
    experiment_expansion,
    experiment_homotopy_invariance,
    experiment_iterated_connectivity,
    experiment_regular_multigraph,
    experiment_wreath_transitivity,
    slope_fit,
)

__all__ = [
    "DEFAULT_SEED",
    "EstimateResult",
    "ExperimentConfig",
    "IteratedLiftConnected",
    "KTransitive",
    "LiftConnected",
    "SymOrAlt",
    "Transitive",
    "WreathTransitive",
    "estimate",
    "estimate_event",
    "event_k_transitive",
    "event_lift_connected",
    "event_sym_or_alt",
    "event_transitive",
    "exact_lift_connectivity",
    "exact_transitive_probability",
    "exact_wreath_transitive_probability",
    "exhaustive_barbell",
    "experiment_barbell",
    "experiment_delta_connectivity",
    "experiment_expansion",
    "experiment_homotopy_invariance",
    "experiment_iterated_connectivity",
    "experiment_regular_multigraph",
    "experiment_wreath_transitivity",
    "formula_value",
    "run_document",
    "run_experiment",
    "slope_fit",
    "stagewise_transitive_probability",
    "transitivity_failure_bound",
    "wilson_interval",
]

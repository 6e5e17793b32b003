"""Experiments comparing sampled lifts with exact values and closed forms.

Every experiment returns a JSON-ready dict with an ``ok`` flag that is false
when one of its checks fails (oracle mismatch, a cut above the barbell bound,
a containment violation, ...). Random streams are keyed per experiment and
per parameter so that experiments never share randomness.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from functools import partial
from typing import Callable, Sequence

import numpy as np

from ..analysis import edge_connectivity, edge_expansion_exact, is_connected, min_degree
from ..errors import (
    BudgetExceededError,
    InsufficientFailuresError,
    InvalidParameterError,
    SizeLimitError,
)
from ..graph import MultiGraph, bouquet, barbell, betti_number, is_connected_base
from ..lift import (
    LiftAssignment,
    build_lift,
    random_lift,
    random_stagewise_lift,
    walk_subgroup_generators,
)
from .exact import (
    enumerate_assignments,
    exact_lift_connectivity,
    exact_transitive_probability,
    exact_wreath_transitive_probability,
    iterated_lift_distribution,
    stagewise_lift_distribution,
    stagewise_transitive_probability,
)
from .formulas import DEFAULT_BAND_CONSTANT, formula_value, lift_connectivity
from .harness import (
    DEFAULT_SEED,
    EstimateResult,
    estimate_event,
    run_trials,
    two_proportion_test,
)
from .samplers import IteratedLiftConnected, LiftConnected, Transitive, WreathTransitive

__all__ = [
    "KEYS",
    "HOMOTOPY_ALPHA",
    "expansion_threshold",
    "slope_fit",
    "experiment_connectivity",
    "experiment_barbell",
    "exhaustive_barbell",
    "experiment_delta_connectivity",
    "experiment_homotopy_invariance",
    "experiment_wreath_transitivity",
    "experiment_iterated_connectivity",
    "experiment_regular_multigraph",
    "experiment_expansion",
    "transitive_sampler",
]

# first component of every stream key
KEYS = {
    "connectivity": 1,
    "transitive": 2,
    "sym-or-alt": 3,
    "k-transitive": 4,
    "parity": 5,
    "iterated": 6,
    "wreath": 7,
    "regular-expansion": 8,
    "expansion": 9,
    "delta-conn": 10,
    "barbell": 11,
    "homotopy": 12,
    "slope": 13,
    "stagewise": 14,
    "regular": 15,
}

HOMOTOPY_ALPHA = 0.001
EXACT_LIFT_BUDGET = 1_000_000


def expansion_threshold(g: MultiGraph) -> Fraction:
    """The expansion constant used by the expansion experiment, ``1 / (5 |V|)``."""
    return Fraction(1, 5 * g.vertex_count)


def _exact_or_none(fn: Callable[[], Fraction]) -> Fraction | None:
    try:
        return fn()
    except BudgetExceededError:
        return None


def experiment_connectivity(
    g: MultiGraph,
    ns: Sequence[int],
    trials: int,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    C: float = DEFAULT_BAND_CONSTANT,
) -> dict:
    """Connectivity of random n-lifts of ``g``, against the exact transitivity law."""
    l = betti_number(g)
    rows = []
    ok = True
    for n in ns:
        exact = exact_transitive_probability(n, l)
        res = estimate_event(
            LiftConnected(g, n),
            trials,
            seed,
            key=(KEYS["connectivity"], n),
            workers=workers,
            formula=lift_connectivity(n, l, C) if l >= 1 else None,
            exact=exact,
        )
        ok &= bool(res.exact_in_ci())
        rows.append({"n": n, **res.to_dict()})
    return {"experiment": "connectivity", "betti": l, "ok": ok, "rows": rows}


def slope_fit(
    sampler_for: Callable[[int], Callable],
    ns: Sequence[int],
    l: int,
    trials: int,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> dict:
    """Least-squares slope of log(1 - p_hat) against log n.

    For ``l = 1`` the failure probability tends to 1, so the success
    probability (exactly ``1/n``) is fitted instead.
    """
    if len(set(ns)) < 4:
        raise InvalidParameterError("slope fit needs at least 4 distinct n values")
    use_success = l == 1
    rows = []
    xs, ys = [], []
    for n in ns:
        res = estimate_event(
            sampler_for(n), trials, seed, key=(KEYS["slope"], n, l), workers=workers
        )
        count = res.successes if use_success else res.trials - res.successes
        if count == 0:
            raise InsufficientFailuresError(
                f"no {'successes' if use_success else 'failures'} at n={n}; raise the trial count"
            )
        xs.append(math.log(n))
        ys.append(math.log(count / res.trials))
        rows.append({"n": n, **res.to_dict()})
    slope, intercept = np.polyfit(xs, ys, 1)
    return {
        "fitted": "success" if use_success else "failure",
        "slope": float(slope),
        "intercept": float(intercept),
        "expected_slope": -1 if use_success else -(l - 1),
        "rows": rows,
    }


def _barbell_cut(a: LiftAssignment) -> int:
    return edge_connectivity(build_lift(a)).edge_connectivity


# block functions live at module level so worker processes can unpickle them


def _barbell_block(g, n, rng, count):
    return [_barbell_cut(random_lift(g, n, rng)) for _ in range(count)]


def _delta_block(g, n, delta, rng, count):
    return [
        edge_connectivity(build_lift(random_lift(g, n, rng))).edge_connectivity >= delta
        for _ in range(count)
    ]


def _stagewise_block(g, sig, rng, count):
    return [is_connected(random_stagewise_lift(g, sig, rng)) for _ in range(count)]


def _regular_expansion_block(g, n, rng, count):
    rows = []
    for _ in range(count):
        a = random_lift(g, n, rng)
        sym = walk_subgroup_generators(a).is_sym_or_alt()
        rows.append((sym, sym and edge_expansion_exact(build_lift(a)).expansion >= 1))
    return rows


def _expansion_block(g, n, k, xi, rng, count):
    out = []
    for _ in range(count):
        a = random_lift(g, n, rng)
        grp = walk_subgroup_generators(a)
        big = edge_expansion_exact(build_lift(a)).expansion >= xi
        out.append((big, grp.is_sym_or_alt(), grp.is_k_transitive(k).transitive_on_k_tuples))
    return out


def experiment_barbell(
    k: int, n: int, trials: int, seed: int = DEFAULT_SEED, workers: int = 1
) -> dict:
    """Edge connectivity of random n-lifts of the barbell; never above ``n`` for ``n < k``."""
    if n >= k:
        raise InvalidParameterError("the barbell control needs n < k")
    g = barbell(k)
    cuts = run_trials(partial(_barbell_block, g, n), trials, seed, (KEYS["barbell"], k, n), workers)
    dist = Counter(cuts)
    return {
        "experiment": "barbell",
        "k": k,
        "n": n,
        "trials": trials,
        "max_cut": max(cuts),
        "cut_distribution": {str(c): dist[c] for c in sorted(dist)},
        "ok": max(cuts) <= n,
    }


def exhaustive_barbell(k: int, n: int, budget: int = EXACT_LIFT_BUDGET) -> dict:
    """Every labelling of every barbell edge (no flattening), so nothing is sampled."""
    if n >= k:
        raise InvalidParameterError("the barbell control needs n < k")
    g = barbell(k)
    dist: Counter = Counter()
    for a, _ in enumerate_assignments(g, n, flatten=False, budget=budget):
        dist[_barbell_cut(a)] += 1
    total = sum(dist.values())
    return {
        "experiment": "barbell-exhaustive",
        "k": k,
        "n": n,
        "assignments": total,
        "max_cut": max(dist),
        "cut_distribution": {str(c): dist[c] for c in sorted(dist)},
        "ok": max(dist) <= n,
    }


def experiment_delta_connectivity(
    g: MultiGraph,
    ns: Sequence[int],
    trials: int,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    delta: int | None = None,
) -> dict:
    """Frequency of edge connectivity >= delta, with a non-increasing failure trend check."""
    delta = min_degree(g) if delta is None else delta
    rows = []
    for n in ns:
        hits = run_trials(partial(_delta_block, g, n, delta), trials, seed, (KEYS["delta-conn"], n, delta), workers)
        res = EstimateResult("delta_connected", trials, sum(hits))
        rows.append(
            {
                "n": n,
                "delta": delta,
                "threshold_holds": n > (delta - 1) ** 6 * g.vertex_count**5,
                "failure_frequency": res.failure_rate,
                **res.to_dict(),
            }
        )
    ordered = sorted(rows, key=lambda r: r["n"])
    fails = [r["failure_frequency"] for r in ordered]
    monotone = all(a >= b for a, b in zip(fails, fails[1:]))
    return {
        "experiment": "delta-conn",
        "delta": delta,
        "non_increasing_failures": monotone,
        "ok": monotone,
        "rows": rows,
    }


def experiment_homotopy_invariance(
    graphs: Sequence[tuple[str, MultiGraph]],
    n: int,
    trials: int,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    exact_n: int = 3,
) -> dict:
    """Lift connectivity depends on the base only through its Betti number.

    Exact probabilities at ``exact_n`` come from building every flattened
    lift. Pairs with equal Betti number must agree exactly and must not be
    told apart by a two-proportion test at level 0.001; pairs with
    different Betti numbers must differ exactly.
    """
    if len(graphs) < 2:
        raise InvalidParameterError("homotopy comparison needs at least two graphs")
    for name, g in graphs:
        if not is_connected_base(g):
            raise InvalidParameterError(f"{name} is not connected")
    info = []
    for idx, (name, g) in enumerate(graphs):
        exact = exact_lift_connectivity(g, exact_n, budget=EXACT_LIFT_BUDGET)
        res = estimate_event(
            LiftConnected(g, n), trials, seed, key=(KEYS["homotopy"], idx, n), workers=workers
        )
        info.append((name, betti_number(g), exact, res))
    pairs = []
    ok = True
    for i in range(len(info)):
        for j in range(i + 1, len(info)):
            n1, b1, e1, r1 = info[i]
            n2, b2, e2, r2 = info[j]
            z, p = two_proportion_test(r1.successes, r1.trials, r2.successes, r2.trials)
            same = b1 == b2
            exact_ok = (e1 == e2) if same else (e1 != e2)
            test_ok = p >= HOMOTOPY_ALPHA if same else True
            ok &= exact_ok and test_ok
            pairs.append(
                {
                    "graphs": [n1, n2],
                    "same_betti": same,
                    "exact_equal": e1 == e2,
                    "z": z,
                    "p_value": p,
                    "rejected": p < HOMOTOPY_ALPHA,
                    "ok": exact_ok and test_ok,
                }
            )
    return {
        "experiment": "homotopy",
        "n": n,
        "exact_n": exact_n,
        "alpha": HOMOTOPY_ALPHA,
        "graphs": [
            {
                "name": name,
                "betti": b,
                "exact": {"fraction": str(e), "float": float(e)},
                **r.to_dict(),
            }
            for name, b, e, r in info
        ],
        "pairs": pairs,
        "ok": ok,
    }


def experiment_wreath_transitivity(
    signature: Sequence[int],
    l: int,
    trials: int,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    C: float = DEFAULT_BAND_CONSTANT,
    budget: int = EXACT_LIFT_BUDGET,
) -> dict:
    """``l`` random wreath elements acting transitively, against enumeration and the stage product."""
    sig = tuple(int(x) for x in signature)
    exhaustive = _exact_or_none(lambda: exact_wreath_transitive_probability(sig, l, budget))
    stagewise = stagewise_transitive_probability(sig, l)
    res = estimate_event(
        WreathTransitive(sig, l),
        trials,
        seed,
        key=(KEYS["wreath"], l) + sig,
        workers=workers,
        formula=formula_value("wreath-transitivity", sig, l, C=C),
        exact=stagewise,
    )
    checks = {
        "stagewise_in_ci": res.exact_in_ci(),
        "within_formula_band": res.within_formula_band(),
    }
    if exhaustive is not None:
        checks["exhaustive_equals_stagewise"] = exhaustive == stagewise
    if len(sig) == 1:
        checks["single_stage_reduces"] = stagewise == exact_transitive_probability(sig[0], l)
    return {
        "experiment": "wreath",
        "signature": list(sig),
        "l": l,
        "exhaustive": None
        if exhaustive is None
        else {"fraction": str(exhaustive), "float": float(exhaustive)},
        "stagewise": {"fraction": str(stagewise), "float": float(stagewise)},
        "estimate": res.to_dict(),
        "checks": checks,
        "ok": all(checks.values()),
    }


def experiment_iterated_connectivity(
    g: MultiGraph,
    signature: Sequence[int],
    trials: int,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    C: float = DEFAULT_BAND_CONSTANT,
    budget: int = 200_000,
) -> dict:
    """Iterated lifts built from wreath labels against lifts built stage by stage.

    Both constructions are sampled and compared by a two-proportion test.
    When the enumeration fits in ``budget`` the exact laws of
    (connected, edge connectivity) are compared as well.
    """
    sig = tuple(int(x) for x in signature)
    l = betti_number(g)
    exact = stagewise_transitive_probability(sig, l)
    res = estimate_event(
        IteratedLiftConnected(g, sig),
        trials,
        seed,
        key=(KEYS["iterated"],) + sig,
        workers=workers,
        formula=formula_value("iterated-connectivity", sig, l, C=C) if l >= 1 else None,
        exact=exact,
    )
    stage_hits = sum(run_trials(partial(_stagewise_block, g, sig), trials, seed, (KEYS["stagewise"],) + sig, workers))
    stage_res = EstimateResult("stagewise_lift_connected", trials, stage_hits, exact_value=exact)
    z, p = two_proportion_test(res.successes, trials, stage_hits, trials)
    checks = {
        "iterated_exact_in_ci": res.exact_in_ci(),
        "stagewise_exact_in_ci": stage_res.exact_in_ci(),
        "two_proportion_not_rejected": p >= HOMOTOPY_ALPHA,
    }
    out = {
        "experiment": "iterated",
        "signature": list(sig),
        "betti": l,
        "exact": {"fraction": str(exact), "float": float(exact)},
        "iterated": res.to_dict(),
        "stagewise": stage_res.to_dict(),
        "z": z,
        "p_value": p,
    }
    try:
        it = iterated_lift_distribution(g, sig, budget=budget)
        st = stagewise_lift_distribution(g, sig, budget=budget)
    except BudgetExceededError:
        pass
    else:
        checks["exact_distributions_equal"] = it == st
        checks["exact_connected_matches_product"] = (
            sum((v for (conn, _), v in it.items() if conn), Fraction(0)) == exact
        )
        out["exact_distribution"] = [
            {"connected": c, "edge_connectivity": k, "probability": str(v)}
            for (c, k), v in sorted(it.items())
        ]
    out["checks"] = checks
    out["ok"] = all(checks.values())
    return out


def experiment_regular_multigraph(
    d: int,
    n: int,
    trials: int,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    C: float = DEFAULT_BAND_CONSTANT,
    expansion_trials: int = 1000,
) -> dict:
    """Random 2d-regular multigraphs: lifts of the bouquet of ``d`` loops.

    Connectivity is compared with the closed form and with the exact
    transitivity law (``1/n`` for ``d = 1``). For ``n <= 12`` trials whose
    generators give S_n or A_n must all have edge expansion at least 1.
    """
    if d < 1:
        raise InvalidParameterError("d must be >= 1")
    g = bouquet(d)
    exact = exact_transitive_probability(n, d)
    res = estimate_event(
        LiftConnected(g, n),
        trials,
        seed,
        key=(KEYS["regular"], d, n),
        workers=workers,
        formula=formula_value("regular-connectivity", n, d, C=C),
        exact=exact,
    )
    checks = {"exact_in_ci": res.exact_in_ci(), "within_formula_band": res.within_formula_band()}
    if d == 1:
        checks["cycle_count_exact"] = exact == Fraction(1, n)
    out = {"experiment": "regular", "d": d, "n": n, "connectivity": res.to_dict()}
    if 2 <= n <= 12:
        rows = run_trials(partial(_regular_expansion_block, g, n), expansion_trials, seed, (KEYS["regular-expansion"], d, n), workers)
        sym = sum(s for s, _ in rows)
        good = sum(e for _, e in rows)
        checks["sym_or_alt_expansion_at_least_one"] = good == sym
        out["expansion"] = {
            "trials": expansion_trials,
            "sym_or_alt_trials": sym,
            "expansion_at_least_one": good,
            "fraction": good / sym if sym else None,
        }
    out["checks"] = checks
    out["ok"] = all(checks.values())
    return out


def experiment_expansion(
    g: MultiGraph, n: int, trials: int, seed: int = DEFAULT_SEED, workers: int = 1
) -> dict:
    """Exact edge expansion of random lifts against the walk-subgroup hypotheses.

    Trial by trial: a walk-subgroup that is ceil(n/3)-transitive (in
    particular S_n or A_n for n >= 3) must come with expansion at least
    ``1 / (5 |V|)``.
    """
    if n * g.vertex_count > 24:
        raise SizeLimitError("expansion experiment needs n * |V| <= 24")
    xi = expansion_threshold(g)
    k = math.ceil(n / 3)
    rows = run_trials(partial(_expansion_block, g, n, k, xi), trials, seed, (KEYS["expansion"], n), workers)
    expanding = sum(r[0] for r in rows)
    sym = sum(r[1] for r in rows)
    ktrans = sum(r[2] for r in rows)
    violations = sum(1 for big, s, kt in rows if (s or kt) and not big)
    res = EstimateResult("expansion_at_least_xi", trials, expanding)
    checks = {"containment": violations == 0, "frequency_dominates": expanding >= sym}
    return {
        "experiment": "expansion",
        "n": n,
        "xi": {"fraction": str(xi), "float": float(xi)},
        "k": k,
        "estimate": res.to_dict(),
        "sym_or_alt_trials": sym,
        "k_transitive_trials": ktrans,
        "containment_violations": violations,
        "checks": checks,
        "ok": all(checks.values()),
    }


def transitive_sampler(l: int) -> Callable[[int], Transitive]:
    return lambda n: Transitive(n, l)

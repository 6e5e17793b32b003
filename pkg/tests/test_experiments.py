from fractions import Fraction

import pytest

from liftlab.analysis import cut_size, edge_expansion_exact
from liftlab.errors import InsufficientFailuresError, InvalidParameterError, SizeLimitError
from liftlab.graph import barbell, betti_number, bouquet, complete, cycle, path, theta
from liftlab.lift import LiftAssignment, build_lift, walk_subgroup_generators
from liftlab.montecarlo.exact import exact_transitive_probability
from liftlab.montecarlo.experiments import (
    exhaustive_barbell,
    expansion_threshold,
    experiment_barbell,
    experiment_connectivity,
    experiment_delta_connectivity,
    experiment_expansion,
    experiment_homotopy_invariance,
    experiment_iterated_connectivity,
    experiment_regular_multigraph,
    experiment_wreath_transitivity,
    slope_fit,
    transitive_sampler,
)
from liftlab.perm import cycle_perm


def test_connectivity_experiment():
    out = experiment_connectivity(cycle(3), (2, 3), 5000, seed=1)
    assert out["ok"] and out["betti"] == 1
    assert [r["n"] for r in out["rows"]] == [2, 3]
    assert out["rows"][1]["exact_value"]["fraction"] == "1/3"


def test_tree_base_never_connects():
    out = experiment_delta_connectivity(path(3), (2, 3), 40, seed=1)
    assert all(r["p_hat"] == 0 and r["failure_frequency"] == 1 for r in out["rows"])
    exp = experiment_expansion(path(3), 2, 20, seed=1)
    assert exp["estimate"]["p_hat"] == 0 and exp["ok"]


def test_delta_connectivity_rows():
    out = experiment_delta_connectivity(complete(4), (2, 4), 40, seed=2)
    assert out["delta"] == 3
    assert [r["threshold_holds"] for r in out["rows"]] == [False, False]
    assert out["ok"] == out["non_increasing_failures"]


def test_barbell_cut_never_exceeds_n():
    out = experiment_barbell(5, 2, 60, seed=3)
    assert out["ok"] and out["max_cut"] <= 2
    with pytest.raises(InvalidParameterError):
        experiment_barbell(3, 3, 10)


def test_exhaustive_barbell_small():
    out = exhaustive_barbell(3, 2)
    assert out["assignments"] == 2**13
    assert out["ok"] and out["max_cut"] <= 2
    # a lift is disconnected exactly when its cut is 0
    disconnected = 1 - exact_transitive_probability(2, betti_number(barbell(3)))
    assert Fraction(out["cut_distribution"]["0"], 2**13) == disconnected


def test_homotopy_invariance_small():
    graphs = [("bouquet:1", bouquet(1)), ("cycle:3", cycle(3)), ("bouquet:2", bouquet(2))]
    out = experiment_homotopy_invariance(graphs, 3, 3000, seed=4, exact_n=3)
    assert out["ok"]
    by_pair = {tuple(p["graphs"]): p for p in out["pairs"]}
    assert by_pair[("bouquet:1", "cycle:3")]["exact_equal"]
    assert not by_pair[("bouquet:1", "bouquet:2")]["exact_equal"]
    assert out["graphs"][0]["exact"]["fraction"] == "1/3"


def test_slope_fit_single_generator():
    out = slope_fit(transitive_sampler(1), (2, 4, 8, 16), 1, 20_000, seed=5)
    assert out["fitted"] == "success"
    assert out["slope"] == pytest.approx(-1, abs=0.1)


def test_slope_fit_errors():
    with pytest.raises(InvalidParameterError):
        slope_fit(transitive_sampler(2), (2, 3, 4), 2, 100)
    with pytest.raises(InsufficientFailuresError):
        slope_fit(transitive_sampler(3), (40, 50, 60, 70), 3, 10, seed=6)


def test_wreath_single_stage():
    out = experiment_wreath_transitivity((3,), 2, 5000, seed=7)
    assert out["checks"]["single_stage_reduces"]
    assert out["checks"]["exhaustive_equals_stagewise"]
    assert out["stagewise"]["fraction"] == str(exact_transitive_probability(3, 2))


def test_iterated_small():
    out = experiment_iterated_connectivity(cycle(3), (2, 2), 3000, seed=8)
    assert out["ok"], out["checks"]
    assert out["exact"]["fraction"] == "1/4"


def test_regular_single_loop():
    out = experiment_regular_multigraph(1, 5, 5000, seed=9, expansion_trials=50)
    assert out["checks"]["cycle_count_exact"] and out["checks"]["exact_in_ci"]


def test_regular_sym_or_alt_expansion_fails_at_eight():
    out = experiment_regular_multigraph(2, 8, 2000, seed=10, expansion_trials=200)
    assert not out["checks"]["sym_or_alt_expansion_at_least_one"]
    assert out["expansion"]["expansion_at_least_one"] < out["expansion"]["sym_or_alt_trials"]


def test_alternating_group_lift_with_small_expansion():
    # two loops labelled (0 1 2 3)(4 5 6 7) and (3 4 5 6 7) generate A_8,
    # yet {0, 1, 2, 3} is left through only two edges
    s1 = cycle_perm(8, (0, 1, 2, 3), (4, 5, 6, 7))
    s2 = cycle_perm(8, (3, 4, 5, 6, 7))
    a = LiftAssignment(bouquet(2), 8, (s1, s2))
    grp = walk_subgroup_generators(a)
    assert grp.is_sym_or_alt() and grp.order() == 20160
    assert len(grp.elements()) == 20160
    h = build_lift(a)
    assert cut_size(h, {0, 1, 2, 3}) == 2
    assert edge_expansion_exact(h).expansion == Fraction(1, 2)


def test_expansion_experiment():
    out = experiment_expansion(theta(), 3, 30, seed=11)
    assert out["ok"] and out["k"] == 1
    assert out["xi"]["fraction"] == "1/10"
    assert expansion_threshold(complete(4)) == Fraction(1, 20)
    with pytest.raises(SizeLimitError):
        experiment_expansion(complete(4), 7, 1)

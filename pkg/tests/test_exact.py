import math
from fractions import Fraction
from itertools import permutations, product

import pytest

from liftlab.errors import BudgetExceededError, InvalidParameterError
from liftlab.graph import barbell, betti_number, bouquet, complete, cycle, dumbbell, path, theta
from liftlab.montecarlo.exact import (
    enumerate_transitive_probability,
    exact_lift_connectivity,
    exact_transitive_probability,
    exact_wreath_transitive_probability,
    iterated_lift_distribution,
    stagewise_lift_distribution,
    stagewise_transitive_probability,
    transitive_tuple_count,
)
from liftlab.montecarlo.formulas import transitivity_failure_bound


def orbit_oracle(n, l):
    """Count generator tuples whose orbit of point 0 is everything, by plain search."""
    hits = 0
    elems = list(permutations(range(n)))
    for gens in product(elems, repeat=l):
        seen, stack = {0}, [0]
        while stack:
            x = stack.pop()
            for g in gens:
                for y in (g[x], g.index(x)):
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
        hits += len(seen) == n
    return Fraction(hits, math.factorial(n) ** l)


@pytest.mark.parametrize(
    "n,l,value", [(2, 1, Fraction(1, 2)), (3, 1, Fraction(1, 3)), (2, 2, Fraction(3, 4)), (3, 2, Fraction(13, 18))]
)
def test_small_exact_values(n, l, value):
    assert orbit_oracle(n, l) == value
    assert exact_transitive_probability(n, l, "enumerate") == value
    assert exact_transitive_probability(n, l) == value


def test_three_two_respects_failure_bound():
    assert 1 - exact_transitive_probability(3, 2) <= transitivity_failure_bound(3, 2) == Fraction(1, 3)


@pytest.mark.parametrize("n,l", [(n, l) for n in range(1, 6) for l in range(0, 3)] + [(4, 3)])
def test_recursion_matches_enumeration(n, l):
    assert exact_transitive_probability(n, l, "recursion") == enumerate_transitive_probability(n, l)


@pytest.mark.parametrize("n", range(1, 12))
def test_single_permutation_is_cycle_count(n):
    assert exact_transitive_probability(n, 1) == Fraction(1, n)


@pytest.mark.parametrize("n", range(1, 5))
def test_monotone_in_generator_count(n):
    values = [exact_transitive_probability(n, l, "enumerate") for l in range(0, 4)]
    assert values == sorted(values)


@pytest.mark.parametrize("n,l", [(n, l) for n in range(1, 6) for l in range(1, 3)] + [(4, 3), (8, 2), (8, 4)])
def test_failure_bound(n, l):
    assert 1 - exact_transitive_probability(n, l) <= transitivity_failure_bound(n, l)


def test_recursion_reaches_n_8_and_beyond():
    assert 0 < transitive_tuple_count(8, 3) < math.factorial(8) ** 3
    assert 1 - exact_transitive_probability(30, 2) <= transitivity_failure_bound(30, 2)


def test_enumeration_budget_and_errors():
    with pytest.raises(BudgetExceededError):
        enumerate_transitive_probability(8, 2)
    with pytest.raises(InvalidParameterError):
        exact_transitive_probability(3, 2, "guess")
    with pytest.raises(InvalidParameterError):
        transitive_tuple_count(0, 1)


BASES = {
    "cycle": cycle(3),
    "theta": theta(),
    "dumbbell": dumbbell(),
    "bouquet1": bouquet(1),
    "bouquet2": bouquet(2),
    "bouquet3": bouquet(3),
    "k4": complete(4),
    "path": path(3),
}


@pytest.mark.parametrize("name", BASES)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_lift_connectivity_equals_transitivity(name, n):
    g = BASES[name]
    assert exact_lift_connectivity(g, n) == exact_transitive_probability(n, betti_number(g))


@pytest.mark.parametrize("name", ["cycle", "theta", "dumbbell", "bouquet2"])
def test_flattening_does_not_change_probability(name):
    g = BASES[name]
    for n in (2, 3):
        assert exact_lift_connectivity(g, n, flatten=False) == exact_lift_connectivity(g, n)


def test_barbell_three_two_exhaustive_connectivity():
    g = barbell(3)
    assert exact_lift_connectivity(g, 2) == exact_transitive_probability(2, betti_number(g))


def test_wreath_two_two_l2():
    assert exact_wreath_transitive_probability((2, 2), 2) == Fraction(21, 32)
    assert stagewise_transitive_probability((2, 2), 2) == Fraction(21, 32)
    assert stagewise_transitive_probability((2, 2), 2) == exact_transitive_probability(2, 2) * exact_transitive_probability(2, 3)


@pytest.mark.parametrize(
    "sig,l", [((2,), 2), ((3,), 2), ((2, 2), 1), ((2, 2), 2), ((3, 2), 1), ((2, 3), 1), ((2, 2, 2), 1), ((3, 2), 2), ((2, 1), 2)]
)
def test_wreath_enumeration_matches_stage_product(sig, l):
    assert exact_wreath_transitive_probability(sig, l) == stagewise_transitive_probability(sig, l)


def test_wreath_single_stage_reduces():
    for n in (2, 3, 4):
        for l in (1, 2):
            assert stagewise_transitive_probability((n,), l) == exact_transitive_probability(n, l)


def test_wreath_budget():
    with pytest.raises(BudgetExceededError):
        exact_wreath_transitive_probability((3, 3), 3, budget=1000)


@pytest.mark.parametrize("g", [cycle(3), theta(), bouquet(1)], ids=["cycle", "theta", "bouquet1"])
def test_iterated_matches_stagewise_exactly(g):
    it = iterated_lift_distribution(g, (2, 2))
    st = stagewise_lift_distribution(g, (2, 2))
    assert it == st
    assert sum(it.values()) == 1
    connected = sum((v for (c, _), v in it.items() if c), Fraction(0))
    assert connected == stagewise_transitive_probability((2, 2), betti_number(g))


def test_iterated_distribution_cycle_values():
    assert iterated_lift_distribution(cycle(3), (2, 2)) == {
        (False, 0): Fraction(3, 4),
        (True, 2): Fraction(1, 4),
    }

from collections import Counter
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from liftlab.analysis import is_connected
from liftlab.errors import GraphDisconnectedError, InvalidParameterError, InvalidWalkError
from liftlab.graph import (
    MultiGraph,
    barbell,
    bouquet,
    components,
    cycle,
    path,
    spanning_tree,
    theta,
)
from liftlab.lift import (
    IteratedLiftAssignment,
    LiftAssignment,
    Walk,
    build_iterated_lift,
    build_lift,
    dump_assignment,
    enumerate_walk_subset,
    lift_walk,
    load_assignment,
    random_iterated_lift,
    random_lift,
    random_stagewise_lift,
    walk_end,
    walk_product,
    walk_subgroup_generators,
)
from liftlab.perm import Permutation, compose, cycle_perm, identity
from liftlab.wreath import WreathElement, random_wreath

from strategies import connected_multigraphs, seeds, walks


def _lift(g, n, seed, flatten=True):
    return random_lift(g, n, np.random.default_rng(seed), flatten=flatten)


def test_tree_base_gives_disjoint_copies(rng):
    g = path(4)
    a = random_lift(g, 3, rng)
    assert all(p.is_identity() for p in a.labels)
    h = build_lift(a)
    comps = components(h.graph)
    assert len(comps) == 3
    assert sorted(map(sorted, comps)) == sorted(sorted(h.section(i)) for i in range(3))


def test_bouquet_with_full_cycle_is_cycle_graph():
    n = 5
    a = LiftAssignment(bouquet(1), n, (cycle_perm(n, tuple(range(n))),))
    h = build_lift(a)
    assert h.graph.edges == tuple((i, (i + 1) % n) for i in range(n))
    assert is_connected(h)


def test_label_distribution_on_cycle():
    r = np.random.default_rng(77)
    g = cycle(3)
    (free,) = spanning_tree(g).non_tree_edges(g)
    trials = 100_000
    counts = Counter(random_lift(g, 3, r).labels[free] for _ in range(trials))
    assert len(counts) == 6
    sigma = (trials * (1 / 6) * (5 / 6)) ** 0.5
    assert all(abs(c - trials / 6) < 3.5 * sigma for c in counts.values())


def test_flat_edges_are_the_spanning_tree(rng):
    g = barbell(3)
    a = random_lift(g, 4, rng)
    assert a.flat_set == spanning_tree(g).tree_edges
    assert all(a.labels[e].is_identity() for e in a.flat_set)


@given(connected_multigraphs(), st.integers(1, 6), seeds)
def test_covering_property(g, n, seed):
    a = _lift(g, n, seed)
    h = build_lift(a)
    assert h.graph.vertex_count == g.vertex_count * n
    assert h.graph.edge_count == g.edge_count * n
    for x in range(h.graph.vertex_count):
        v, i = h.project_vertex(x)
        assert h.graph.degree(x) == g.degree(v)
    for x, (s, t) in enumerate(h.graph.edges):
        e = h.project_edge(x)
        assert (h.project_vertex(s)[0], h.project_vertex(t)[0]) == g.edges[e]
    for v in range(g.vertex_count):
        assert len(h.fiber(v)) == n


@given(connected_multigraphs(), st.integers(1, 8), seeds)
def test_connected_iff_walk_subgroup_transitive(g, n, seed):
    a = _lift(g, n, seed)
    assert is_connected(build_lift(a)) == walk_subgroup_generators(a).is_transitive()


@given(connected_multigraphs(), st.integers(1, 5), seeds)
def test_flat_sublift_is_copies_of_tree(g, n, seed):
    a = _lift(g, n, seed)
    h = build_lift(a)
    for e in a.flat_set:
        for x in h.edge_fiber(e):
            s, t = h.graph.edges[x]
            assert h.project_vertex(s)[1] == h.project_vertex(t)[1]


def test_barbell_bridge_fiber(rng):
    g = barbell(7)
    h = build_lift(random_lift(g, 3, rng))
    bridge = g.edge_count - 1
    fiber = list(h.edge_fiber(bridge))
    assert len(fiber) == 3
    rest = MultiGraph(
        h.graph.vertex_count, tuple(e for x, e in enumerate(h.graph.edges) if x not in fiber)
    )
    assert len(components(rest)) >= 2


def test_degree_one_lift_is_base():
    g = theta()
    a = LiftAssignment(g, 1, (identity(1),) * 3)
    assert build_lift(a).graph == g


def test_assignment_validation():
    g = cycle(3)
    with pytest.raises(InvalidParameterError):
        LiftAssignment(g, 2, (identity(2),) * 3, frozenset({0, 1, 2}))
    with pytest.raises(InvalidParameterError):
        LiftAssignment(g, 2, (cycle_perm(2, (0, 1)), identity(2), identity(2)), frozenset({0}))
    with pytest.raises(InvalidParameterError):
        LiftAssignment(g, 2, (identity(2),) * 2)
    with pytest.raises(InvalidParameterError):
        LiftAssignment(g, 2, (identity(3),) * 3)


def test_walk_product_trivial_cases(rng):
    g = theta()
    a = random_lift(g, 4, rng)
    flat = next(iter(a.flat_set))
    assert walk_product(a, Walk(0, ((flat, True),))).is_identity()
    assert walk_product(a, Walk(0, ((1, True), (1, False)))).is_identity()


def test_walk_product_bouquet_order(rng):
    s, t = cycle_perm(4, (0, 1, 2)), cycle_perm(4, (1, 3))
    a = LiftAssignment(bouquet(2), 4, (s, t))
    # first edge 0, then edge 1: right factor acts first
    assert walk_product(a, Walk(0, ((0, True), (1, True)))) == compose(t, s)
    assert walk_product(a, Walk(0, ((0, False),))) == s.inverse()


def test_invalid_walks():
    g = path(3)
    with pytest.raises(InvalidWalkError):
        walk_end(g, Walk(0, ((1, True),)))
    with pytest.raises(InvalidWalkError):
        walk_end(g, Walk(5))
    with pytest.raises(InvalidWalkError):
        walk_end(g, Walk(0, ((9, True),)))
    a = LiftAssignment(g, 2, (identity(2),) * 2)
    with pytest.raises(InvalidWalkError):
        lift_walk(a, Walk(0), 2)


@given(connected_multigraphs(), st.integers(1, 6), seeds, st.data())
def test_lift_walk_endpoint_matches_walk_product(g, n, seed, data):
    a = _lift(g, n, seed, flatten=data.draw(st.booleans()))
    start, steps = data.draw(walks(g))
    w = Walk(start, steps)
    sigma = walk_product(a, w)
    h = build_lift(a)
    end = walk_end(g, w)
    for i in range(n):
        lw = lift_walk(a, w, i)
        assert lw.vertices[0] == h.vertex(start, i)
        assert lw.end == h.vertex(end, sigma(i))
        # consecutive lifted vertices are joined by the recorded lifted edge
        for x, (p, q) in zip(lw.edges, zip(lw.vertices, lw.vertices[1:])):
            assert set(h.graph.edges[x]) == {p, q}
    rev = w.reversed(g)
    assert walk_product(a, rev) == sigma.inverse()


@given(connected_multigraphs(), st.integers(1, 6), seeds, st.data())
def test_lifts_of_a_trail_are_edge_disjoint(g, n, seed, data):
    a = _lift(g, n, seed)
    start, steps = data.draw(walks(g))
    used, trail = set(), []
    for e, f in steps:
        if e in used:
            break
        used.add(e)
        trail.append((e, f))
    w = Walk(start, tuple(trail))
    edge_sets = [set(lift_walk(a, w, i).edges) for i in range(n)]
    assert sum(map(len, edge_sets)) == len(set().union(*edge_sets))


def test_flat_walk_stays_in_section(rng):
    g = path(4)
    a = random_lift(g, 3, rng)
    h = build_lift(a)
    w = Walk(0, ((0, True), (1, True), (2, True), (2, False)))
    for i in range(3):
        assert set(lift_walk(a, w, i).vertices) <= set(h.section(i))


def test_walk_subgroup_generators_examples(rng):
    assert walk_subgroup_generators(random_lift(path(4), 3, rng)).generators == ()
    a = random_lift(bouquet(3), 4, rng)
    assert walk_subgroup_generators(a).generators == a.labels
    c = random_lift(cycle(3), 4, rng)
    assert walk_subgroup_generators(c).generators == (c.labels[2],)
    unflat = random_lift(cycle(3), 4, rng, flatten=False)
    with pytest.raises(InvalidParameterError):
        walk_subgroup_generators(unflat)


@given(connected_multigraphs(max_vertices=4, max_extra=3), st.integers(1, 4), seeds)
def test_walk_subset_equals_generated_subgroup(g, n, seed):
    a = _lift(g, n, seed)
    assert enumerate_walk_subset(a) == walk_subgroup_generators(a).elements()


def test_walk_subset_identity_labels():
    a = LiftAssignment(theta(), 3, (identity(3),) * 3)
    assert enumerate_walk_subset(a) == {identity(3)}


def test_walk_subset_of_labelled_path():
    # no flattening: every path edge has a label and walks can only shuttle back and forth
    m, n = 4, 3
    all_perms = [Permutation(p) for p in product(range(n), repeat=n) if len(set(p)) == n]
    r = np.random.default_rng(6)
    for _ in range(20):
        labels = tuple(all_perms[i] for i in r.integers(0, len(all_perms), m - 1))
        a = LiftAssignment(path(m), n, labels)
        expected = {identity(n)}
        for k in range(m - 1):
            acc = identity(n)
            for j in range(k, m - 1):
                acc = compose(labels[j], acc)
                expected |= {acc, acc.inverse()}
        assert enumerate_walk_subset(a) == expected


def test_iterated_lift_fibers(rng):
    g = cycle(3)
    a = random_iterated_lift(g, (2, 3), rng)
    h = build_iterated_lift(a)
    assert h.fiber_size == 6 and all(len(h.fiber(v)) == 6 for v in range(3))
    for x in range(h.graph.vertex_count):
        assert h.graph.degree(x) == 2


def test_single_stage_iterated_lift_matches_plain_lift(rng):
    g = theta()
    for _ in range(20):
        a = random_lift(g, 4, rng)
        it = IteratedLiftAssignment(g, (4,), tuple(WreathElement(p) for p in a.labels), a.flat_set)
        assert build_iterated_lift(it).graph == build_lift(a).graph


def test_iterated_lift_is_lift_of_lift():
    # wreath label (top, children) equals lifting by top, then lifting each fibre copy by its child
    r = np.random.default_rng(2)
    g = bouquet(1)
    for _ in range(20):
        w = random_wreath((2, 3), r)
        h = build_iterated_lift(IteratedLiftAssignment(g, (2, 3), (w,)))
        stage1 = build_lift(LiftAssignment(g, 2, (w.top,)))
        stage2_labels = tuple(w.children[s].top for s in range(2))
        stage2 = build_lift(LiftAssignment(stage1.graph, 3, stage2_labels))
        assert h.graph == stage2.graph


def test_stagewise_lift_shape(rng):
    h = random_stagewise_lift(cycle(3), (2, 2), rng)
    assert h.fiber_size == 4 and h.graph.vertex_count == 12 and h.graph.edge_count == 12


def test_dump_load_round_trip(rng, tmp_path):
    a = random_lift(barbell(3), 3, rng)
    text = dump_assignment(a, "family:barbell:3")
    assert load_assignment(text) == a
    f = tmp_path / "g.txt"
    barbell(3).write(f)
    assert load_assignment(dump_assignment(a, str(f))) == a
    it = random_iterated_lift(theta(), (2, 2), rng)
    assert load_assignment(dump_assignment(it, "family:theta")) == it


def test_load_rejects_garbage():
    with pytest.raises(InvalidParameterError):
        load_assignment("nonsense")
    with pytest.raises(InvalidParameterError):
        load_assignment("graph family:theta\nsize 3\nflat\n[0 1 2]\n[0 1 2]\n[0 1 2]\n")


def test_random_lift_unflattened_accepts_disconnected(rng):
    g = MultiGraph(2, ())
    a = random_lift(g, 3, rng, flatten=False)
    assert len(components(build_lift(a).graph)) == 6
    with pytest.raises(GraphDisconnectedError):
        random_lift(g, 3, rng)

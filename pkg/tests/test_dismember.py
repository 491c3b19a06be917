import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import random_tree
from gen_helpers import random_acyclic
from reachorient.errors import CapExceeded, GraphError
from reachorient.graph_core import MixedGraph, WeightedInstance, mixed_cycle_exists
from reachorient.dismember import (
    certify,
    enumerate_dismembered,
    forest_dismembering,
    is_dismembered,
    leaf_and_branch_edges,
    tree_dismembering,
)

PATH5 = [(0, 1), (1, 2), (2, 3), (3, 4)]
STAR3 = [(0, 1), (0, 2), (0, 3)]


def test_leaf_and_branch_edges():
    assert leaf_and_branch_edges(PATH5) == ({0, 3}, set())
    assert leaf_and_branch_edges(STAR3) == ({0, 1, 2}, {0, 1, 2})
    with pytest.raises(GraphError):
        leaf_and_branch_edges([(0, 1), (1, 2), (2, 0)])


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 14), st.randoms(use_true_random=False))
def test_branch_edges_bound(n, rng):
    e1, e3 = leaf_and_branch_edges(random_tree(rng, n), range(n))
    assert len(e3) <= 3 * len(e1)


def test_tree_dismembering_examples():
    assert len(tree_dismembering(PATH5, set())) == 0
    ds = tree_dismembering(PATH5, {2})
    # pruning shrinks the path to the marked vertex alone, so nothing is cut;
    # cutting both edges at it is also dismembering
    assert ds.certified and ds.edges == set()
    assert certify(PATH5, {1, 2}, {2})
    ds = tree_dismembering(PATH5, {0, 4})
    assert ds.certified and ds.edges == {0, 3}
    ds = tree_dismembering(PATH5, {1, 3})
    assert ds.certified and ds.edges == {1, 2}


def test_certify_hand_cases():
    # path 0-1-2-3-4 cut at both edges of 2: {0,1}, {2}, {3,4}; marked only 2
    assert certify(PATH5, {1, 2}, {2})
    # middle piece with two F endpoints and no X: allowed
    assert certify(PATH5, {0, 3}, set())
    # middle piece holding an X vertex and an F endpoint: not allowed
    assert not certify(PATH5, {3}, {0})


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 16), st.randoms(use_true_random=False), st.data())
def test_tree_dismembering_bound(n, rng, data):
    t = random_tree(rng, n)
    xs = data.draw(st.sets(st.integers(0, n - 1)))
    ds = tree_dismembering(t, xs, range(n))
    assert ds.certified and certify(t, ds.edges, xs, range(n))
    assert len(ds) <= 5 * len(xs)
    assert len(ds.f1) <= 3 * len(xs) and len(ds.f2) <= 2 * len(xs)


def random_forest_plus(rng, n, extra):
    """Random forest on n vertices plus ``extra`` further edges forming F0."""
    t = random_tree(rng, n)
    rng.shuffle(t)
    cut = rng.randint(0, max(0, len(t) - 1))
    forest = t[cut:]
    f0 = []
    for _ in range(extra):
        u, v = rng.sample(range(n), 2)
        f0.append((u, v))
    return forest + f0, set(range(len(forest), len(forest) + len(f0)))


def test_forest_dismembering_examples():
    assert len(forest_dismembering(4, [(0, 1), (2, 3)], set())) == 0
    edges = [(0, 1), (1, 2), (3, 4), (4, 5), (2, 3)]
    ds = forest_dismembering(6, edges, {4})
    assert ds.certified and len(ds) <= 10 and 4 not in ds.edges


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 14), st.integers(0, 4), st.randoms(use_true_random=False))
def test_forest_dismembering_bound(n, extra, rng):
    edges, f0 = random_forest_plus(rng, n, extra)
    ds = forest_dismembering(n, edges, f0)
    assert ds.certified and len(ds) <= 10 * len(f0) and not ds.edges & f0
    rest = [i for i in range(len(edges)) if i not in f0]
    marks = {x for i in f0 for x in edges[i]}
    assert certify([edges[i] for i in rest], [rest.index(i) for i in ds.edges], marks, range(n))


def test_forest_rejects_cycle():
    with pytest.raises(GraphError):
        forest_dismembering(3, [(0, 1), (1, 2), (2, 0)], set())


def test_is_dismembered():
    assert is_dismembered(MixedGraph(3, edges=((0, 1), (1, 2))))
    # path x-y with arcs a->x, b->x: only x touches arcs
    assert is_dismembered(MixedGraph(4, edges=((0, 1),), arcs=((2, 0), (3, 0))))
    # x hit by two arcs, y by one
    assert not is_dismembered(MixedGraph(5, edges=((0, 1),), arcs=((2, 0), (3, 0), (1, 4))))
    assert is_dismembered(MixedGraph(4, edges=((0, 1),), arcs=((2, 0), (1, 3))))


def test_enumerate_small_cases():
    g = MixedGraph(3, edges=((0, 1), (1, 2)))
    wi = WeightedInstance(g, (1, 1, 1), acyclic=True)
    members = enumerate_dismembered(wi)
    assert len(members) == 1 and members[0].instance.graph == g


def test_enumerate_cap():
    rng = random.Random(5)
    g = random_acyclic(rng, 30, 8)
    wi = WeightedInstance.unit(g, acyclic=True)
    with pytest.raises(CapExceeded, match="cap is 1"):
        enumerate_dismembered(wi, cap=1)


@settings(max_examples=120, deadline=None)
@given(st.integers(2, 9), st.integers(0, 3), st.randoms(use_true_random=False), st.data())
def test_members_partition_orientations(n, k, rng, data):
    k = min(k, n - 1)
    g = random_acyclic(rng, n, k)
    w = tuple(data.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n)))
    wi = WeightedInstance(g, w, acyclic=True)
    members = enumerate_dismembered(wi)
    assert len(members) & (len(members) - 1) == 0
    seen = {}
    for mi, m in enumerate(members):
        mg = m.instance.graph
        assert is_dismembered(mg) and mg.k <= 11 * max(k, 1) and not mixed_cycle_exists(mg)
        for bits in itertools.product((True, False), repeat=len(mg.edges)):
            full = m.to_parent(mg.orient(bits)).forward
            assert full not in seen
            seen[full] = mi
    assert len(seen) == 2 ** len(g.edges)
    if len(g.edges) <= 8:
        best = max(oracles.brute(n, m.instance.graph.edges, m.instance.graph.arcs, w)[0] for m in members)
        assert best == oracles.brute(n, g.edges, g.arcs, w)[0]

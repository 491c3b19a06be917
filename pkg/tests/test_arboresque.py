import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import random_tree
from gen_helpers import random_arboresque
from reachorient.arboresque import check_arboresque, solve_arboresque, solve_arboresque_full, solve_tree
from reachorient.errors import UnsupportedInstance
from reachorient.graph_core import MixedGraph, WeightedInstance, score_weighted


def test_shape_plain_tree():
    sh = check_arboresque(MixedGraph(3, edges=((0, 1), (1, 2))))
    assert sh.plain and sh.root == 0


def test_shape_three_vertex_example():
    # V = {r=0, s=1, a=2}: arcs r->s, r->a and edge {a, s}
    g = MixedGraph(3, edges=((2, 1),), arcs=((0, 1), (0, 2)))
    sh = check_arboresque(g)
    assert (sh.r, sh.s, sh.side) == (0, 1, "r")
    o, val = solve_arboresque(WeightedInstance.unit(g))
    assert val == 3 == score_weighted(o, [1, 1, 1])


def test_shape_rejects():
    with pytest.raises(UnsupportedInstance):
        check_arboresque(MixedGraph(3, edges=((0, 1), (1, 2), (2, 0))))
    with pytest.raises(UnsupportedInstance):
        check_arboresque(MixedGraph(4, edges=((0, 1),), arcs=((1, 2), (2, 3))))


def test_solve_tree_examples():
    assert solve_tree(WeightedInstance.unit(MixedGraph(4, edges=((0, 1), (0, 2), (0, 3)))))[1] == 5
    assert solve_tree(WeightedInstance.unit(MixedGraph(4, edges=((0, 1), (1, 2), (2, 3)))))[1] == 6
    assert solve_tree(WeightedInstance(MixedGraph(2, edges=((0, 1),)), (3, 0)))[1] == 6
    assert solve_tree(WeightedInstance.unit(MixedGraph(2, edges=((0, 1),))))[1] == 1
    with pytest.raises(UnsupportedInstance):
        solve_tree(WeightedInstance.unit(MixedGraph(2, arcs=((0, 1),))))


def test_single_vertex():
    o, val = solve_tree(WeightedInstance(MixedGraph(1), (4,)))
    assert val == 12 and o.forward == ()


@settings(max_examples=300, deadline=None)
@given(st.integers(3, 9), st.randoms(use_true_random=False))
def test_arboresque_matches_brute(n, rng):
    wi = random_arboresque(rng, n)
    g = wi.graph
    res = solve_arboresque_full(wi)
    want = oracles.brute(n, g.edges, g.arcs, wi.weights)[0]
    assert res.value == want
    assert oracles.R(n, res.orientation.all_arcs(), wi.weights) == want


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 9), st.randoms(use_true_random=False), st.data())
def test_tree_matches_brute(n, rng, data):
    t = random_tree(rng, n)
    w = tuple(data.draw(st.lists(st.integers(0, 4), min_size=n, max_size=n)))
    wi = WeightedInstance(MixedGraph(n, tuple(t)), w)
    o, val = solve_tree(wi)
    want, first = oracles.brute(n, tuple(t), (), w)
    assert val == want == oracles.R(n, o.all_arcs(), w)


def test_tie_break_prefers_forward():
    # on a unit path every all-one-direction orientation is optimal; forward wins
    g = MixedGraph(4, edges=((0, 1), (1, 2), (2, 3)))
    o, val = solve_tree(WeightedInstance.unit(g))
    assert val == 6 and o.forward == (True, True, True)


def test_large_tree_is_fast():
    rng = random.Random(2)
    t = random_tree(rng, 60)
    wi = WeightedInstance(MixedGraph(60, tuple(t)), tuple(rng.randint(0, 3) for _ in range(60)))
    o, val = solve_tree(wi)
    assert val == score_weighted(o, wi.weights)

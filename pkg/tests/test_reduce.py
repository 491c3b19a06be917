import itertools
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import mixed_graphs
from reachorient.errors import CapExceeded, GraphError
from reachorient.graph_core import MixedGraph, WeightedInstance, mixed_cycle_exists, score, score_weighted
from reachorient.reduce import (
    blowup_offset,
    contract_partition,
    contract_to_wammro,
    expand_to_mmro,
    lift_orientation,
    mixed_strong_partition,
    split_components,
    split_connected,
)


def test_triangle_contracts_to_one_vertex():
    wi, trace = contract_to_wammro(MixedGraph(3, edges=((0, 1), (1, 2), (2, 0))))
    assert wi.graph.n == 1 and wi.weights == (3,) and len(trace) == 1
    lifted = lift_orientation(trace, wi.graph.forward())
    assert score(lifted) == 6 == score_weighted(wi.graph, wi.weights)


def test_acyclic_input_unchanged():
    g = MixedGraph(4, edges=((0, 1), (1, 2)), arcs=((2, 3), (0, 3)))
    wi, trace = contract_to_wammro(g)
    assert wi.graph == g and wi.weights == (1,) * 4 and len(trace) == 0
    o = g.orient([True, False])
    assert lift_orientation(trace, o) == o


def test_lift_rejects_foreign_orientation():
    _, trace = contract_to_wammro(MixedGraph(3, edges=((0, 1), (1, 2), (2, 0))))
    with pytest.raises(GraphError):
        lift_orientation(trace, MixedGraph(2, edges=((0, 1),)).forward())


@settings(max_examples=300, deadline=None)
@given(mixed_graphs(max_n=8, max_edges=9, max_arcs=5), st.data())
def test_contraction_round_trip(g, data):
    wi, trace = contract_to_wammro(g)
    assert not mixed_cycle_exists(wi.graph)
    assert wi.total == g.n and wi.graph.n <= g.n and wi.graph.k <= g.k
    assert (len(trace) == 0) == (not mixed_cycle_exists(g))
    assert trace.replay() == WeightedInstance(wi.graph, wi.weights)
    # idempotent
    again, t2 = contract_to_wammro(wi.graph)
    assert len(t2) == 0
    fwd = data.draw(st.lists(st.booleans(), min_size=len(wi.graph.edges), max_size=len(wi.graph.edges)))
    o = wi.graph.orient(fwd)
    lifted = lift_orientation(trace, o)
    assert oracles.R(g.n, lifted.all_arcs()) == oracles.R(wi.graph.n, o.all_arcs(), wi.weights)


@settings(max_examples=80, deadline=None)
@given(mixed_graphs(max_n=6, max_edges=6, max_arcs=4))
def test_contraction_keeps_optimum(g):
    wi, _ = contract_to_wammro(g)
    assert oracles.brute(g.n, g.edges, g.arcs)[0] == oracles.brute(wi.graph.n, wi.graph.edges, wi.graph.arcs, wi.weights)[0]


@settings(max_examples=300, deadline=None)
@given(mixed_graphs(max_n=9, max_edges=10, max_arcs=6))
def test_fast_partition_matches_cycle_contraction(g):
    wi, trace = contract_to_wammro(g)
    vm = trace.vertex_map()
    slow = sorted(sorted(v for v in range(g.n) if vm[v] == x) for x in range(wi.graph.n))
    assert mixed_strong_partition(g) == slow
    fast = contract_partition(g, slow)
    assert sorted(fast.weights) == sorted(wi.weights)
    assert len(fast.graph.edges) == len(wi.graph.edges) and fast.graph.k == wi.graph.k


def test_blowup_unit_weights_is_identity():
    g = MixedGraph(3, edges=((0, 1),), arcs=((1, 2),))
    b = expand_to_mmro(WeightedInstance(g, (1, 1, 1)), scale=5)
    assert b.graph.n == 15 and b.k0 == 2 * 3 * (comb(5, 2) - 0)
    b1 = expand_to_mmro(WeightedInstance(g, (1, 1, 1)), scale=1)
    assert b1.graph == g and b1.k0 == 0


def test_blowup_single_vertex():
    b = expand_to_mmro(WeightedInstance(MixedGraph(1), (2,)), scale=16)
    assert b.graph.n == 32 and len(b.graph.arcs) == 62 and b.new_weights == (32,)
    assert score(b.graph) == 32 * 31


def test_blowup_errors():
    wi = WeightedInstance(MixedGraph(1), (2,))
    with pytest.raises(GraphError):
        expand_to_mmro(wi, scale=0)
    with pytest.raises(CapExceeded):
        expand_to_mmro(wi, scale=10**6)


@pytest.mark.parametrize(
    "wi",
    [
        WeightedInstance(MixedGraph(3, edges=((0, 1),), arcs=((1, 2),)), (1, 0, 1), acyclic=True),
        WeightedInstance(MixedGraph(2, edges=((0, 1),)), (1, 1), acyclic=True),
        WeightedInstance(MixedGraph(3, edges=((0, 1), (1, 2))), (0, 1, 0), acyclic=True),
    ],
)
def test_blowup_relation_at_full_scale(wi):
    n = wi.size
    assert n <= 5
    b = expand_to_mmro(wi, cap=10**6)
    assert b.scale == n**4 and b.k0 <= n**9
    g = wi.graph
    for fwd in itertools.product((True, False), repeat=len(g.edges)):
        o = g.orient(fwd)
        big = b.graph.orient(fwd)
        # R(G0) over the expanded graph; digon blocks make this cheap via the weighted form
        lhs = score(big)
        base = score_weighted(o, wi.weights)
        residual = lhs - n**8 * base - b.k0
        assert 0 <= residual < n**8


def test_blowup_offset_exact_bigint():
    assert blowup_offset([3, 0, 2], 10**6) == 2 * (comb(3 * 10**6, 2) - 10**12 * 3 + comb(2 * 10**6, 2) - 10**12)


def test_split_connected():
    wi = WeightedInstance(MixedGraph(4, edges=((0, 1), (2, 3))), (1, 2, 3, 4))
    parts = split_connected(wi)
    assert [p.graph.edges for p in parts] == [((0, 1),), ((0, 1),)]
    assert [p.weights for p in parts] == [(1, 2), (3, 4)]
    one = WeightedInstance(MixedGraph(2, edges=((0, 1),)), (1, 1))
    assert split_connected(one) == [one]


def test_split_optimum_is_sum():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(2, 8)
        edges = [(u, v) for u, v in ((rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 6))) if u != v]
        arcs = [(u, v) for u, v in ((rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 3))) if u != v]
        w = [rng.randint(0, 3) for _ in range(n)]
        wi = WeightedInstance(MixedGraph(n, tuple(edges), tuple(arcs)), tuple(w))
        parts = split_components(wi)
        total = sum(oracles.brute(p.instance.graph.n, p.instance.graph.edges, p.instance.graph.arcs, p.instance.weights)[0] for p in parts)
        # global value double counts nothing across components except the intra-vertex term
        assert total == oracles.brute(n, edges, arcs, w)[0]

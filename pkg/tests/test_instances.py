import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mixed_graphs, weights_for
from reachorient.dismember import is_dismembered
from reachorient.errors import CapExceeded, GraphError, ParseError, UnsupportedInstance
from reachorient.graph_core import MixedGraph, is_connected, mixed_cycle_exists, score_weighted
from reachorient.instances import (
    SatInstance,
    gen_random,
    gen_replacement_lb,
    gen_sat_gadget,
    lb_partial,
    lb_target,
    max2sat_brute,
    parse_dimacs,
    parse_instance,
    parse_orientation,
    random_sat,
    serialize_dimacs,
    serialize_instance,
    serialize_orientation,
)
from reachorient.replacement import exact_replacement_set
from reachorient.solvers import brute_force

FOUR_CLAUSES = SatInstance(4, ((1, 2), (1, -2), (-1, -3), (3, 4)))


# --- text formats ------------------------------------------------------------------

def test_parse_minimal():
    g, w = parse_instance("p mmro 2 1 0\ne 1 2\n")
    assert g == MixedGraph(2, ((0, 1),)) and w == (1, 1)
    g, w = parse_instance("c hi\np mmro 3 0 1\nw 1 3\na 3 1\n")
    assert w == (3, 1, 1) and g.arcs == ((2, 0),)


@pytest.mark.parametrize(
    "text, line",
    [
        ("e 1 2\n", 1),
        ("p mmro 2 1 0\ne 1 3\n", 2),
        ("p mmro 2 0 0\nw 1 -1\n", 2),
        ("p mmro 2 0 0\nx 1 2\n", 2),
        ("p mmro 2 1 0\ne 1 1\n", 2),
        ("p mmro 2 1 0\ne 1\n", 2),
        ("p mmro 2 0 0\nw 1 1\nw 1 2\n", 3),
        ("p mmro 2 2 0\ne 1 2\n", 0),
        ("p cnf 2 1\n", 1),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_instance(text)
    assert exc.value.line == line


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_instance_round_trip(data):
    g = data.draw(mixed_graphs(max_n=8))
    w = tuple(data.draw(weights_for(g.n, hi=5)))
    text = serialize_instance(g, w, comments=["round trip"])
    assert parse_instance(text) == (g, w)
    assert serialize_instance(*parse_instance(text)) == serialize_instance(g, w)


def test_orientation_round_trip():
    g = MixedGraph(3, ((0, 1), (1, 2)), ((2, 0),))
    o = g.orient((True, False))
    text = serialize_orientation(o, 5)
    assert text == "s 5\no 1 2\no 3 2\n"
    assert parse_orientation(text, g) == (o, 5)
    with pytest.raises(ParseError):
        parse_orientation("s 1\no 1 3\no 2 3\n", g)
    with pytest.raises(ParseError):
        parse_orientation("o 1 2\n", g)


def test_dimacs_round_trip_and_errors():
    assert parse_dimacs(serialize_dimacs(FOUR_CLAUSES)) == FOUR_CLAUSES
    with pytest.raises(ParseError):
        parse_dimacs("p cnf 1 1\n1 0\n")
    with pytest.raises(ParseError):
        parse_dimacs("p cnf 2 1\n1 2\n")
    with pytest.raises(ParseError):
        parse_dimacs("p cnf 2 2\n1 2 0\n")


# --- SAT instances and the gadget ----------------------------------------------------

def test_sat_invariants():
    with pytest.raises(GraphError):
        SatInstance(1, ((1,), (-1,)))
    with pytest.raises(GraphError):
        SatInstance(2, ((1, 2), (1, -2), (1, 2), (-1, 2)))
    with pytest.raises(GraphError):
        SatInstance(3, ((1, 2),))
    with pytest.raises(GraphError):
        SatInstance(2, ((1, 3),))


def test_max2sat_examples():
    assert max2sat_brute(SatInstance(2, ((1, 2),)))[1] == 1
    a, s = max2sat_brute(FOUR_CLAUSES)
    assert s == 4 and FOUR_CLAUSES.satisfied(a) == 4
    assert FOUR_CLAUSES.satisfied((True, True, False, True)) == 4
    with pytest.raises(CapExceeded):
        max2sat_brute(FOUR_CLAUSES, cap=3)


def test_four_clause_gadget():
    gr = gen_sat_gadget(FOUR_CLAUSES)
    g = gr.instance.graph
    assert g.n == 16 and len(g.edges) == 4
    assert gr.y_count == 4
    assert set(gr.y_pairs) == {(0, 1), (0, 2), (1, 2), (2, 3)}
    assert not mixed_cycle_exists(g)
    w = gr.instance.weights
    assert sorted(w) == [0] * 8 + [1] * 8
    for a, b in gr.clause_vertices:
        assert w[a] == w[b] == 1
        assert all(v != a for _, v in g.arcs) and all(u != b for u, _ in g.arcs)
    for assignment in itertools.product((True, False), repeat=4):
        o = gr.orientation_for(assignment)
        assert score_weighted(o, w) == 2 * gr.y_count + FOUR_CLAUSES.satisfied(assignment)
    assert brute_force(gr.instance).value == 2 * 4 + 4


def test_single_clause_gadget():
    sat = SatInstance(2, ((1, 2),))
    gr = gen_sat_gadget(sat)
    assert gr.y_count == 0
    assert score_weighted(gr.orientation_for((True, True)), gr.instance.weights) == 1
    assert score_weighted(gr.orientation_for((False, False)), gr.instance.weights) == 0


def test_gadget_correspondence_sweep():
    rng = random.Random(404)
    for _ in range(40):
        nv = rng.randint(2, 6)
        try:
            sat = random_sat(rng, nv, rng.randint((nv + 1) // 2, 3 * nv // 2))
        except UnsupportedInstance:
            continue
        gr = gen_sat_gadget(sat)
        _, t = max2sat_brute(sat)
        assert 4 * t >= 3 * len(sat.clauses)
        assert brute_force(gr.instance).value == 2 * gr.y_count + t


# --- replacement-set lower-bound family --------------------------------------------------

def test_lb_weights():
    wi, (tv, te) = gen_replacement_lb(1)
    assert wi.graph.n == 6
    assert wi.weights == (0, 24, 2, 1, 24, 96)
    assert tv == (2, 3) and te == (0,)
    wi2, _ = gen_replacement_lb(2)
    n2 = 2 * 6 * 2 ** 8
    assert wi2.graph.n == 8 and wi2.weights == (0, n2, 16, 8, 1, n2, 4 * n2, 16 * n2)
    wi4, _ = gen_replacement_lb(4)
    assert wi4.weights[1] == 2 * 15 * 2 ** 32
    with pytest.raises(GraphError):
        gen_replacement_lb(0)
    with pytest.raises(GraphError):
        gen_replacement_lb(5)


@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_lb_structure(q):
    wi, _ = gen_replacement_lb(q)
    assert is_dismembered(wi) and wi.graph.k == 2
    assert is_connected(wi.graph) and not mixed_cycle_exists(wi.graph)


@pytest.mark.parametrize("q", [1, 2])
def test_lb_partial_optima(q):
    wi, (_, te) = gen_replacement_lb(q)
    for i in range(q + 1):
        h = lb_partial(wi, q, i)
        assert h.graph.edges == tuple(wi.graph.edges[e] for e in te)
        assert brute_force(h).orientation.forward == lb_target(q, i)


@pytest.mark.parametrize("q", [1, 2])
def test_lb_replacement_set_has_all_targets(q):
    wi, (tv, te) = gen_replacement_lb(q)
    rs = exact_replacement_set(wi, (tv, te))
    assert {lb_target(q, i) for i in range(q + 1)} <= set(rs.orientations)


# --- random generator ------------------------------------------------------------------

def test_gen_random_basics():
    g, w = gen_random(5, 0, 0, seed=1)
    assert g == MixedGraph(5) and w == (1,) * 5
    assert gen_random(9, 0.3, 0.3, 4, seed=17) == gen_random(9, 0.3, 0.3, 4, seed=17)
    with pytest.raises(GraphError):
        gen_random(3, 1.5, 0)


def test_gen_random_filters():
    for seed in range(1000):
        g, _ = gen_random(7, 0.35, 0.35, 3, seed=seed, acyclic=True)
        assert not mixed_cycle_exists(g)
    for seed in range(50):
        g, _ = gen_random(9, 0.25, 0.3, 3, seed=seed, dismembered=True, connected=True)
        assert is_dismembered(g) and is_connected(g) and not mixed_cycle_exists(g)

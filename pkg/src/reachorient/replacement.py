"""Replacement sets for one undirected component T of a dismembered instance.

T is embedded in one or two small arboresque supergraphs U (T plus at most
three new vertices z standing in for the rest of the graph).  Solving U
optimally for every admissible weighting of the z's and keeping the induced
orientation of T yields a set of T-orientations with an exchange property:
swapping the right member into any global orientation never loses value
(exact sets) or loses at most eps * |w|^2 (grid sets).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor
from typing import Iterable, Sequence

from .arboresque import check_arboresque, solve_arboresque_full
from .dismember import is_dismembered
from .errors import GraphError, UnsupportedInstance
from .graph_core import (
    MixedGraph,
    WeightedInstance,
    bits,
    closure_rows,
    mask_weight,
    members,
    mixed_arcs,
    score_weighted,
    undirected_components,
)

CASE1_U1 = "case1-U1"
CASE1_U2 = "case1-U2"
CASE2 = "case2"

Comp = tuple[tuple[int, ...], tuple[int, ...]]  # (vertices, edge indices)


@dataclass(frozen=True)
class SimulationSupergraph:
    graph: MixedGraph
    added: tuple[int, ...]                 # ids of the z vertices in graph
    case_tag: str
    component: Comp
    edge_map: tuple[int, ...]              # U edge index -> position in component edge list
    fixed: tuple[tuple[int, bool], ...]    # (position in component edge list, forward flag) made arcs
    mirrored: bool = False

    def t_orientation(self, u_forward: Sequence[bool]) -> tuple[bool, ...]:
        out = [True] * len(self.component[1])
        for ui, ti in enumerate(self.edge_map):
            out[ti] = u_forward[ui]
        for ti, d in self.fixed:
            out[ti] = d
        return tuple(out)


@dataclass(frozen=True)
class ReplacementSet:
    component: Comp
    orientations: tuple[tuple[bool, ...], ...]   # forward flags over component edge list
    quality: str                                 # "exact" or "eps(<value>)"
    stats: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.orientations)


def _as_component(wi: WeightedInstance, t) -> Comp:
    if isinstance(t, int):
        return undirected_components(wi.graph)[t]
    verts, eds = t
    return tuple(sorted(verts)), tuple(eds)


def _arc_roles(g: MixedGraph, comp: Comp):
    vs = set(comp[0])
    ins: dict[int, int] = {}
    outs: dict[int, int] = {}
    for u, v in g.arcs:
        if v in vs and u not in vs:
            ins[v] = ins.get(v, 0) + 1
        elif u in vs and v not in vs:
            outs[u] = outs.get(u, 0) + 1
        elif u in vs and v in vs:
            raise GraphError("arc inside an undirected component (instance not acyclic)")
    return ins, outs


def classify(wi: WeightedInstance, comp: Comp) -> tuple[str, tuple[int, ...]]:
    """("case1", (x_in, x_out)) or ("case2", (x1, x2)) or ("case2m", (x1, x2))."""
    ins, outs = _arc_roles(wi.graph, comp)
    touched = sorted(set(ins) | set(outs))
    if not touched:
        raise UnsupportedInstance("component has no arc-incident vertex")
    if len(touched) == 1:
        x = touched[0]
        return "case1", (x, x)
    if len(touched) == 2:
        a, b = touched
        if all(ins.get(x, 0) + outs.get(x, 0) == 1 for x in touched):
            if a in ins and b in ins:
                return "case2", (a, b)
            if a in outs and b in outs:
                return "case2m", (a, b)
            x_in = a if a in ins else b
            x_out = b if x_in == a else a
            return "case1", (x_in, x_out)
    raise UnsupportedInstance("component violates the dismembered condition")


def _tree_path(comp_edges: Sequence[tuple[int, int]], a: int, b: int) -> list[tuple[int, bool]]:
    """Positions of the a-b path edges in ``comp_edges`` with flags orienting them a -> b."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for i, (u, v) in enumerate(comp_edges):
        adj.setdefault(u, []).append((v, i))
        adj.setdefault(v, []).append((u, i))
    par = {a: None}
    stack = [a]
    while stack:
        x = stack.pop()
        for y, i in adj.get(x, ()):
            if y not in par:
                par[y] = (x, i)
                stack.append(y)
    out = []
    x = b
    while x != a:
        p, i = par[x]
        out.append((i, comp_edges[i] == (p, x)))
        x = p
    out.reverse()
    return out


def build_simulation_set(wi: WeightedInstance, t) -> list[SimulationSupergraph]:
    g = wi.graph
    if not is_dismembered(g):
        raise UnsupportedInstance("instance is not dismembered")
    comp = _as_component(wi, t)
    case, xs = classify(wi, comp)
    verts, eidx = comp
    pos = {v: i for i, v in enumerate(verts)}
    k = len(verts)
    tedges = tuple((pos[g.edges[i][0]], pos[g.edges[i][1]]) for i in eidx)
    identity = tuple(range(len(tedges)))
    if case == "case1":
        x_in, x_out = pos[xs[0]], pos[xs[1]]
        zi, zo = k, k + 1
        arcs = ((zi, x_in), (x_out, zo), (zi, zo))
        u1 = SimulationSupergraph(MixedGraph(k + 2, tedges, arcs), (zi, zo), CASE1_U1, comp, identity, ())
        path = _tree_path(tedges, x_in, x_out)
        on_path = {i for i, _ in path}
        keep = tuple(i for i in range(len(tedges)) if i not in on_path)
        path_arcs = tuple(tedges[i] if f else tedges[i][::-1] for i, f in path)
        u2 = SimulationSupergraph(
            MixedGraph(k + 2, tuple(tedges[i] for i in keep), arcs + path_arcs),
            (zi, zo), CASE1_U2, comp, keep, tuple(path),
        )
        out = [u1, u2]
    else:
        x1, x2 = pos[xs[0]], pos[xs[1]]
        z1, z2, z3 = k, k + 1, k + 2
        arcs = ((z1, x1), (z2, x2), (z3, x1), (z3, x2))
        mirrored = case == "case2m"
        if mirrored:
            arcs = tuple((b, a) for a, b in arcs)
        out = [SimulationSupergraph(MixedGraph(k + 3, tedges, arcs), (z1, z2, z3), CASE2, comp, identity, (), mirrored)]
    for u in out:
        check_arboresque(u.graph)
    return out


# --- admissible weights on the added vertices ------------------------------

def _reach_rows(g: MixedGraph, removed: int | None = None) -> list[int]:
    arcs = [(a, b) for a, b in mixed_arcs(g) if removed is None or (a != removed and b != removed)]
    return closure_rows(g.n, arcs)


def _z_sets(wi: WeightedInstance, comp: Comp) -> tuple[int, tuple[int, ...]]:
    """(budget, vertex mask per z) bounding the outside vertices each z may stand for.

    The proofs weight each z by outside vertices with a (restricted) path to or
    from an attachment vertex; mixed reachability over-approximates every
    orientation, so these masks never exclude the sets the proofs use.
    """
    g = wi.graph
    w = wi.weights
    case, xs = classify(wi, comp)
    inside = bits(comp[0])
    outside = ((1 << g.n) - 1) & ~inside
    budget = wi.total - mask_weight(inside, w)
    if case == "case1":
        rows = _reach_rows(g)
        x_in, x_out = xs
        to_in = bits(v for v in range(g.n) if rows[v] >> x_in & 1) & outside
        from_out = rows[x_out] & outside
        return budget, (to_in, from_out)
    x1, x2 = xs
    if case == "case2m":
        g = MixedGraph(g.n, g.edges, tuple((b, a) for a, b in g.arcs))
    r_wo2 = _reach_rows(g, x2)
    r_wo1 = _reach_rows(g, x1)
    a1 = bits(v for v in range(g.n) if r_wo2[v] >> x1 & 1) & outside
    a2 = bits(v for v in range(g.n) if r_wo1[v] >> x2 & 1) & outside
    return budget, (a1, a2, a1 & a2)


def z_bounds(wi: WeightedInstance, comp: Comp) -> tuple[int, tuple[int, ...]]:
    """(budget, per-z upper bounds) for the z weights of this component."""
    budget, masks = _z_sets(wi, comp)
    return budget, tuple(mask_weight(m, wi.weights) for m in masks)


def subset_sums(values: Iterable[int], limit: int) -> list[int]:
    sums = {0}
    for x in values:
        if x:
            sums |= {s + x for s in sums if s + x <= limit}
    return sorted(sums)


def z_values(wi: WeightedInstance, comp: Comp) -> tuple[int, tuple[list[int], ...]]:
    """(budget, candidate weights per z): subset sums of the weights each z may collect."""
    budget, masks = _z_sets(wi, comp)
    w = wi.weights
    return budget, tuple(subset_sums((w[v] for v in members(m)), budget) for m in masks)


def _weightings(budget: int, values: Sequence[Sequence[int]]) -> Iterable[tuple[int, ...]]:
    for combo in itertools.product(*values):
        if sum(combo) <= budget:
            yield combo


@lru_cache(maxsize=200_000)
def _solve_u(graph: MixedGraph, weights: tuple[int, ...]) -> tuple[bool, ...]:
    res = solve_arboresque_full(WeightedInstance(graph, weights))
    return res.orientation.forward


def clear_cache() -> None:
    _solve_u.cache_clear()


def _collect(wi, comp, sims, weightings_for) -> tuple[list[tuple[bool, ...]], int]:
    tw = tuple(wi.weights[v] for v in comp[0])
    seen: dict[tuple[bool, ...], None] = {}
    solves = 0
    for u in sims:
        for zw in weightings_for(u):
            fwd = _solve_u(u.graph, tw + tuple(zw))
            solves += 1
            seen.setdefault(u.t_orientation(fwd), None)
    return sorted(seen, key=lambda f: tuple(not x for x in f)), solves


def exact_replacement_set(wi: WeightedInstance, t) -> ReplacementSet:
    comp = _as_component(wi, t)
    if not comp[1]:
        return ReplacementSet(comp, ((),), "exact", {"solves": 0})
    sims = build_simulation_set(wi, comp)
    budget, values = z_values(wi, comp)
    combos = list(_weightings(budget, values))
    found, solves = _collect(wi, comp, sims, lambda u: combos)
    return ReplacementSet(comp, tuple(found), "exact", {"solves": solves, "budget": budget, "weightings": len(combos)})


def grid_values(set_size: int, omega: int, eps) -> list[int]:
    """S = {ceil(i*eps*omega/|X|) : 0 <= i, i*eps <= |X|}."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if set_size < 1:
        raise ValueError("set size must be positive")
    k = floor(Fraction(set_size) / eps)
    step = eps * omega / set_size
    if step <= 1:
        # consecutive ceilings differ by at most one, so every integer up to the top appears
        return list(range(ceil(k * step) + 1))
    return sorted({ceil(i * step) for i in range(k + 1)})


def eps_grid(set_size: int, omega: int, eps) -> list[tuple[int, ...]]:
    """All maps X -> S, as tuples over X."""
    return list(itertools.product(grid_values(set_size, omega, eps), repeat=set_size))


def eps_replacement_set(wi: WeightedInstance, t, eps) -> ReplacementSet:
    """Grid version: z weights drawn from the eps/12 grid over [0, |w|].

    Grid points above the budget or a per-z cap are skipped; rounding each
    coordinate of an admissible weighting down to the grid stays admissible
    and within the grid step, so coverage is unaffected.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    comp = _as_component(wi, t)
    if not comp[1]:
        return ReplacementSet(comp, ((),), f"eps({eps})", {"solves": 0})
    sims = build_simulation_set(wi, comp)
    budget, caps = z_bounds(wi, comp)
    omega = wi.total
    vals = grid_values(len(caps), omega, eps / 12)
    combos = [
        c for c in itertools.product(*([v for v in vals if v <= cap] for cap in caps))
        if sum(c) <= budget
    ]
    found, solves = _collect(wi, comp, sims, lambda u: combos)
    return ReplacementSet(comp, tuple(found), f"eps({eps})", {"solves": solves, "grid": len(combos)})


def weight_perturbation_bound(d, w: Sequence[int], w2: Sequence[int]) -> bool:
    diff = abs(score_weighted(d, w) - score_weighted(d, w2))
    tot = sum(abs(a + b) for a, b in zip(w, w2))
    gap = sum(abs(a - b) for a, b in zip(w, w2))
    ok = diff <= 2 * tot * gap
    assert ok, (diff, tot, gap)
    return ok


def proof_weighting(wi: WeightedInstance, comp: Comp, forward: Sequence[bool]) -> tuple[int, tuple[int, ...]]:
    """(index into the simulation set, z weights) the proofs assign to a global orientation.

    Test utility: lets the simulation-set inequality be checked directly.
    """
    g = wi.graph
    w = wi.weights
    case, xs = classify(wi, comp)
    arcs = list(g.arcs) + [(u, v) if f else (v, u) for (u, v), f in zip(g.edges, forward)]
    outside = ((1 << g.n) - 1) & ~bits(comp[0])
    if case == "case1":
        rows = closure_rows(g.n, arcs)
        x_in, x_out = xs
        zin = mask_weight(bits(v for v in range(g.n) if rows[v] >> x_in & 1) & outside, w)
        zout = mask_weight(rows[x_out] & outside, w)
        return (1 if rows[x_in] >> x_out & 1 else 0), (zin, zout)
    x1, x2 = xs
    if case == "case2m":
        arcs = [(b, a) for a, b in arcs]
    wo2 = closure_rows(g.n, [(a, b) for a, b in arcs if x2 not in (a, b)])
    wo1 = closure_rows(g.n, [(a, b) for a, b in arcs if x1 not in (a, b)])
    r1 = bits(v for v in range(g.n) if wo2[v] >> x1 & 1) & outside
    r2 = bits(v for v in range(g.n) if wo1[v] >> x2 & 1) & outside
    return 0, (mask_weight(r1 & ~r2, w), mask_weight(r2 & ~r1, w), mask_weight(r1 & r2, w))

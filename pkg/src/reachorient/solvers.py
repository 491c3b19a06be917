"""Top-level solvers: brute force, the exact replacement-set pipeline, the
(1 - eps) variant, and constructive lower-bound orientations.

Every solver recomputes the returned value from the final orientation of the
input graph; internal bookkeeping is never trusted for the reported score.
"""

from __future__ import annotations

import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import kernels
from .arboresque import solve_tree
from .dismember import DEFAULT_ENUM_CAP, Member, iter_dismembered
from .errors import CapExceeded, GraphError
from .graph_core import (
    MixedGraph,
    Orientation,
    WeightedInstance,
    is_connected,
    mixed_arcs,
    score_weighted,
    undirected_components,
)
from .reduce import contract_to_wammro, lift_orientation, split_components
from .replacement import eps_replacement_set, exact_replacement_set

DEFAULT_BRUTE_CAP = 20


@dataclass
class SolveResult:
    orientation: Orientation
    value: int
    mode: str
    stats: dict = field(default_factory=dict)


def _weights_of(g, w) -> tuple[MixedGraph, tuple[int, ...] | None]:
    if isinstance(g, WeightedInstance):
        if w is not None:
            raise GraphError("weights given twice")
        return g.graph, g.weights
    return g, None if w is None else tuple(w)


def _value(o: Orientation, w) -> int:
    return score_weighted(o, w if w is not None else (1,) * o.graph.n)


# --- brute force -----------------------------------------------------------------

def brute_force(g, w: Sequence[int] | None = None, cap: int = DEFAULT_BRUTE_CAP) -> SolveResult:
    """Best of all 2^|E| orientations; ties go to the smallest direction code (forward first)."""
    g, w = _weights_of(g, w)
    m = len(g.edges)
    if m > cap:
        raise CapExceeded(f"brute force over {m} edges exceeds the cap of {cap} (--max-brute-edges)")
    t0 = time.perf_counter()
    val, code = kernels.brute_force_best(g.n, g.edges, g.arcs, w)
    o = g.orient(kernels.decode(code, m))
    value = _value(o, w)
    assert value == val, (value, val)
    return SolveResult(o, value, "brute", {"orientations": 1 << m, "backend": kernels.backend_name(),
                                           "seconds": time.perf_counter() - t0})


# --- replacement-set pipeline ----------------------------------------------------

def _member_best(member_wi: WeightedInstance, rset_fn, floor: int) -> tuple[int, tuple[bool, ...] | None, dict]:
    """Best orientation of one dismembered member whose value beats ``floor``.

    Depth-first over the product of per-component replacement sets, largest
    set first.  A branch is cut when even leaving its unassigned edges as
    digons cannot beat the running best; ties never replace, so the first
    optimum in product order is kept.
    """
    g = member_wi.graph
    w = member_wi.weights
    q_all = undirected_components(g)
    if len(q_all) > max(1, 2 * g.k):
        raise AssertionError(f"{len(q_all)} undirected components with k={g.k}")
    comps = [c for c in q_all if c[1]]
    sets = [rset_fn(member_wi, c) for c in comps]
    order = sorted(range(len(comps)), key=lambda i: -len(sets[i]))
    stats = {"components": len(comps), "set_sizes": [len(s) for s in sets], "branches": 0, "pruned": 0}
    base = list(g.arcs)
    best_val = floor
    best: tuple[bool, ...] | None = None
    fwd = [True] * len(g.edges)
    assigned = [False] * len(g.edges)

    def arcs_now():
        out = list(base)
        for i, (u, v) in enumerate(g.edges):
            if assigned[i]:
                out.append((u, v) if fwd[i] else (v, u))
            else:
                out.append((u, v))
                out.append((v, u))
        return out

    def rec(depth):
        nonlocal best_val, best
        stats["branches"] += 1
        if depth == len(order):
            val = kernels.score_arcs(g.n, arcs_now(), w)
            if val > best_val:
                best_val, best = val, tuple(fwd)
            return
        if depth > 0 or best_val >= 0:
            if kernels.score_arcs(g.n, arcs_now(), w) <= best_val:
                stats["pruned"] += 1
                return
        ci = order[depth]
        eidx = comps[ci][1]
        for t in sets[ci].orientations:
            for j, e in enumerate(eidx):
                fwd[e] = t[j]
                assigned[e] = True
            rec(depth + 1)
        for e in eidx:
            assigned[e] = False
            fwd[e] = True

    rec(0)
    return best_val, best, stats


def _member_task(args):
    member_wi, eps = args
    return _member_best(member_wi, _rset_fn(eps), -1)


def _rset_fn(eps):
    if eps is None:
        return exact_replacement_set

    def fn(wi, comp):
        k = max(1, wi.graph.k)
        return eps_replacement_set(wi, comp, Fraction(eps) / (392 * k ** 3))

    return fn


def _solve_component(ci: WeightedInstance, eps, cap: int, parallel: bool, stats: dict) -> Orientation:
    g = ci.graph
    if not g.edges:
        return g.forward()
    if g.k == 0:
        o, _ = solve_tree(ci)
        stats["trees"] += 1
        return o
    members: list[Member] = list(iter_dismembered(ci, cap))
    stats["members"] += len(members)
    best_val, best_o = -1, None
    if parallel and len(members) > 1:
        with ProcessPoolExecutor() as ex:
            results = list(ex.map(_member_task, [(m.instance, eps) for m in members]))
        for m, (val, fwd, st) in zip(members, results):
            _merge(stats, st)
            if fwd is not None and val > best_val:
                best_val, best_o = val, m.to_parent(m.instance.graph.orient(fwd))
    else:
        fn = _rset_fn(eps)
        for m in members:
            val, fwd, st = _member_best(m.instance, fn, best_val)
            _merge(stats, st)
            if fwd is not None:
                best_val, best_o = val, m.to_parent(m.instance.graph.orient(fwd))
    assert best_o is not None
    return best_o


def _merge(stats, st):
    stats["branches"] += st["branches"]
    stats["pruned"] += st["pruned"]
    if st["set_sizes"]:
        stats["max_set_size"] = max(stats["max_set_size"], max(st["set_sizes"]))


def _pipeline(g, w, eps, cap: int, parallel: bool, mode: str) -> SolveResult:
    g, w = _weights_of(g, w)
    t0 = time.perf_counter()
    wi, trace = contract_to_wammro(g, w)
    stats = {"contractions": len(trace), "members": 0, "trees": 0, "branches": 0, "pruned": 0, "max_set_size": 0}
    fwd = [True] * len(wi.graph.edges)
    for comp in split_components(wi):
        comp.embed(_solve_component(comp.instance, eps, cap, parallel, stats), fwd)
    o_final = Orientation(wi.graph, tuple(fwd))
    o = lift_orientation(trace, o_final)
    value = _value(o, w)
    assert value == score_weighted(o_final, wi.weights), "contraction changed the objective"
    stats["seconds"] = time.perf_counter() - t0
    return SolveResult(o, value, mode, stats)


def solve_exact(g, w: Sequence[int] | None = None, parallel: bool = False, max_dismember: int = DEFAULT_ENUM_CAP) -> SolveResult:
    return _pipeline(g, w, None, max_dismember, parallel, "exact")


def solve_approx(g, eps, w: Sequence[int] | None = None, parallel: bool = False,
                 max_dismember: int = DEFAULT_ENUM_CAP) -> SolveResult:
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return _pipeline(g, w, eps, max_dismember, parallel, f"approx({eps})")


# --- lower bounds ------------------------------------------------------------------

def centroid(t: MixedGraph | Sequence[tuple[int, int]], w: Sequence[int], vertices: Sequence[int] | None = None) -> int:
    """Vertex minimizing the heaviest component left after deleting it (smallest id on ties)."""
    edges = t.edges if isinstance(t, MixedGraph) else list(t)
    if vertices is None:
        vertices = range(t.n) if isinstance(t, MixedGraph) else sorted({x for e in edges for x in e})
    vs = list(vertices)
    if not vs:
        raise GraphError("empty tree")
    adj: dict[int, list[int]] = {v: [] for v in vs}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    if len(edges) != len(vs) - 1:
        raise GraphError("input is not a tree")
    root = vs[0]
    parent = {root: None}
    order = [root]
    for x in order:
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    if len(order) != len(vs):
        raise GraphError("input is not a tree")
    sub = {v: w[v] for v in vs}
    for x in reversed(order[1:]):
        sub[parent[x]] += sub[x]
    total = sub[root]
    best, best_v = None, None
    for v in sorted(vs):
        heaviest = total - sub[v]
        for y in adj[v]:
            if parent.get(y) == v:
                heaviest = max(heaviest, sub[y])
        if best is None or heaviest < best:
            best, best_v = heaviest, v
    return best_v


def balanced_partition(s: Sequence[int]) -> tuple[list[int], list[int]]:
    """Split into two parts whose smaller sum is at least a third of the total.

    Returns index lists.  Greedy largest-first, then single moves while they
    shrink the difference of the sums.
    """
    s = list(s)
    total = sum(s)
    if any(x < 0 for x in s):
        raise ValueError("negative element")
    if any(3 * x > 2 * total for x in s):
        raise ValueError("an element exceeds two thirds of the total")
    a: list[int] = []
    b: list[int] = []
    sa = sb = 0
    for i in sorted(range(len(s)), key=lambda i: (-s[i], i)):
        if sa <= sb:
            a.append(i)
            sa += s[i]
        else:
            b.append(i)
            sb += s[i]
    improved = True
    while improved:
        improved = False
        big, small = (a, b) if sa >= sb else (b, a)
        diff = abs(sa - sb)
        for i in sorted(big):
            if 0 < s[i] and abs(diff - 2 * s[i]) < diff:
                big.remove(i)
                small.append(i)
                if big is a:
                    sa, sb = sa - s[i], sb + s[i]
                else:
                    sb, sa = sb - s[i], sa + s[i]
                improved = True
                break
    assert 3 * min(sa, sb) >= total, (sa, sb, total)
    return sorted(a), sorted(b)


def _mixed_path(g: MixedGraph, src: int, dst_ok) -> tuple[int, list[tuple[str, int, bool]]] | None:
    """BFS over mixed steps; returns (target, [(kind, index, forward)]) for the first hit."""
    prev: dict[int, tuple[int, str, int, bool] | None] = {src: None}
    out: list[list[tuple[int, str, int, bool]]] = [[] for _ in range(g.n)]
    for i, (u, v) in enumerate(g.arcs):
        out[u].append((v, "a", i, True))
    for i, (u, v) in enumerate(g.edges):
        out[u].append((v, "e", i, True))
        out[v].append((u, "e", i, False))
    dq = deque([src])
    while dq:
        x = dq.popleft()
        for y, kind, i, f in out[x]:
            if y in prev:
                continue
            prev[y] = (x, kind, i, f)
            if dst_ok(y):
                steps = []
                z = y
                while prev[z] is not None:
                    p, kd, idx, ff = prev[z]
                    steps.append((kd, idx, ff))
                    z = p
                return y, steps[::-1]
            dq.append(y)
    return None


def _pair_orientation(g: MixedGraph, w: Sequence[int], allowed: set[int] | None = None) -> list[bool] | None:
    """Some orientation with R >= 1, or None if none exists."""
    fwd = [True] * len(g.edges)
    cand = [v for v in range(g.n) if w[v] > 0 and (allowed is None or v in allowed)]
    if any(w[v] >= 2 for v in cand):
        return fwd
    for u in cand:
        hit = _mixed_path(g, u, lambda y: y != u and w[y] > 0 and (allowed is None or y in allowed))
        if hit is not None:
            for kind, i, f in hit[1]:
                if kind == "e":
                    fwd[i] = f
            return fwd
    return None


def _tree_core(g: MixedGraph, w, verts: Sequence[int], eidx: Sequence[int], fwd: list[bool]) -> None:
    """Orient one undirected component: heavy side into the centroid, the rest out of it."""
    total = sum(w[v] for v in verts)
    tedges = [g.edges[i] for i in eidx]
    if total <= 7 or not eidx:
        sub = MixedGraph(g.n, tuple(tedges))
        local = _pair_orientation(sub, w, set(verts))
        if local is not None:
            for j, i in enumerate(eidx):
                fwd[i] = local[j]
        return
    c = centroid(tedges, w, verts)
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in verts}
    for j, (u, v) in enumerate(tedges):
        adj[u].append((v, j))
        adj[v].append((u, j))
    # branches hanging off the centroid, with parent links toward it
    branches = []
    par: dict[int, tuple[int, int]] = {}
    for y, j in sorted(adj[c]):
        members_ = [y]
        par[y] = (c, j)
        for x in members_:
            for z, jj in adj[x]:
                if z != c and z not in par:
                    par[z] = (x, jj)
                    members_.append(z)
        branches.append(members_)
    sizes = [sum(w[v] for v in b) for b in branches]
    try:
        inward, _ = balanced_partition(sizes)
    except ValueError:
        inward = [max(range(len(sizes)), key=lambda i: (sizes[i], -i))]
    inward = set(inward)
    for bi, b in enumerate(branches):
        toward = bi in inward
        for x in b:
            p, j = par[x]
            u, _ = tedges[j]
            # x -> p when pointing at the centroid
            fwd[eidx[j]] = (u == x) == toward


def lower_bound_orientation(wi: WeightedInstance) -> SolveResult:
    """Orientation meeting |w|^2/49 (no arcs) or |w|^2/(196 k^2) when R >= 1 is attainable."""
    g, w = wi.graph, wi.weights
    if not is_connected(g):
        raise GraphError("lower_bound_orientation expects a connected instance")
    t0 = time.perf_counter()
    k = g.k
    total = wi.total
    fwd = [True] * len(g.edges)
    feasible = _pair_orientation(g, w)
    comps = undirected_components(g)
    if k >= 1 and total <= 2 * k:
        if feasible is not None:
            fwd = feasible
    else:
        verts, eidx = max(comps, key=lambda c: sum(w[v] for v in c[0]))
        # a spanning tree of the component is enough; extra edges only add reachability
        tree_e = _spanning(g, verts, eidx)
        _tree_core(g, w, verts, tree_e, fwd)
    o = g.orient(fwd)
    value = _value(o, w)
    bound = Fraction(total * total, 49) if k == 0 else Fraction(total * total, 196 * k * k)
    guaranteed = feasible is not None and (k >= 1 or total >= 2)
    stats = {"bound": bound, "guaranteed": guaranteed, "seconds": time.perf_counter() - t0}
    if guaranteed and value < bound:
        raise AssertionError(f"lower-bound construction gave {value} < {bound}")
    return SolveResult(o, value, "heuristic", stats)


def _spanning(g: MixedGraph, verts, eidx) -> list[int]:
    from .graph_core import _DSU

    dsu = _DSU(g.n)
    out = []
    for i in eidx:
        u, v = g.edges[i]
        if dsu.union(u, v):
            out.append(i)
    return out


def has_positive_pair(wi: WeightedInstance) -> bool:
    """Whether some orientation reaches R >= 1."""
    return _pair_orientation(wi.graph, wi.weights) is not None


__all__ = [
    "DEFAULT_BRUTE_CAP",
    "SolveResult",
    "balanced_partition",
    "brute_force",
    "centroid",
    "has_positive_pair",
    "lower_bound_orientation",
    "solve_approx",
    "solve_exact",
]

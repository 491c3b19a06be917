"""Dismembering sets for trees and forests, and the guessed partial orientations.

A set F of edges is dismembering for (G, X) when every component of G - F
holds at most one vertex of X + V(F), or holds no vertex of X and exactly two
vertices of V(F), each incident to exactly one edge of F.
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CapExceeded, GraphError
from .graph_core import MixedGraph, Orientation, WeightedInstance, _DSU, undirected_components

DEFAULT_ENUM_CAP = 24

Edge = tuple[int, int]


@dataclass(frozen=True)
class DismemberingSet:
    edges: frozenset[int]
    certified: bool
    f1: frozenset[int] = frozenset()
    f2: frozenset[int] = frozenset()

    def __len__(self):
        return len(self.edges)


def _adjacency(edges: Sequence[Edge]) -> dict[int, list[tuple[int, int]]]:
    adj: dict[int, list[tuple[int, int]]] = {}
    for i, (u, v) in enumerate(edges):
        adj.setdefault(u, []).append((v, i))
        adj.setdefault(v, []).append((u, i))
    return adj


def _check_tree(edges: Sequence[Edge], vertices: Iterable[int]) -> list[int]:
    vs = sorted(set(vertices) | {x for e in edges for x in e})
    if len(edges) != max(len(vs) - 1, 0):
        raise GraphError("input is not a tree (edge count)")
    pos = {v: i for i, v in enumerate(vs)}
    dsu = _DSU(len(vs))
    for u, v in edges:
        if not dsu.union(pos[u], pos[v]):
            raise GraphError("input is not a tree (cycle)")
    return vs


def leaf_and_branch_edges(edges: Sequence[Edge], vertices: Iterable[int] = ()) -> tuple[frozenset[int], frozenset[int]]:
    """(E_1, E_>=3): edges at a leaf, and edges at a vertex of degree at least 3."""
    _check_tree(edges, vertices)
    deg = Counter(x for e in edges for x in e)
    e1 = frozenset(i for i, (u, v) in enumerate(edges) if deg[u] == 1 or deg[v] == 1)
    e3 = frozenset(i for i, (u, v) in enumerate(edges) if deg[u] >= 3 or deg[v] >= 3)
    return e1, e3


def certify(edges: Sequence[Edge], f: Iterable[int], xs: Iterable[int], vertices: Iterable[int] = ()) -> bool:
    """Recompute the dismembering condition from scratch."""
    f = set(f)
    xs = set(xs)
    vs = sorted(set(vertices) | xs | {x for e in edges for x in e})
    pos = {v: i for i, v in enumerate(vs)}
    dsu = _DSU(len(vs))
    f_deg: Counter = Counter()
    for i, (u, v) in enumerate(edges):
        if i in f:
            f_deg[u] += 1
            f_deg[v] += 1
        else:
            dsu.union(pos[u], pos[v])
    marked: dict[int, list[int]] = {}
    for v in vs:
        if v in xs or f_deg[v]:
            marked.setdefault(dsu.find(pos[v]), []).append(v)
    for comp in marked.values():
        if len(comp) <= 1:
            continue
        if len(comp) == 2 and not any(v in xs for v in comp) and all(f_deg[v] == 1 for v in comp):
            continue
        return False
    return True


def tree_dismembering(edges: Sequence[Edge], xs: Iterable[int], vertices: Iterable[int] = ()) -> DismemberingSet:
    """Dismembering set of size at most 5|X| for a tree, by leaf pruning.

    Leaves outside X are deleted (smallest id first) until every leaf is in
    X.  F1 takes the edges at branching vertices of what remains, F2 the
    remaining edges touching X.
    """
    vs = _check_tree(edges, vertices)
    xs = set(xs)
    if not xs <= set(vs):
        raise GraphError("marked vertices outside the tree")
    if not xs:
        return DismemberingSet(frozenset(), certify(edges, (), xs, vs))
    adj = _adjacency(edges)
    deg = {v: len(adj.get(v, ())) for v in vs}
    removed_e: set[int] = set()
    removed_v: set[int] = set()
    heap = [v for v in vs if deg[v] <= 1 and v not in xs]
    heapq.heapify(heap)
    while heap:
        v = heapq.heappop(heap)
        if v in removed_v or deg[v] > 1:
            continue
        removed_v.add(v)
        for u, i in adj.get(v, ()):
            if i in removed_e:
                continue
            removed_e.add(i)
            deg[v] -= 1
            deg[u] -= 1
            if deg[u] <= 1 and u not in xs:
                heapq.heappush(heap, u)
    alive = [i for i in range(len(edges)) if i not in removed_e]
    f1 = frozenset(i for i in alive if deg[edges[i][0]] >= 3 or deg[edges[i][1]] >= 3)
    f2 = frozenset(i for i in alive if i not in f1 and (edges[i][0] in xs or edges[i][1] in xs))
    assert len(f1) <= 3 * len(xs), (len(f1), len(xs))
    assert len(f2) <= 2 * len(xs), (len(f2), len(xs))
    f = f1 | f2
    return DismemberingSet(f, certify(edges, f, xs, vs), f1, f2)


def forest_dismembering(n: int, edges: Sequence[Edge], f0: Iterable[int]) -> DismemberingSet:
    """Dismembering set for (G - F0, V(F0)) with at most 10|F0| edges.

    ``edges`` are the edges of an undirected graph on ``0..n-1``; ``f0`` indexes
    into it.  Every component of G - F0 must be a tree.
    """
    f0 = set(f0)
    rest = [i for i in range(len(edges)) if i not in f0]
    marks = {x for i in f0 for x in edges[i]}
    sub = MixedGraph(n, tuple(edges[i] for i in rest))
    comps = undirected_components(sub, check_forest=True)
    f: set[int] = set()
    for verts, eidx in comps:
        xs = marks.intersection(verts)
        if not xs or not eidx:
            continue
        local = [sub.edges[i] for i in eidx]
        part = tree_dismembering(local, xs, verts)
        f.update(rest[eidx[j]] for j in part.edges)
    result = frozenset(f)
    cert = certify([edges[i] for i in rest], [rest.index(i) for i in result], marks, range(n))
    return DismemberingSet(result, cert)


def is_dismembered(wi: WeightedInstance | MixedGraph) -> bool:
    g = wi.graph if isinstance(wi, WeightedInstance) else wi
    arc_deg = Counter(x for a in g.arcs for x in a)
    for verts, _ in undirected_components(g):
        hit = [v for v in verts if arc_deg[v]]
        if len(hit) <= 1:
            continue
        if len(hit) == 2 and all(arc_deg[v] == 1 for v in hit):
            continue
        return False
    return True


@dataclass(frozen=True)
class Member:
    """A partial orientation: the F edges of the parent became arcs."""

    instance: WeightedInstance
    parent: WeightedInstance
    edge_origin: tuple[int, ...]          # member edge index -> parent edge index
    fixed: tuple[tuple[int, bool], ...]   # (parent edge index, forward flag) for guessed edges

    def to_parent(self, o: Orientation) -> Orientation:
        fwd = [True] * len(self.parent.graph.edges)
        for li, pi in enumerate(self.edge_origin):
            fwd[pi] = o.forward[li]
        for pi, d in self.fixed:
            fwd[pi] = d
        return Orientation(self.parent.graph, tuple(fwd))


def dismembering_edges(wi: WeightedInstance) -> DismemberingSet:
    g = wi.graph
    ug = list(g.edges) + list(g.arcs)
    ds = forest_dismembering(g.n, ug, range(len(g.edges), len(ug)))
    if any(i >= len(g.edges) for i in ds.edges):
        raise AssertionError("dismembering set touched an arc")
    return ds


def member_for(wi: WeightedInstance, f: Sequence[int], dirs: Sequence[bool]) -> Member:
    g = wi.graph
    fset = set(f)
    keep = tuple(i for i in range(len(g.edges)) if i not in fset)
    extra = tuple(g.edges[i] if d else g.edges[i][::-1] for i, d in zip(f, dirs))
    mg = MixedGraph(g.n, tuple(g.edges[i] for i in keep), g.arcs + extra)
    return Member(WeightedInstance(mg, wi.weights, wi.acyclic), wi, keep, tuple(zip(f, dirs)))


def enumerate_dismembered(wi: WeightedInstance, cap: int = DEFAULT_ENUM_CAP) -> list[Member]:
    """All 2^|F| partial orientations of the dismembering set, forward-first order."""
    return list(iter_dismembered(wi, cap))


def iter_dismembered(wi: WeightedInstance, cap: int = DEFAULT_ENUM_CAP):
    ds = dismembering_edges(wi)
    f = sorted(ds.edges)
    if len(f) > cap:
        raise CapExceeded(f"dismembering set has {len(f)} edges; enumeration cap is {cap} (--max-dismember)")
    m = len(f)
    for code in range(1 << m):
        dirs = [not (code >> (m - 1 - j)) & 1 for j in range(m)]
        yield member_for(wi, f, dirs)

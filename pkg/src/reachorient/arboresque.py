"""Exact dynamic program for weighted orientation of arboresque mixed graphs.

An arboresque graph is a tree plus one arc r->s such that either both items
at r leave r, or both items at s enter s.  The tree (without r->s) is rooted
at s; each vertex keeps a Pareto frontier of achievable profiles of its
subtree

    b        r reaches v inside the subtree
    k_in     w(In(v))
    k_out    w(Out(v))
    k_reach  R(subtree, w)
    d        k_out - k_shared, where k_shared = w(Out(v) & Out(r))

and the optimum is max k_reach + w(r) * d over root profiles.  All
transitions are nondecreasing in (k_in, k_out, k_reach, d), which makes the
frontier (maximal in those four) lossless.  Plain trees drop r and d.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import NamedTuple

from .errors import UnsupportedInstance
from .graph_core import MixedGraph, Orientation, WeightedInstance, _DSU


@dataclass(frozen=True)
class ArboresqueShape:
    arc: int | None          # index of the special arc r->s in graph.arcs
    side: str | None         # "r": d+(r) = d(r) = 2; "s": d-(s) = d(s) = 2
    r: int | None
    s: int | None
    root: int                # DP root: s, or the smallest vertex for plain trees

    @property
    def plain(self) -> bool:
        return self.arc is None


def _tree_without(g: MixedGraph, skip_arc: int | None) -> bool:
    m = len(g.edges) + len(g.arcs) - (skip_arc is not None)
    if m != g.n - 1:
        return False
    dsu = _DSU(g.n)
    for u, v in g.edges:
        if not dsu.union(u, v):
            return False
    for i, (u, v) in enumerate(g.arcs):
        if i != skip_arc and not dsu.union(u, v):
            return False
    return True


def check_arboresque(wi: WeightedInstance | MixedGraph) -> ArboresqueShape:
    g = wi.graph if isinstance(wi, WeightedInstance) else wi
    if g.n == 0:
        raise UnsupportedInstance("empty graph")
    if not g.arcs:
        if _tree_without(g, None):
            return ArboresqueShape(None, None, None, None, 0)
        raise UnsupportedInstance("arc-free graph is not a tree")
    deg = [0] * g.n
    outd = [0] * g.n
    ind = [0] * g.n
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
    for u, v in g.arcs:
        deg[u] += 1
        deg[v] += 1
        outd[u] += 1
        ind[v] += 1
    for side in ("r", "s"):
        for i, (r, s) in enumerate(g.arcs):
            if side == "r" and not (outd[r] == deg[r] == 2):
                continue
            if side == "s" and not (ind[s] == deg[s] == 2):
                continue
            if _tree_without(g, i):
                return ArboresqueShape(i, side, r, s, s)
    raise UnsupportedInstance("instance is neither arboresque nor a plain tree")


class Profile(NamedTuple):
    b: bool
    k_in: int
    k_out: int
    k_reach: int
    d: int

    @property
    def k_shared(self) -> int:
        return self.k_out - self.d


# frontier entry: (k_in, k_out, k_reach, d, witness)
# witness: None (leaf) | (child_entry, toward_child, link) | (prev_entry, child_entry, toward_child, link)


def _pareto(cands: list) -> list:
    """Keep entries not dominated in (k_in, k_out, k_reach, d); first of equals wins."""
    if len(cands) <= 1:
        return cands
    order = sorted(range(len(cands)), key=lambda i: (-cands[i][2], -cands[i][1], -cands[i][0], -cands[i][3], i))
    kept: list = []
    for i in order:
        a = cands[i]
        dominated = False
        for b in kept:
            if b[0] >= a[0] and b[1] >= a[1] and b[2] >= a[2] and b[3] >= a[3]:
                dominated = True
                break
        if not dominated:
            kept.append(a)
    return kept


@dataclass
class DpResult:
    orientation: Orientation
    value: int
    shape: ArboresqueShape
    frontier_size: int


class _Tree:
    def __init__(self, g: MixedGraph, skip_arc: int | None, root: int):
        self.g = g
        # link: ("e", idx) undirected edge, or ("a", idx, tail)
        nbrs: list[list[tuple[int, tuple]]] = [[] for _ in range(g.n)]
        for i, (u, v) in enumerate(g.edges):
            nbrs[u].append((v, ("e", i)))
            nbrs[v].append((u, ("e", i)))
        for i, (u, v) in enumerate(g.arcs):
            if i == skip_arc:
                continue
            nbrs[u].append((v, ("a", i, u)))
            nbrs[v].append((u, ("a", i, u)))
        self.parent = [-1] * g.n
        self.link: list[tuple | None] = [None] * g.n
        self.children: list[list[int]] = [[] for _ in range(g.n)]
        order = [root]
        seen = [False] * g.n
        seen[root] = True
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            for x, lk in sorted(nbrs[v], key=lambda t: t[0]):
                if not seen[x]:
                    seen[x] = True
                    self.parent[x] = v
                    self.link[x] = lk
                    self.children[v].append(x)
                    order.append(x)
        self.order = order


def _directions(link: tuple, v: int, x: int, g: MixedGraph) -> list[bool]:
    """Allowed values of ``toward_child`` (v -> x) for the parent link, forward-flag first."""
    if link[0] == "a":
        return [link[2] == v]
    u, _ = g.edges[link[1]]
    fwd_is_down = u == v
    return [fwd_is_down, not fwd_is_down]


def solve_arboresque(wi: WeightedInstance, shape: ArboresqueShape | None = None) -> tuple[Orientation, int]:
    r = solve_arboresque_full(wi, shape)
    return r.orientation, r.value


def solve_arboresque_full(wi: WeightedInstance, shape: ArboresqueShape | None = None) -> DpResult:
    if shape is None:
        shape = check_arboresque(wi)
    if shape.side == "s":
        # reverse everything: R is unchanged and the s-side becomes an r-side
        g = wi.graph
        rev = MixedGraph(g.n, g.edges, tuple((v, u) for u, v in g.arcs))
        rshape = ArboresqueShape(shape.arc, "r", shape.s, shape.r, shape.r)
        res = _solve(WeightedInstance(rev, wi.weights), rshape)
        o = Orientation(g, tuple(not f for f in res.orientation.forward))
        return DpResult(o, res.value, shape, res.frontier_size)
    return _solve(wi, shape)


def solve_tree(wi: WeightedInstance) -> tuple[Orientation, int]:
    if wi.graph.arcs:
        raise UnsupportedInstance("solve_tree expects an instance without arcs")
    shape = check_arboresque(wi)
    return solve_arboresque(wi, shape)


def _solve(wi: WeightedInstance, shape: ArboresqueShape) -> DpResult:
    g = wi.graph
    w = wi.weights
    plain = shape.plain
    tree = _Tree(g, shape.arc, shape.root)
    special = [False] * g.n
    if not plain:
        x = shape.r
        while x != -1:
            special[x] = True
            x = tree.parent[x]
    # frontier[v][b] -> list of entries
    frontier: list[dict[bool, list]] = [dict() for _ in range(g.n)]
    biggest = 0
    for v in reversed(tree.order):
        wv = w[v]
        c2 = 2 * comb(wv, 2)
        kids = tree.children[v]
        if not kids:
            if not plain and v == shape.r:
                frontier[v] = {True: [(wv, wv, c2, 0, None)], False: []}
            else:
                frontier[v] = {False: [(wv, wv, c2, 0 if plain else wv, None)], True: []}
            continue
        kids = sorted(kids, key=lambda x: (not special[x], x))
        x1 = kids[0]
        cur: dict[bool, list] = {False: [], True: []}
        for toward in _directions(tree.link[x1], v, x1, g):
            for bc in (False, True):
                for e in frontier[x1][bc]:
                    cin, cout, creach, cd, _ = e
                    if toward:
                        cur[False].append((wv, wv + cout, c2 + wv * cout + creach, 0 if plain else wv + cd, (e, True, x1)))
                    else:
                        nd = 0 if (plain or bc) else wv
                        cur[bc].append((wv + cin, wv, c2 + wv * cin + creach, nd, (e, False, x1)))
        cur = {b: _pareto(lst) for b, lst in cur.items()}
        for x in kids[1:]:
            dirs = _directions(tree.link[x], v, x, g)
            child = frontier[x][False] + frontier[x][True]
            nxt: dict[bool, list] = {False: [], True: []}
            for b in (False, True):
                for p in cur[b]:
                    pin, pout, preach, pd, _ = p
                    for toward in dirs:
                        for e in child:
                            cin, cout, creach, cd, _ = e
                            if toward:
                                nd = pd if (plain or b) else pd + cout
                                nxt[b].append((pin, pout + cout, preach + creach + pin * cout, nd, (p, e, True, x)))
                            else:
                                nxt[b].append((pin + cin, pout, preach + creach + pout * cin, pd, (p, e, False, x)))
            cur = {b: _pareto(lst) for b, lst in nxt.items()}
        frontier[v] = cur
        biggest = max(biggest, len(cur[False]) + len(cur[True]))
        for x in kids:
            # children tables are only reachable through witnesses from here on
            frontier[x] = {}
    root = shape.root
    wr = 0 if plain else w[shape.r]
    best_val = None
    best: list = []
    for b in (False, True):
        for e in frontier[root][b]:
            val = e[2] + wr * e[3]
            if best_val is None or val > best_val:
                best_val, best = val, [e]
            elif val == best_val:
                best.append(e)
    cands = [_reconstruct(g, tree, root, e) for e in best]
    fwd = min(cands, key=lambda f: tuple(not x for x in f))
    return DpResult(Orientation(g, fwd), best_val, shape, biggest)


def _reconstruct(g: MixedGraph, tree: _Tree, root: int, entry) -> tuple[bool, ...]:
    fwd = [True] * len(g.edges)
    stack = [(root, entry)]
    while stack:
        v, e = stack.pop()
        wit = e[4]
        while wit is not None:
            if len(wit) == 3:
                child_e, toward, x = wit
                prev = None
            else:
                prev, child_e, toward, x = wit
            link = tree.link[x]
            if link[0] == "e":
                u, _ = g.edges[link[1]]
                fwd[link[1]] = (u == v) == toward
            stack.append((x, child_e))
            wit = prev[4] if prev is not None else None
    return tuple(fwd)

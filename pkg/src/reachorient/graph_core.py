"""Mixed graphs, orientations, reachability and the two reachability objectives.

Vertices are dense integers ``0..n-1``.  Edges and arcs are kept as tuples of
ordered pairs so every edge has a stable index; an :class:`Orientation` stores
one boolean per edge index (``True`` means ``edges[i][0] -> edges[i][1]``).

Reachability sets are Python ints used as bit-vectors (bit ``v`` set means
vertex ``v`` is in the set).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import GraphError


@dataclass(frozen=True)
class MixedGraph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()
    arcs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        object.__setattr__(self, "arcs", tuple((int(u), int(v)) for u, v in self.arcs))
        if self.n < 0:
            raise GraphError("negative vertex count")
        for kind, items in (("edge", self.edges), ("arc", self.arcs)):
            for u, v in items:
                if u == v:
                    raise GraphError(f"self-loop {kind} at vertex {u}")
                if not (0 <= u < self.n and 0 <= v < self.n):
                    raise GraphError(f"{kind} ({u}, {v}) out of range for n={self.n}")

    @property
    def k(self) -> int:
        return len(self.arcs)

    @property
    def is_digraph(self) -> bool:
        return not self.edges

    def orient(self, directions: Sequence[bool]) -> "Orientation":
        return Orientation(self, tuple(bool(d) for d in directions))

    def forward(self) -> "Orientation":
        return Orientation(self, (True,) * len(self.edges))

    def incidence(self) -> list[list[tuple[int, int, bool]]]:
        """Per vertex: ``(edge_index, other_end, is_first_endpoint)`` for every edge."""
        inc: list[list[tuple[int, int, bool]]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append((i, v, True))
            inc[v].append((i, u, False))
        return inc


@dataclass(frozen=True)
class Orientation:
    graph: MixedGraph
    forward: tuple[bool, ...]

    def __post_init__(self):
        if len(self.forward) != len(self.graph.edges):
            raise GraphError(
                f"orientation has {len(self.forward)} directions for {len(self.graph.edges)} edges"
            )

    def oriented_edges(self) -> list[tuple[int, int]]:
        return [(u, v) if f else (v, u) for (u, v), f in zip(self.graph.edges, self.forward)]

    def all_arcs(self) -> list[tuple[int, int]]:
        return list(self.graph.arcs) + self.oriented_edges()

    def digraph(self) -> MixedGraph:
        return MixedGraph(self.graph.n, (), tuple(self.all_arcs()))

    def replace(self, directions: dict[int, bool]) -> "Orientation":
        fwd = list(self.forward)
        for i, d in directions.items():
            fwd[i] = bool(d)
        return Orientation(self.graph, tuple(fwd))


@dataclass(frozen=True)
class WeightedInstance:
    """A mixed graph with nonnegative integer vertex weights.

    ``acyclic=True`` marks a WAMMRO instance; the flag is checked on construction.
    """

    graph: MixedGraph
    weights: tuple[int, ...]
    acyclic: bool = False
    _total: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) != self.graph.n:
            raise GraphError(f"{len(w)} weights for {self.graph.n} vertices")
        if any(x < 0 for x in w):
            raise GraphError("negative vertex weight")
        if self.acyclic and mixed_cycle_exists(self.graph):
            raise GraphError("instance flagged acyclic contains a mixed cycle")
        object.__setattr__(self, "_total", sum(w))

    @classmethod
    def unit(cls, graph: MixedGraph, acyclic: bool = False) -> "WeightedInstance":
        return cls(graph, (1,) * graph.n, acyclic)

    @property
    def total(self) -> int:
        return self._total

    @property
    def size(self) -> int:
        """|V(G)| + w(G), the size measure used for polynomial bounds."""
        return self.graph.n + self._total


def _as_graph(d) -> MixedGraph:
    return d.digraph() if isinstance(d, Orientation) else d


# --- bit helpers -----------------------------------------------------------

def bits(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_weight(mask: int, weights: Sequence[int]) -> int:
    total = 0
    while mask:
        low = mask & -mask
        total += weights[low.bit_length() - 1]
        mask ^= low
    return total


# --- reachability ----------------------------------------------------------

def _successors(n: int, arcs: Iterable[tuple[int, int]]) -> list[list[int]]:
    succ: list[list[int]] = [[] for _ in range(n)]
    for u, v in arcs:
        succ[u].append(v)
    return succ


def tarjan(succ: Sequence[Sequence[int]]) -> list[list[int]]:
    """Iterative Tarjan. Components come out in reverse topological order
    (sinks of the condensation first)."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            nbrs = succ[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                u = nbrs[i]
                if index[u] == -1:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on_stack[u] = True
                    work.append((u, 0))
                elif on_stack[u] and index[u] < low[v]:
                    low[v] = index[u]
            else:
                work.pop()
                if work:
                    p = work[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                if low[v] == index[v]:
                    comp = []
                    while True:
                        u = stack.pop()
                        on_stack[u] = False
                        comp.append(u)
                        if u == v:
                            break
                    comps.append(sorted(comp))
    return comps


def closure_rows(n: int, arcs: Iterable[tuple[int, int]]) -> list[int]:
    """Out-set bitmask for every vertex (each row contains its own vertex)."""
    succ = _successors(n, arcs)
    comps = tarjan(succ)
    comp_of = [0] * n
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    comp_rows = [0] * len(comps)
    # reverse topological order: every successor component is already done
    for ci, comp in enumerate(comps):
        row = bits(comp)
        for v in comp:
            for u in succ[v]:
                cu = comp_of[u]
                if cu != ci:
                    row |= comp_rows[cu]
        comp_rows[ci] = row
    return [comp_rows[comp_of[v]] for v in range(n)]


def mixed_arcs(g: MixedGraph) -> list[tuple[int, int]]:
    """Arcs plus both directions of every edge."""
    out = list(g.arcs)
    for u, v in g.edges:
        out.append((u, v))
        out.append((v, u))
    return out


class ReachMatrix:
    """kappa as bit rows; ``m[u, v]`` is true iff v is reachable from u."""

    def __init__(self, rows: Sequence[int]):
        self.rows = tuple(rows)
        self.n = len(self.rows)

    def __getitem__(self, uv: tuple[int, int]) -> bool:
        u, v = uv
        return bool(self.rows[u] >> v & 1)

    def out_set(self, u: int) -> frozenset[int]:
        return frozenset(members(self.rows[u]))

    def in_set(self, v: int) -> frozenset[int]:
        return frozenset(u for u in range(self.n) if self.rows[u] >> v & 1)

    def pairs(self) -> int:
        return sum(bin(r).count("1") for r in self.rows) - self.n

    def __eq__(self, other):
        return isinstance(other, ReachMatrix) and self.rows == other.rows

    def __repr__(self):
        return f"ReachMatrix(n={self.n}, pairs={self.pairs()})"


def reach_closure(g) -> ReachMatrix:
    g = _as_graph(g)
    return ReachMatrix(closure_rows(g.n, mixed_arcs(g)))


def score(d) -> int:
    """R(D): ordered pairs (u, v), u != v, with v reachable from u."""
    g = _as_graph(d)
    if g.edges:
        raise GraphError("score expects a digraph or an Orientation")
    from . import kernels

    return kernels.score_arcs(g.n, g.arcs, None)


def score_weighted(d, weights: Sequence[int]) -> int:
    g = _as_graph(d)
    if g.edges:
        raise GraphError("score_weighted expects a digraph or an Orientation")
    if len(weights) != g.n:
        raise GraphError(f"{len(weights)} weights for {g.n} vertices")
    from . import kernels

    return kernels.score_arcs(g.n, g.arcs, weights)


def score_from_rows(rows: Sequence[int], weights: Sequence[int] | None) -> int:
    """Objective value from closure rows; exact for any integer weights."""
    if weights is None:
        return sum(bin(r).count("1") for r in rows) - len(rows)
    total = 0
    for u, row in enumerate(rows):
        wu = weights[u]
        if wu:
            # w(u) * (w(Out(u)) - w(u)) + 2*C(w(u), 2) == w(u) * (w(Out(u)) - 1)
            total += wu * (mask_weight(row, weights) - 1)
    return total


def in_out_sets(d, v: int) -> tuple[frozenset[int], frozenset[int]]:
    m = reach_closure(d)
    return m.in_set(v), m.out_set(v)


def scc(d) -> list[list[int]]:
    g = _as_graph(d)
    if g.edges:
        raise GraphError("scc expects a digraph")
    comps = tarjan(_successors(g.n, g.arcs))
    return sorted(comps)


# --- components and cycles -------------------------------------------------

class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def undirected_components(g: MixedGraph, check_forest: bool = False) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Components of G minus its arcs, as ``(vertices, edge indices)``, ordered by least vertex."""
    dsu = _DSU(g.n)
    for u, v in g.edges:
        if not dsu.union(u, v) and check_forest:
            raise GraphError(f"undirected component containing ({u}, {v}) is not a tree")
    verts: dict[int, list[int]] = {}
    for v in range(g.n):
        verts.setdefault(dsu.find(v), []).append(v)
    eds: dict[int, list[int]] = {r: [] for r in verts}
    for i, (u, _) in enumerate(g.edges):
        eds[dsu.find(u)].append(i)
    return [(tuple(verts[r]), tuple(eds[r])) for r in sorted(verts)]


def connected_components(g: MixedGraph) -> list[tuple[int, ...]]:
    """Components of the underlying graph UG(G)."""
    dsu = _DSU(g.n)
    for u, v in g.edges:
        dsu.union(u, v)
    for u, v in g.arcs:
        dsu.union(u, v)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(dsu.find(v), []).append(v)
    return [tuple(groups[r]) for r in sorted(groups)]


def is_connected(g: MixedGraph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


# A mixed cycle is returned as its vertex sequence c0..c_{l-1} plus, for each
# step c_j -> c_{j+1 mod l}, the item used: ("e", edge_index) or ("a", arc_index).
Cycle = tuple[tuple[int, ...], tuple[tuple[str, int], ...]]


def _shortest_undirected_cycle(g: MixedGraph) -> Cycle | None:
    """Shortest cycle of G minus its arcs; parallel edges count as 2-cycles.

    For each edge (u, v), BFS from v to u without that edge; the shortest
    detour closes the shortest cycle through the edge.
    """
    inc = g.incidence()
    best: Cycle | None = None
    for ei, (u, v) in enumerate(g.edges):
        limit = len(best[0]) - 1 if best is not None else g.n
        par = {v: (-1, -1)}
        frontier = [v]
        depth = 0
        hit = False
        while frontier and not hit and depth < limit:
            depth += 1
            nxt = []
            for x in frontier:
                for ej, y, _ in inc[x]:
                    if ej == ei or y in par:
                        continue
                    par[y] = (x, ej)
                    if y == u:
                        hit = True
                        break
                    nxt.append(y)
                if hit:
                    break
            frontier = nxt
        if not hit:
            continue
        # walk u back to v: u = p0, p1, ..., v; cycle goes u -> v via ei then v .. u
        path = [u]
        used = []
        x = u
        while x != v:
            px, ej = par[x]
            used.append(ej)
            path.append(px)
            x = px
        verts = [u] + path[::-1][:-1]
        # verts = u, v, ..., (child of u on path); items: ei, then edges along path
        items = [("e", ei)] + [("e", ej) for ej in reversed(used)]
        best = (tuple(verts), tuple(items))
    return best


def _tree_path(inc, comp_verts: set[int], a: int, b: int) -> list[tuple[int, int]]:
    """Vertex/edge sequence of the unique a-b path inside a tree component:
    list of (vertex, edge used to reach it), first entry (a, -1)."""
    if a == b:
        return [(a, -1)]
    par = {a: (-1, -1)}
    queue = [a]
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        if x == b:
            break
        for ei, y, _ in inc[x]:
            if y in comp_verts and y not in par:
                par[y] = (x, ei)
                queue.append(y)
    seq = []
    v = b
    while v != a:
        p, ei = par[v]
        seq.append((v, ei))
        v = p
    seq.append((a, -1))
    seq.reverse()
    return seq


def find_mixed_cycle(g: MixedGraph) -> Cycle | None:
    """A mixed cycle of ``g`` or None.

    Any cycle of the arc-free part is a mixed cycle.  Otherwise every
    undirected component is a tree (mixed paths both ways between any two of
    its vertices), so a mixed cycle exists iff the digraph on components
    induced by the arcs has a loop or a directed cycle.
    """
    und = _shortest_undirected_cycle(g)
    if und is not None:
        return und
    comps = undirected_components(g)
    comp_of = [0] * g.n
    for ci, (vs, _) in enumerate(comps):
        for v in vs:
            comp_of[v] = ci
    inc = g.incidence()
    # shortest directed cycle in the component digraph, BFS from each component
    out_arcs: list[list[int]] = [[] for _ in comps]
    for ai, (u, v) in enumerate(g.arcs):
        out_arcs[comp_of[u]].append(ai)
    best_arcs: list[int] | None = None
    for start in range(len(comps)):
        if not out_arcs[start]:
            continue
        par: dict[int, int] = {}  # component -> arc used to enter it
        queue = [start]
        head = 0
        closing = None
        seen = {start}
        while head < len(queue) and closing is None:
            c = queue[head]
            head += 1
            for ai in out_arcs[c]:
                d = comp_of[g.arcs[ai][1]]
                if d == start:
                    closing = (c, ai)
                    break
                if d not in seen:
                    seen.add(d)
                    par[d] = ai
                    queue.append(d)
        if closing is None:
            continue
        c, ai = closing
        chain = [ai]
        while c != start:
            a = par[c]
            chain.append(a)
            c = comp_of[g.arcs[a][0]]
        chain.reverse()
        if best_arcs is None or len(chain) < len(best_arcs):
            best_arcs = chain
    if best_arcs is None:
        return None
    verts: list[int] = []
    items: list[tuple[str, int]] = []
    m = len(best_arcs)
    for j, ai in enumerate(best_arcs):
        head_v = g.arcs[ai][1]
        next_tail = g.arcs[best_arcs[(j + 1) % m]][0]
        cv = {v for v in comps[comp_of[head_v]][0]}
        path = _tree_path(inc, cv, head_v, next_tail)
        # arc ai enters head_v; walk the tree path; the next arc leaves next_tail
        items.append(("a", ai))
        for idx, (v, ei) in enumerate(path):
            if idx > 0:
                items.append(("e", ei))
            verts.append(v)
    # items[0] is the arc entering verts[0]; rotate so item j joins verts[j] -> verts[j+1]
    items = items[1:] + items[:1]
    return tuple(verts), tuple(items)


def mixed_cycle_exists(g: MixedGraph) -> bool:
    return find_mixed_cycle(g) is not None


def cycle_orientation(g: MixedGraph, cycle: Cycle) -> dict[int, bool]:
    """Directions for the cycle's edges that make it a directed cycle."""
    verts, items = cycle
    out: dict[int, bool] = {}
    for j, (kind, idx) in enumerate(items):
        if kind != "e":
            continue
        a = verts[j]
        out[idx] = g.edges[idx][0] == a
    return out


# --- contraction and splicing ----------------------------------------------

@dataclass(frozen=True)
class Contraction:
    graph: MixedGraph
    weights: tuple[int, ...]
    vertex_map: tuple[int, ...]       # old vertex -> new vertex
    edge_origin: tuple[int, ...]      # new edge index -> old edge index
    arc_origin: tuple[int, ...]       # new arc index -> old arc index
    merged: int                       # id of the contracted vertex


def contract_set(g: MixedGraph, weights: Sequence[int], xs: Iterable[int]) -> Contraction:
    """Contract ``xs`` into one vertex; items inside ``xs`` are dropped.

    Remaining vertices keep their relative order; the new vertex is last.
    """
    xset = set(xs)
    if not xset:
        raise GraphError("cannot contract an empty vertex set")
    if any(not 0 <= x < g.n for x in xset):
        raise GraphError("contracted set has vertices out of range")
    vmap = [0] * g.n
    nxt = 0
    for v in range(g.n):
        if v not in xset:
            vmap[v] = nxt
            nxt += 1
    merged = nxt
    for x in xset:
        vmap[x] = merged
    new_edges, e_origin = [], []
    for i, (u, v) in enumerate(g.edges):
        if u in xset and v in xset:
            continue
        new_edges.append((vmap[u], vmap[v]))
        e_origin.append(i)
    new_arcs, a_origin = [], []
    for i, (u, v) in enumerate(g.arcs):
        if u in xset and v in xset:
            continue
        new_arcs.append((vmap[u], vmap[v]))
        a_origin.append(i)
    new_w = [0] * (merged + 1)
    for v in range(g.n):
        new_w[vmap[v]] += weights[v]
    return Contraction(
        MixedGraph(merged + 1, tuple(new_edges), tuple(new_arcs)),
        tuple(new_w),
        tuple(vmap),
        tuple(e_origin),
        tuple(a_origin),
        merged,
    )


def splice(d1: Orientation, d2: Orientation, vertex_map: Sequence[int | None] | None = None) -> Orientation:
    """D1<D2>: edges of d1 with both ends covered by d2 take d2's direction.

    ``vertex_map[v]`` gives the d1-vertex of d2's vertex ``v`` (``None`` when
    it has no counterpart); identity by default.
    """
    g1, g2 = d1.graph, d2.graph
    if vertex_map is None:
        vertex_map = list(range(g2.n))
    covered = {vertex_map[v] for v in range(g2.n) if vertex_map[v] is not None}
    directed: dict[tuple[int, int], tuple[int, int]] = {}
    for u, v in d2.all_arcs():
        a, b = vertex_map[u], vertex_map[v]
        if a is None or b is None:
            continue
        directed.setdefault(frozenset((a, b)), (a, b))
    fwd = list(d1.forward)
    for i, (u, v) in enumerate(g1.edges):
        if u in covered and v in covered:
            arc = directed.get(frozenset((u, v)))
            if arc is not None:
                fwd[i] = arc == (u, v)
    return Orientation(g1, tuple(fwd))

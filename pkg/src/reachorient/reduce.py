"""Instance reductions: cycle contraction to an acyclic weighted instance and
back, the weight blow-up to an unweighted instance, and component splitting.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

from .errors import CapExceeded, GraphError
from .graph_core import (
    Contraction,
    Cycle,
    MixedGraph,
    Orientation,
    WeightedInstance,
    connected_components,
    contract_set,
    cycle_orientation,
    find_mixed_cycle,
    tarjan,
)


@dataclass(frozen=True)
class ContractionStep:
    xs: frozenset[int]               # contracted set, ids of the graph before the step
    cycle: Cycle
    cycle_dirs: dict                 # edge index (before) -> forward flag making the cycle strong
    contraction: Contraction


@dataclass(frozen=True)
class ContractionTrace:
    original: MixedGraph
    steps: tuple[ContractionStep, ...]
    final: WeightedInstance
    weights: tuple[int, ...] | None = None   # starting weights; None means unit

    def __len__(self):
        return len(self.steps)

    def vertex_map(self) -> tuple[int, ...]:
        """Original vertex -> vertex of the final graph."""
        vm = list(range(self.original.n))
        for st in self.steps:
            cmap = st.contraction.vertex_map
            vm = [cmap[v] for v in vm]
        return tuple(vm)

    def replay(self) -> WeightedInstance:
        g, w = self.original, self.weights or (1,) * self.original.n
        for st in self.steps:
            c = contract_set(g, w, st.xs)
            g, w = c.graph, c.weights
        return WeightedInstance(g, w)


def contract_to_wammro(g: MixedGraph, weights: Sequence[int] | None = None) -> tuple[WeightedInstance, ContractionTrace]:
    """Contract shortest mixed cycles until none is left (unit starting weights by default)."""
    start = None if weights is None else tuple(weights)
    cur, w = g, start or (1,) * g.n
    if len(w) != g.n:
        raise GraphError(f"{len(w)} weights for {g.n} vertices")
    steps = []
    while True:
        cyc = find_mixed_cycle(cur)
        if cyc is None:
            break
        xs = frozenset(cyc[0])
        c = contract_set(cur, w, xs)
        steps.append(ContractionStep(xs, cyc, cycle_orientation(cur, cyc), c))
        cur, w = c.graph, c.weights
    final = WeightedInstance(cur, w, acyclic=True)
    return final, ContractionTrace(g, tuple(steps), final, start)


def lift_orientation(trace: ContractionTrace, o: Orientation) -> Orientation:
    """Orientation of the original graph with the same objective value as ``o``.

    Walking the steps backwards: surviving edges keep their flag (contraction
    preserves endpoint order), cycle edges get the cycle's strong orientation,
    chords inside a contracted set are oriented forward.
    """
    if o.graph != trace.final.graph:
        raise GraphError("orientation does not belong to the trace's final graph")
    fwd = list(o.forward)
    graphs = [trace.original] + [st.contraction.graph for st in trace.steps[:-1]]
    for st, before in zip(reversed(trace.steps), reversed(graphs)):
        prev = [True] * len(before.edges)
        for new_i, old_i in enumerate(st.contraction.edge_origin):
            prev[old_i] = fwd[new_i]
        for i, d in st.cycle_dirs.items():
            prev[i] = d
        fwd = prev
    return Orientation(trace.original, tuple(fwd))


def mixed_strong_partition(g: MixedGraph) -> list[list[int]]:
    """Final vertex partition of cycle contraction, computed directly.

    A mixed graph has a strongly connected orientation iff it is mixed
    strongly connected and no edge is a bridge of its underlying graph.  So:
    take mixed SCCs, drop edges that are bridges inside their class, repeat.
    Only the partition is returned (no per-cycle trace).
    """
    alive = [True] * len(g.edges)
    while True:
        succ: list[list[int]] = [[] for _ in range(g.n)]
        for u, v in g.arcs:
            succ[u].append(v)
        for i, (u, v) in enumerate(g.edges):
            if alive[i]:
                succ[u].append(v)
                succ[v].append(u)
        comps = tarjan(succ)
        comp_of = [0] * g.n
        for ci, c in enumerate(comps):
            for v in c:
                comp_of[v] = ci
        items = [("a", i, u, v) for i, (u, v) in enumerate(g.arcs) if comp_of[u] == comp_of[v]]
        items += [("e", i, u, v) for i, (u, v) in enumerate(g.edges) if alive[i] and comp_of[u] == comp_of[v]]
        bridges = _bridges(g.n, items)
        changed = False
        for kind, i in bridges:
            if kind == "e":
                alive[i] = False
                changed = True
        if not changed:
            return sorted(sorted(c) for c in comps)


def _bridges(n: int, items) -> set[tuple[str, int]]:
    """Bridges of the undirected multigraph on ``items`` (iterative lowpoint DFS)."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for idx, (_, _, u, v) in enumerate(items):
        adj[u].append((v, idx))
        adj[v].append((u, idx))
    disc = [-1] * n
    low = [0] * n
    out = set()
    t = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = t
        t += 1
        stack = [(root, -1, 0)]
        while stack:
            v, via, i = stack[-1]
            if i < len(adj[v]):
                stack[-1] = (v, via, i + 1)
                u, idx = adj[v][i]
                if idx == via:
                    continue
                if disc[u] == -1:
                    disc[u] = low[u] = t
                    t += 1
                    stack.append((u, idx, 0))
                elif disc[u] < low[v]:
                    low[v] = disc[u]
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if low[v] > disc[p]:
                        kind, i2, _, _ = items[via]
                        out.add((kind, i2))
    return out


def contract_partition(g: MixedGraph, parts: Sequence[Sequence[int]]) -> WeightedInstance:
    """Contract each part (unit starting weights); part order follows least vertex."""
    cur, w = g, (1,) * g.n
    vm = list(range(g.n))
    for part in sorted(parts, key=min):
        if len(part) < 2:
            continue
        c = contract_set(cur, w, {vm[v] for v in part})
        vm = [c.vertex_map[x] for x in vm]
        cur, w = c.graph, c.weights
    return WeightedInstance(cur, w)


# --- weight blow-up ----------------------------------------------------------

DEFAULT_BLOWUP_CAP = 200_000


@dataclass(frozen=True)
class BlowupResult:
    graph: MixedGraph
    k0: int
    scale: int
    vertex_map: tuple[int, ...]       # original vertex -> its representative in graph
    new_weights: tuple[int, ...]      # w' per original vertex


def blowup_offset(weights: Sequence[int], scale: int) -> int:
    return 2 * sum(comb(scale * x, 2) - scale * scale * comb(x, 2) for x in weights if x > 0)


def expand_to_mmro(wi: WeightedInstance, scale: int | None = None, cap: int = DEFAULT_BLOWUP_CAP) -> BlowupResult:
    """Replace each vertex by w'(v) vertices joined to it by digons.

    w'(v) = 1 for weight 0, else ``scale * w(v)``; ``scale`` defaults to
    ``n**4`` with n = |V| + w(G).  The unweighted score of any orientation is
    ``scale**2 * R(G, w) + k0 + residual`` where the residual only collects
    pairs touching a weight-0 vertex.
    """
    if scale is None:
        scale = wi.size ** 4
    if scale < 1:
        raise GraphError("scale must be a positive integer")
    g = wi.graph
    wp = tuple(1 if x == 0 else scale * x for x in wi.weights)
    total = sum(wp)
    if total > cap:
        raise CapExceeded(f"blow-up would create {total} vertices (cap {cap})")
    arcs = list(g.arcs)
    nxt = g.n
    for v in range(g.n):
        for _ in range(wp[v] - 1):
            arcs.append((v, nxt))
            arcs.append((nxt, v))
            nxt += 1
    return BlowupResult(
        MixedGraph(nxt, g.edges, tuple(arcs)),
        blowup_offset(wi.weights, scale),
        scale,
        tuple(range(g.n)),
        wp,
    )


# --- connected components ------------------------------------------------------

@dataclass(frozen=True)
class Component:
    instance: WeightedInstance
    vertices: tuple[int, ...]         # local id -> global id
    edges: tuple[int, ...]            # local edge index -> global edge index
    arcs: tuple[int, ...]             # local arc index -> global arc index

    def embed(self, o: Orientation, into: list[bool]) -> None:
        for li, gi in enumerate(self.edges):
            into[gi] = o.forward[li]


def split_components(wi: WeightedInstance) -> list[Component]:
    g = wi.graph
    out = []
    comp_of = [0] * g.n
    comps = connected_components(g)
    for ci, vs in enumerate(comps):
        for v in vs:
            comp_of[v] = ci
    local = [0] * g.n
    for vs in comps:
        for i, v in enumerate(vs):
            local[v] = i
    edges_by: list[list[int]] = [[] for _ in comps]
    arcs_by: list[list[int]] = [[] for _ in comps]
    for i, (u, _) in enumerate(g.edges):
        edges_by[comp_of[u]].append(i)
    for i, (u, _) in enumerate(g.arcs):
        arcs_by[comp_of[u]].append(i)
    for ci, vs in enumerate(comps):
        sub = MixedGraph(
            len(vs),
            tuple((local[g.edges[i][0]], local[g.edges[i][1]]) for i in edges_by[ci]),
            tuple((local[g.arcs[i][0]], local[g.arcs[i][1]]) for i in arcs_by[ci]),
        )
        out.append(
            Component(
                WeightedInstance(sub, tuple(wi.weights[v] for v in vs), wi.acyclic),
                tuple(vs),
                tuple(edges_by[ci]),
                tuple(arcs_by[ci]),
            )
        )
    return out


def split_connected(wi: WeightedInstance) -> list[WeightedInstance]:
    return [c.instance for c in split_components(wi)]


def induced(wi: WeightedInstance, vertices: Sequence[int], acyclic: bool | None = None) -> Component:
    """Sub-instance on ``vertices`` with every item inside it."""
    g = wi.graph
    vs = tuple(vertices)
    pos = {v: i for i, v in enumerate(vs)}
    eidx = tuple(i for i, (u, v) in enumerate(g.edges) if u in pos and v in pos)
    aidx = tuple(i for i, (u, v) in enumerate(g.arcs) if u in pos and v in pos)
    sub = MixedGraph(
        len(vs),
        tuple((pos[g.edges[i][0]], pos[g.edges[i][1]]) for i in eidx),
        tuple((pos[g.arcs[i][0]], pos[g.arcs[i][1]]) for i in aidx),
    )
    flag = wi.acyclic if acyclic is None else acyclic
    return Component(WeightedInstance(sub, tuple(wi.weights[v] for v in vs), flag), vs, eidx, aidx)


__all__ = [
    "BlowupResult",
    "Component",
    "ContractionStep",
    "ContractionTrace",
    "blowup_offset",
    "contract_partition",
    "contract_to_wammro",
    "expand_to_mmro",
    "induced",
    "lift_orientation",
    "mixed_strong_partition",
    "split_components",
    "split_connected",
]

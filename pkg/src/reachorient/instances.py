"""Instance files, orientation files, and instance generators.

Instance format (1-based vertices)::

    c free text
    p mmro <n> <edges> <arcs>
    w <v> <weight>          # optional, default 1
    e <u> <v>               # undirected edge
    a <u> <v>               # arc u -> v

Orientation format: ``s <value>`` followed by one ``o <u> <v>`` line per edge
in edge-index order, meaning that edge is directed u -> v.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import ceil, comb
from typing import Iterable, Sequence

from .errors import CapExceeded, GraphError, ParseError, UnsupportedInstance
from .graph_core import MixedGraph, Orientation, WeightedInstance, is_connected, mixed_cycle_exists


# --- instance text ---------------------------------------------------------------

def _ints(parts: Sequence[str], count: int, lineno: int, what: str) -> list[int]:
    if len(parts) != count:
        raise ParseError(f"{what} line needs {count} integers", lineno)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"non-integer field in {what} line", lineno) from None


def parse_instance(text: str) -> tuple[MixedGraph, tuple[int, ...]]:
    header = None
    weights: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    arcs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tag, *rest = line.split()
        if tag == "p":
            if header is not None:
                raise ParseError("duplicate header", lineno)
            if not rest or rest[0] != "mmro":
                raise ParseError("header must read 'p mmro <n> <edges> <arcs>'", lineno)
            header = _ints(rest[1:], 3, lineno, "header")
            if min(header) < 0:
                raise ParseError("negative count in header", lineno)
            continue
        if header is None:
            raise ParseError("data before the 'p mmro' header", lineno)
        n = header[0]
        if tag == "w":
            v, x = _ints(rest, 2, lineno, "weight")
            if not 1 <= v <= n:
                raise ParseError(f"vertex {v} out of range 1..{n}", lineno)
            if x < 0:
                raise ParseError("negative weight", lineno)
            if v in weights:
                raise ParseError(f"second weight for vertex {v}", lineno)
            weights[v] = x
        elif tag in ("e", "a"):
            u, v = _ints(rest, 2, lineno, "edge" if tag == "e" else "arc")
            for x in (u, v):
                if not 1 <= x <= n:
                    raise ParseError(f"vertex {x} out of range 1..{n}", lineno)
            if u == v:
                raise ParseError("self-loop", lineno)
            (edges if tag == "e" else arcs).append((u - 1, v - 1))
        else:
            raise ParseError(f"unknown line type {tag!r}", lineno)
    if header is None:
        raise ParseError("missing 'p mmro' header", 0)
    n, me, ma = header
    if len(edges) != me or len(arcs) != ma:
        raise ParseError(f"header announces {me} edges and {ma} arcs, file has {len(edges)} and {len(arcs)}", 0)
    w = tuple(weights.get(v, 1) for v in range(1, n + 1))
    return MixedGraph(n, tuple(edges), tuple(arcs)), w


def serialize_instance(g: MixedGraph, weights: Sequence[int] | None = None, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p mmro {g.n} {len(g.edges)} {len(g.arcs)}")
    if weights is not None:
        lines += [f"w {v + 1} {x}" for v, x in enumerate(weights) if x != 1]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges]
    lines += [f"a {u + 1} {v + 1}" for u, v in g.arcs]
    return "\n".join(lines) + "\n"


def parse_orientation(text: str, g: MixedGraph) -> tuple[Orientation, int | None]:
    value = None
    dirs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tag, *rest = line.split()
        if tag == "s":
            if value is not None:
                raise ParseError("duplicate value line", lineno)
            value = _ints(rest, 1, lineno, "value")[0]
        elif tag == "o":
            u, v = _ints(rest, 2, lineno, "orientation")
            dirs.append((u - 1, v - 1))
        else:
            raise ParseError(f"unknown line type {tag!r}", lineno)
    if len(dirs) != len(g.edges):
        raise ParseError(f"orientation has {len(dirs)} lines for {len(g.edges)} edges", 0)
    fwd = []
    for i, ((u, v), d) in enumerate(zip(g.edges, dirs)):
        if d == (u, v):
            fwd.append(True)
        elif d == (v, u):
            fwd.append(False)
        else:
            raise ParseError(f"line for edge {i + 1} names {d[0] + 1}-{d[1] + 1}, expected {u + 1}-{v + 1}", 0)
    return Orientation(g, tuple(fwd)), value


def serialize_orientation(o: Orientation, value: int) -> str:
    lines = [f"s {value}"] + [f"o {u + 1} {v + 1}" for u, v in o.oriented_edges()]
    return "\n".join(lines) + "\n"


# --- 3-bounded Max-2-SAT -------------------------------------------------------------

@dataclass(frozen=True)
class SatInstance:
    """Variables 1..var_count; a literal is +x or -x."""

    var_count: int
    clauses: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(int(l) for l in c) for c in self.clauses))
        if self.var_count < 1:
            raise GraphError("need at least one variable")
        occ = [0] * (self.var_count + 1)
        for c in self.clauses:
            if len(c) != 2:
                raise GraphError(f"clause {c} does not have exactly two literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.var_count:
                    raise GraphError(f"literal {lit} out of range")
            for x in {abs(lit) for lit in c}:
                occ[x] += 1
        for x in range(1, self.var_count + 1):
            if occ[x] > 3:
                raise GraphError(f"variable {x} occurs in {occ[x]} clauses (at most 3 allowed)")
            if occ[x] == 0:
                raise GraphError(f"variable {x} occurs in no clause")

    def satisfied(self, assignment: Sequence[bool]) -> int:
        return sum(any(assignment[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)


def parse_dimacs(text: str) -> SatInstance:
    header = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("header must read 'p cnf <vars> <clauses>'", lineno)
            header = _ints(parts[2:], 2, lineno, "header")
            continue
        if header is None:
            raise ParseError("clause before the 'p cnf' header", lineno)
        lits = _ints(parts, len(parts), lineno, "clause")
        if not lits or lits[-1] != 0:
            raise ParseError("clause must end with 0", lineno)
        if len(lits) != 3:
            raise ParseError("clause must have exactly two literals", lineno)
        clauses.append((lits[0], lits[1]))
    if header is None:
        raise ParseError("missing 'p cnf' header", 0)
    if len(clauses) != header[1]:
        raise ParseError(f"header announces {header[1]} clauses, file has {len(clauses)}", 0)
    try:
        return SatInstance(header[0], tuple(clauses))
    except GraphError as exc:
        raise ParseError(str(exc), 0) from None


def serialize_dimacs(sat: SatInstance) -> str:
    lines = [f"p cnf {sat.var_count} {len(sat.clauses)}"] + [f"{a} {b} 0" for a, b in sat.clauses]
    return "\n".join(lines) + "\n"


def max2sat_brute(sat: SatInstance, cap: int = 20) -> tuple[tuple[bool, ...], int]:
    """Best assignment (first in True-first order) and its satisfied count."""
    if sat.var_count > cap:
        raise CapExceeded(f"{sat.var_count} variables exceed the brute-force cap of {cap}")
    best: tuple[tuple[bool, ...], int] | None = None
    for a in itertools.product((True, False), repeat=sat.var_count):
        s = sat.satisfied(a)
        if best is None or s > best[1]:
            best = (a, s)
    assert best is not None
    assert 4 * best[1] >= 3 * len(sat.clauses)
    return best


@dataclass(frozen=True)
class GadgetResult:
    instance: WeightedInstance
    y_pairs: tuple[tuple[int, int], ...]          # clause index pairs sharing a variable
    clause_vertices: tuple[tuple[int, int], ...]  # clause index -> (a_C, b_C)
    literal_vertex: dict                          # literal (+x / -x) -> s vertex
    var_edge: tuple[int, ...]                     # variable x -> index of its edge (s_notx, s_x)

    @property
    def y_count(self) -> int:
        return len(self.y_pairs)

    def orientation_for(self, assignment: Sequence[bool]) -> Orientation:
        """True sends the variable edge from s_notx to s_x (its stored direction)."""
        fwd = [True] * len(self.instance.graph.edges)
        for x, ei in enumerate(self.var_edge):
            fwd[ei] = bool(assignment[x])
        return Orientation(self.instance.graph, tuple(fwd))


def gen_sat_gadget(sat: SatInstance) -> GadgetResult:
    m = len(sat.clauses)
    nv = sat.var_count
    a = lambda i: 2 * i
    b = lambda i: 2 * i + 1
    s_pos = lambda x: 2 * m + 2 * (x - 1)
    s_neg = lambda x: 2 * m + 2 * (x - 1) + 1
    varsets = [{abs(l) for l in c} for c in sat.clauses]
    ys = tuple((i, j) for i in range(m) for j in range(i + 1, m) if varsets[i] & varsets[j])
    arcs: dict[tuple[int, int], None] = {}
    for i, j in ys:
        arcs[(a(i), b(j))] = None
        arcs[(a(j), b(i))] = None
    for i, c in enumerate(sat.clauses):
        for lit in c:
            x = abs(lit)
            if lit > 0:
                arcs[(a(i), s_neg(x))] = None
                arcs[(s_pos(x), b(i))] = None
            else:
                arcs[(a(i), s_pos(x))] = None
                arcs[(s_neg(x), b(i))] = None
    edges = tuple((s_neg(x), s_pos(x)) for x in range(1, nv + 1))
    g = MixedGraph(2 * m + 2 * nv, edges, tuple(arcs))
    w = (1,) * (2 * m) + (0,) * (2 * nv)
    lits = {}
    for x in range(1, nv + 1):
        lits[x] = s_pos(x)
        lits[-x] = s_neg(x)
    return GadgetResult(
        WeightedInstance(g, w, acyclic=True),
        ys,
        tuple((a(i), b(i)) for i in range(m)),
        lits,
        tuple(range(nv)),
    )


def random_sat(rng: random.Random, var_count: int, clause_count: int, max_tries: int = 1000) -> SatInstance:
    """Random 3-bounded 2-SAT instance; variables occur in 1..3 clauses."""
    for _ in range(max_tries):
        occ = [0] * (var_count + 1)
        clauses = []
        for _ in range(clause_count):
            free = [x for x in range(1, var_count + 1) if occ[x] < 3]
            if len(free) < 2:
                break
            x, y = rng.sample(free, 2)
            occ[x] += 1
            occ[y] += 1
            clauses.append((x if rng.random() < 0.5 else -x, y if rng.random() < 0.5 else -y))
        if len(clauses) == clause_count and all(occ[1:]):
            return SatInstance(var_count, tuple(clauses))
    raise UnsupportedInstance(f"no 3-bounded instance with {var_count} variables and {clause_count} clauses found")


# --- replacement-set lower-bound family ------------------------------------------------

MAX_LB_Q = 4


def lb_weights(q: int) -> dict[str, int]:
    big_n = 2 * comb(q + 2, 2) * 2 ** (2 * q * q)
    return {"N": big_n}


def gen_replacement_lb(q: int) -> tuple[WeightedInstance, tuple[tuple[int, ...], tuple[int, ...]]]:
    """Path T = u_0..u_q, a star of edges v_i - x, arcs x -> u_0 and y -> u_q.

    Vertex ids: x = 0, y = 1, u_i = 2 + i, v_i = 3 + q + i.  Edge i < q is
    u_i - u_{i+1}; edge q + i is v_i - x.  Returns the instance and T as
    (vertices, edge indices).
    """
    if not 1 <= q <= MAX_LB_Q:
        raise GraphError(f"q must lie in 1..{MAX_LB_Q}")
    u = lambda i: 2 + i
    v = lambda i: 3 + q + i
    big_n = lb_weights(q)["N"]
    w = [0, big_n] + [2 ** (q * q - i * i) for i in range(q + 1)] + [2 ** (2 * i) * big_n for i in range(q + 1)]
    edges = tuple((u(i), u(i + 1)) for i in range(q)) + tuple((v(i), 0) for i in range(q + 1))
    g = MixedGraph(2 * q + 4, edges, ((0, u(0)), (1, u(q))))
    t = (tuple(u(i) for i in range(q + 1)), tuple(range(q)))
    return WeightedInstance(g, tuple(w), acyclic=True), t


def lb_partial(wi: WeightedInstance, q: int, i: int) -> WeightedInstance:
    """H_i: star edge at v_i points into x, every other star edge points out of x."""
    g = wi.graph
    star = [(3 + q + j, 0) if j == i else (0, 3 + q + j) for j in range(q + 1)]
    h = MixedGraph(g.n, g.edges[:q], g.arcs + tuple(star))
    return WeightedInstance(h, wi.weights, acyclic=True)


def lb_target(q: int, i: int) -> tuple[bool, ...]:
    """Path orientation in which every vertex of T reaches u_i."""
    return tuple(j < i for j in range(q))


# --- random instances ------------------------------------------------------------------

def gen_random(
    n: int,
    edge_prob: float,
    arc_prob: float,
    weight_max: int = 1,
    seed: int | None = None,
    *,
    weight_min: int = 1,
    connected: bool = False,
    acyclic: bool = False,
    dismembered: bool = False,
    max_tries: int = 1000,
) -> tuple[MixedGraph, tuple[int, ...]]:
    """Random mixed graph: each vertex pair gets an edge, else an arc, else nothing.

    ``acyclic`` drops items (in random order) that would close a mixed cycle;
    ``dismembered`` additionally orients a dismembering set at random;
    ``connected`` resamples until the underlying graph is connected.
    """
    for p in (edge_prob, arc_prob):
        if not 0 <= p <= 1:
            raise GraphError("probabilities must lie in [0, 1]")
    if n < 0 or weight_min < 0 or weight_max < weight_min:
        raise GraphError("bad size or weight range")
    rng = random.Random(seed)
    for _ in range(max_tries):
        items: list[tuple[str, int, int]] = []
        for u in range(n):
            for v in range(u + 1, n):
                r = rng.random()
                if r < edge_prob:
                    items.append(("e", u, v) if rng.random() < 0.5 else ("e", v, u))
                elif rng.random() < arc_prob:
                    items.append(("a", u, v) if rng.random() < 0.5 else ("a", v, u))
        w = tuple(rng.randint(weight_min, weight_max) for _ in range(n))
        if acyclic or dismembered:
            rng.shuffle(items)
            kept: list[tuple[str, int, int]] = []
            for it in items:
                trial = kept + [it]
                if not mixed_cycle_exists(_build(n, trial)):
                    kept = trial
            items = sorted(kept, key=lambda t: (t[0] != "e", t[1], t[2]))
        g = _build(n, items)
        if dismembered:
            from .dismember import dismembering_edges, member_for

            wi = WeightedInstance(g, w)
            f = sorted(dismembering_edges(wi).edges)
            g = member_for(wi, f, [rng.random() < 0.5 for _ in f]).instance.graph
        if not connected or is_connected(g):
            return g, w
    raise UnsupportedInstance(f"no connected sample after {max_tries} tries")


def _build(n: int, items) -> MixedGraph:
    return MixedGraph(
        n,
        tuple((u, v) for t, u, v in items if t == "e"),
        tuple((u, v) for t, u, v in items if t == "a"),
    )


def read_text(path: str) -> str:
    with open(path, encoding="ascii") as fh:
        return fh.read()


__all__ = [
    "GadgetResult",
    "SatInstance",
    "gen_random",
    "gen_replacement_lb",
    "gen_sat_gadget",
    "lb_partial",
    "lb_target",
    "max2sat_brute",
    "parse_dimacs",
    "parse_instance",
    "parse_orientation",
    "random_sat",
    "serialize_dimacs",
    "serialize_instance",
    "serialize_orientation",
]

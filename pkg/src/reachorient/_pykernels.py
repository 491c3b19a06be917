"""Pure-Python versions of the hot kernels (exact for arbitrarily large weights).

Both kernels use per-vertex adjacency bitmasks and frontier expansion, the
same scheme as the compiled module, so the two backends are interchangeable.
"""

from __future__ import annotations

from typing import Sequence


def _row_value(reach: int, wu: int, weights: Sequence[int] | None) -> int:
    if weights is None:
        return bin(reach).count("1") - 1
    total = 0
    while reach:
        low = reach & -reach
        total += weights[low.bit_length() - 1]
        reach ^= low
    return wu * (total - 1)


def _score_masks(n: int, adj: Sequence[int], weights: Sequence[int] | None) -> int:
    total = 0
    for u in range(n):
        wu = 1 if weights is None else weights[u]
        if wu == 0:
            continue
        reach = frontier = 1 << u
        while frontier:
            nf = 0
            f = frontier
            while f:
                low = f & -f
                nf |= adj[low.bit_length() - 1]
                f ^= low
            frontier = nf & ~reach
            reach |= frontier
        total += _row_value(reach, wu, weights)
    return total


def score_arcs(n: int, arcs: Sequence[tuple[int, int]], weights: Sequence[int] | None) -> int:
    adj = [0] * n
    for u, v in arcs:
        adj[u] |= 1 << v
    return _score_masks(n, adj, weights)


def brute_force_best(
    n: int,
    edges: Sequence[tuple[int, int]],
    arcs: Sequence[tuple[int, int]],
    weights: Sequence[int] | None,
) -> tuple[int, int]:
    """Best value and its direction code over all orientations.

    The code has bit ``m-1-i`` set when edge ``i`` is reversed, so integer
    order is lexicographic order of the direction vector with forward first.
    Gray-code traversal; ties resolve to the smallest code.
    """
    m = len(edges)
    cnt: dict[tuple[int, int], int] = {}
    adj = [0] * n

    def add(u, v, d):
        c = cnt.get((u, v), 0) + d
        cnt[(u, v)] = c
        if c:
            adj[u] |= 1 << v
        else:
            adj[u] &= ~(1 << v)

    for u, v in arcs:
        add(u, v, 1)
    for u, v in edges:
        add(u, v, 1)
    code = 0
    best_val = _score_masks(n, adj, weights)
    best_code = 0
    for step in range(1, 1 << m):
        # flip the bit that changes in the Gray code
        bit = (step & -step).bit_length() - 1
        ei = m - 1 - bit
        u, v = edges[ei]
        if code >> bit & 1:
            add(v, u, -1)
            add(u, v, 1)
        else:
            add(u, v, -1)
            add(v, u, 1)
        code ^= 1 << bit
        val = _score_masks(n, adj, weights)
        if val > best_val or (val == best_val and code < best_code):
            best_val, best_code = val, code
    return best_val, best_code

import os
import random
import sys

import pytest
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from reachorient import kernels
from reachorient.graph_core import MixedGraph


@st.composite
def mixed_graphs(draw, max_n=7, max_edges=7, max_arcs=5, min_n=1):
    n = draw(st.integers(min_n, max_n))
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    if n < 2:
        return MixedGraph(n)
    edges = draw(st.lists(pair, max_size=max_edges))
    arcs = draw(st.lists(pair, max_size=max_arcs))
    return MixedGraph(n, tuple(edges), tuple(arcs))


@st.composite
def digraphs(draw, max_n=7, max_arcs=12):
    return draw(mixed_graphs(max_n=max_n, max_edges=0, max_arcs=max_arcs))


def weights_for(n, hi=3):
    return st.lists(st.integers(0, hi), min_size=n, max_size=n)


def random_tree(rng: random.Random, n: int) -> list[tuple[int, int]]:
    edges = []
    for v in range(1, n):
        edges.append((rng.randrange(v), v))
    perm = list(range(n))
    rng.shuffle(perm)
    return [(perm[u], perm[v]) for u, v in edges]


@pytest.fixture(params=kernels.available())
def backend(request):
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(None)

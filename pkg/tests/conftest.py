import itertools
import random

import pytest
from hypothesis import strategies as st

from kdsp.graph import Graph, Request
from kdsp.layering import build_shortest_graph


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_instance():
    """Centre 0, leaves 1..4; requests 1->2 and 3->4 both need the centre."""
    g = Graph.from_edges(5, [(0, v) for v in range(1, 5)])
    sg = build_shortest_graph(g, [1, 3])
    return sg, [Request(1, 2, 0), Request(3, 4, 1)]


def random_graph(rng, n, p):
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def colour_paths(sg, colour, s, t):
    """Every colour path from s to t, by plain DFS over the levels."""
    row = sg.levels[colour]
    out = []

    def walk(path):
        u = path[-1]
        if u == t:
            out.append(tuple(path))
            return
        for w in sg.graph.adjacency[u]:
            if row[w] is not None and row[u] is not None and row[w] == row[u] + 1:
                walk(path + [w])

    if row[s] is not None:
        walk([s])
    return out


@st.composite
def graphs(draw, min_n=1, max_n=9):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@st.composite
def shortest_graphs(draw, max_n=9, max_k=3):
    g = draw(graphs(min_n=1, max_n=max_n))
    k = draw(st.integers(1, max_k))
    sources = draw(st.lists(st.integers(0, g.n - 1), min_size=k, max_size=k))
    return build_shortest_graph(g, sources)


@pytest.fixture
def rng():
    return random.Random(20261016)

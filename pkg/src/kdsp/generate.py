"""Seeded random instance generators.

Every generator takes an explicit integer seed and draws from its own
``random.Random``; equal arguments give equal instances.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .graph import Digraph, Graph, Request, ShortestGraph
from .layering import bfs_levels, build_shortest_graph


@dataclass
class Instance:
    """What an instance file holds.

    Exactly one of ``graph`` (plain instance, pairs only) or ``sg`` (layered
    instance with coloured requests) or ``dag`` is set.
    """

    graph: Graph | None = None
    sg: ShortestGraph | None = None
    dag: Digraph | None = None
    requests: list = field(default_factory=list)
    names: dict[int, str] = field(default_factory=dict)

    @property
    def n(self) -> int:
        if self.sg is not None:
            return self.sg.n
        if self.dag is not None:
            return self.dag.n
        return self.graph.n

    @property
    def kind(self) -> str:
        if self.sg is not None:
            return "kdsp"
        if self.dag is not None:
            return "dag"
        return "plain"


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def random_dag(rng: random.Random, n: int, p: float) -> Digraph:
    perm = list(range(n))
    rng.shuffle(perm)
    arcs = [(perm[a], perm[b]) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    return Digraph(n, frozenset(arcs))


def gen_kdsp(n: int, k: int, l: int, seed: int, p: float = 0.4) -> Instance:
    """Layered instance: ``k`` BFS colours, ``l`` coloured requests with
    pairwise distinct terminals, each pair joined by at least one colour path."""
    if 2 * l > n or not 1 <= k <= n:
        raise ValueError("not enough vertices for distinct terminals")
    rng = random.Random(seed)
    while True:
        g = random_graph(rng, n, p)
        sources = rng.sample(range(n), k)
        sg = build_shortest_graph(g, sources)
        requests = _pick_requests(rng, sg, l)
        if requests is not None:
            return Instance(sg=sg, requests=requests)


def _pick_requests(rng: random.Random, sg: ShortestGraph, l: int) -> list[Request] | None:
    used: set[int] = set()
    out = []
    for _ in range(l):
        for _attempt in range(30):
            colour = rng.randrange(sg.k)
            free = [v for v in range(sg.n) if sg.level(colour, v) is not None and v not in used]
            if len(free) < 2:
                continue
            s, t = rng.sample(free, 2)
            if sg.level(colour, s) > sg.level(colour, t):
                s, t = t, s
            if sg.reaches(colour, s, t) and s != t:
                out.append(Request(s, t, colour))
                used.update((s, t))
                break
        else:
            return None
    return out


def gen_plain(n: int, l: int, seed: int, p: float = 0.4) -> Instance:
    """Plain graph with ``l`` connected pairs and distinct terminals."""
    if 2 * l > n:
        raise ValueError("not enough vertices for distinct terminals")
    rng = random.Random(seed)
    while True:
        g = random_graph(rng, n, p)
        ends = rng.sample(range(n), 2 * l)
        pairs = [(ends[2 * i], ends[2 * i + 1]) for i in range(l)]
        if all(t in bfs_levels(g, s) for s, t in pairs):
            return Instance(graph=g, requests=pairs)


def gen_dag(n: int, l: int, seed: int, p: float = 0.35) -> Instance:
    """Acyclic digraph with ``l`` terminal pairs, each joined by a directed path."""
    if 2 * l > n:
        raise ValueError("not enough vertices for distinct terminals")
    rng = random.Random(seed)
    while True:
        dag = random_dag(rng, n, p)
        desc = dag.descendants
        reachable = [(s, t) for s in range(n) for t in range(n) if s != t and desc[s] >> t & 1]
        if not reachable:
            continue
        pairs: list[tuple[int, int]] = []
        used: set[int] = set()
        for s, t in rng.sample(reachable, len(reachable)):
            if s not in used and t not in used:
                pairs.append((s, t))
                used.update((s, t))
                if len(pairs) == l:
                    return Instance(dag=dag, requests=pairs)

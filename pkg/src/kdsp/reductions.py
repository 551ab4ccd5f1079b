"""Instance transformations.

* ``split_terminals`` clones shared terminal vertices so every request has
  its own endpoints.
* ``to_kdsp`` packages a plain shortest-paths instance as a k-DSP instance.
* ``reduce_capprox`` expands the "length at most d + C" relaxation into a
  stream of k-DSP instances.
* ``dag_to_1dsp`` subdivides arcs of an acyclic digraph into a one-colour
  shortest graph.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import product
from typing import Iterator, Sequence, TypeVar, Union

from .bicolored import BiColouredComponent
from .errors import DisconnectedPair, PreconditionError
from .graph import Digraph, Edge, Graph, Request, ShortestGraph, norm_edge
from .layering import bfs_levels, build_shortest_graph

Pair = tuple[int, int]
G = TypeVar("G", Graph, ShortestGraph)


@dataclass(frozen=True)
class Split:
    """Result of ``split_terminals``; ``back[v]`` is the original id of ``v``."""

    graph: Union[Graph, ShortestGraph]
    requests: tuple
    back: tuple[int, ...]

    def map_path(self, path: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.back[v] for v in path)


def _lift_component(comp: BiColouredComponent, copies: Sequence[Sequence[int]]) -> BiColouredComponent:
    vertices = frozenset(c for v in comp.vertices for c in copies[v])
    edges = frozenset(
        norm_edge(a, b) for u, v in comp.edges for a in copies[u] for b in copies[v]
    )
    return replace(comp, vertices=vertices, edges=edges)


def split_terminals(g: G, requests: Sequence[Union[Request, Pair]]) -> Split:
    """Give every terminal role its own vertex.

    A vertex used as an endpoint by several roles keeps its id for the first
    role and gets a fresh clone (same neighbourhood, same levels, no edge to
    its siblings) for each further role.
    """
    base = g.graph if isinstance(g, ShortestGraph) else g
    n = base.n
    copies: list[list[int]] = [[v] for v in range(n)]
    back = list(range(n))
    seen: set[int] = set()
    remapped = []
    for req in requests:
        ends = []
        for v in ((req.s, req.t) if isinstance(req, Request) else req):
            if v in seen:
                clone = len(back)
                back.append(v)
                copies[v].append(clone)
                ends.append(clone)
            else:
                seen.add(v)
                ends.append(v)
        remapped.append(ends)

    if len(back) == n:
        return Split(g, tuple(requests), tuple(back))

    edges = [(a, b) for u, v in base.edges for a in copies[u] for b in copies[v]]
    graph = Graph.from_edges(len(back), edges)
    new_requests = []
    for req, (s, t) in zip(requests, remapped):
        if isinstance(req, Request):
            forbidden = tuple(_lift_component(c, copies) for c in req.forbidden)
            new_requests.append(Request(s, t, req.colour, forbidden))
        else:
            new_requests.append((s, t))
    if isinstance(g, ShortestGraph):
        levels = tuple(tuple(row[back[v]] for v in range(len(back))) for row in g.levels)
        return Split(ShortestGraph(graph, levels), tuple(new_requests), tuple(back))
    return Split(graph, tuple(new_requests), tuple(back))


def to_kdsp(g: Graph, pairs: Sequence[Pair]) -> tuple[ShortestGraph, list[Request]]:
    """Layer ``g`` by a BFS from each source; request ``i`` gets colour ``i``."""
    for s, t in pairs:
        if t not in bfs_levels(g, s):
            raise DisconnectedPair(s, t)
    sg = build_shortest_graph(g, [s for s, _ in pairs])
    return sg, [Request(s, t, i) for i, (s, t) in enumerate(pairs)]


@dataclass(frozen=True)
class RelaxedInstance:
    """One member of the slack-expansion stream.

    ``routes[i]`` lists the fixed detour edges of pair ``i`` in path order;
    ``pieces[i]`` gives, for each stretch between detours, the index of its
    sub-request or ``None`` when the stretch is a single fixed vertex.
    """

    sg: ShortestGraph
    requests: tuple[Request, ...]
    pairs: tuple[Pair, ...]
    routes: tuple[tuple[Edge, ...], ...]
    pieces: tuple[tuple[int | None, ...], ...]
    blocked: frozenset[int]

    def assemble(self, paths: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
        out = []
        for (s, _), route, pieces in zip(self.pairs, self.routes, self.pieces):
            walk = [s]
            for p, idx in enumerate(pieces):
                if idx is not None:
                    sub = tuple(paths[idx])
                    if sub[0] != walk[-1]:
                        raise PreconditionError("sub-request path does not continue the walk")
                    walk.extend(sub[1:])
                if p < len(route):
                    u, v = route[p]
                    if walk[-1] != u:
                        raise PreconditionError("detour edge does not continue the walk")
                    walk.append(v)
            out.append(tuple(walk))
        return out


def _routes(
    g: Graph, sg: ShortestGraph, colour: int, cur: int, target: int, budget: int
) -> Iterator[list[Edge]]:
    """Detour-edge sequences from ``cur`` to ``target`` costing at most ``budget``.

    A detour is an edge not climbing the colour's BFS; it costs one plus the
    number of levels it descends.  Between detours the walk must climb.
    """
    row = sg.levels[colour]
    if sg.reaches(colour, cur, target):
        yield []
    if budget == 0:
        return
    for a, b in g.sorted_edges():
        for u, v in ((a, b), (b, a)):
            if row[u] is None or row[v] is None or row[v] == row[u] + 1:
                continue
            cost = 1 + row[u] - row[v]
            if cost > budget or not sg.reaches(colour, cur, u):
                continue
            for rest in _routes(g, sg, colour, v, target, budget - cost):
                yield [(u, v)] + rest


def _route_anchors(s: int, t: int, route: Sequence[Edge]) -> list[tuple[int, int]] | None:
    """Stretches (start, end) between detours, or ``None`` if the walk would
    revisit a vertex."""
    points = [s]
    for u, v in route:
        points.extend((u, v))
    points.append(t)
    stretches = [(points[p], points[p + 1]) for p in range(0, len(points), 2)]
    walk = []
    for a, b in stretches:
        walk.append(a)
        if b != a:
            walk.append(b)
    if len(set(walk)) != len(walk):
        return None
    return stretches


def reduce_capprox(g: Graph, pairs: Sequence[Pair], slack: int) -> Iterator[RelaxedInstance]:
    """Expand the length-at-most-``d + slack`` problem into k-DSP instances.

    Every pair picks at most ``slack`` worth of detour edges (with their
    direction and position along the path); the stretches between them
    become sub-requests of the pair's colour.  Detour endpoints are fixed,
    single-vertex stretches are removed from the graph.  The original
    instance is feasible iff some yielded instance is.
    """
    if slack < 0:
        raise PreconditionError("slack must be non-negative")
    terminals = [v for p in pairs for v in p]
    if len(set(terminals)) != len(terminals):
        raise PreconditionError("terminals must be pairwise distinct; split them first")
    sg, _ = to_kdsp(g, pairs)
    per_pair = []
    for i, (s, t) in enumerate(pairs):
        options = []
        for route in _routes(g, sg, i, s, t, slack):
            stretches = _route_anchors(s, t, route)
            if stretches is not None:
                options.append((tuple(route), stretches))
        per_pair.append(options)

    for combo in product(*per_pair):
        anchors: list[int] = []
        for (route, stretches) in combo:
            anchors.extend({v for ab in stretches for v in ab})
        if len(set(anchors)) != len(anchors):
            continue
        requests: list[Request] = []
        pieces = []
        blocked: set[int] = set()
        for i, (route, stretches) in enumerate(combo):
            row = []
            for a, b in stretches:
                if a == b:
                    blocked.add(a)
                    row.append(None)
                else:
                    row.append(len(requests))
                    requests.append(Request(a, b, i))
            pieces.append(tuple(row))
        yield RelaxedInstance(
            _isolate(sg, blocked),
            tuple(requests),
            tuple(pairs),
            tuple(route for route, _ in combo),
            tuple(pieces),
            frozenset(blocked),
        )


def _isolate(sg: ShortestGraph, blocked: set[int]) -> ShortestGraph:
    if not blocked:
        return sg
    edges = [e for e in sg.graph.edges if e[0] not in blocked and e[1] not in blocked]
    levels = tuple(
        tuple(None if v in blocked else lv for v, lv in enumerate(row)) for row in sg.levels
    )
    return ShortestGraph(Graph.from_edges(sg.n, edges), levels)


@dataclass(frozen=True)
class DagReduction:
    """Subdivided digraph as a one-colour shortest graph.

    Original vertices keep their ids; subdivision vertices follow.  The
    single colour levels every vertex by its topological position.
    """

    dag: Digraph
    graph: Graph
    sg: ShortestGraph
    pairs: tuple[Pair, ...]
    chains: dict[Edge, tuple[int, ...]]

    @property
    def requests(self) -> list[Request]:
        return [Request(s, t, 0) for s, t in self.pairs]

    def pull_back(self, path: Sequence[int]) -> tuple[int, ...]:
        return tuple(v for v in path if v < self.dag.n)


def dag_to_1dsp(dag: Digraph, pairs: Sequence[Pair]) -> DagReduction:
    """Subdivide each arc ``(v_i, v_j)`` of the topological order ``j - i - 1`` times."""
    order = dag.topological_order()
    pos = {v: p for p, v in enumerate(order)}
    level: list[int] = [pos[v] for v in range(dag.n)]
    edges: list[Edge] = []
    chains: dict[Edge, tuple[int, ...]] = {}
    for u, v in sorted(dag.arcs):
        chain = [u]
        for step in range(1, pos[v] - pos[u]):
            level.append(pos[u] + step)
            chain.append(len(level) - 1)
        chain.append(v)
        edges.extend(zip(chain, chain[1:]))
        chains[(u, v)] = tuple(chain)
    graph = Graph.from_edges(len(level), edges)
    sg = ShortestGraph(graph, (tuple(level),))
    return DagReduction(dag, graph, sg, tuple(tuple(p) for p in pairs), chains)

"""Brute-force ground truth for tiny instances.

Nothing here uses the colour machinery of the solver: distances come from a
private BFS and candidate paths from plain depth-first enumeration.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

from .errors import DisconnectedPair, EnumerationCapExceeded, PreconditionError
from .graph import Digraph, Graph, Request, ShortestGraph

DEFAULT_CAP = 2_000_000

Pair = tuple[int, int]
AnyRequest = Union[Request, Pair]


def _distances(g: Graph, source: int) -> list[int | None]:
    dist: list[int | None] = [None] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] is None:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def distance(g: Graph, s: int, t: int) -> int | None:
    return _distances(g, s)[t]


def enumerate_shortest_paths(g: Graph, s: int, t: int) -> Iterator[tuple[int, ...]]:
    """Yield every shortest ``s``-``t`` path exactly once."""
    from_t = _distances(g, t)
    if from_t[s] is None:
        raise DisconnectedPair(s, t)

    def walk(path: list[int]) -> Iterator[tuple[int, ...]]:
        u = path[-1]
        if u == t:
            yield tuple(path)
            return
        for w in g.adjacency[u]:
            if from_t[w] == from_t[u] - 1:
                path.append(w)
                yield from walk(path)
                path.pop()

    yield from walk([s])


def enumerate_bounded_paths(g: Graph, s: int, t: int, max_len: int) -> Iterator[tuple[int, ...]]:
    """Yield every simple ``s``-``t`` path with at most ``max_len`` edges."""
    from_t = _distances(g, t)
    if from_t[s] is None:
        raise DisconnectedPair(s, t)
    on_path = [False] * g.n

    def walk(path: list[int]) -> Iterator[tuple[int, ...]]:
        u = path[-1]
        if u == t:
            yield tuple(path)
            return
        used = len(path) - 1
        for w in g.adjacency[u]:
            if on_path[w] or from_t[w] is None or used + 1 + from_t[w] > max_len:
                continue
            on_path[w] = True
            path.append(w)
            yield from walk(path)
            path.pop()
            on_path[w] = False

    on_path[s] = True
    yield from walk([s])


def _endpoints(req: AnyRequest) -> Pair:
    if isinstance(req, Request):
        return req.s, req.t
    s, t = req
    return s, t


def _base_graph(g: Graph | ShortestGraph) -> Graph:
    return g.graph if isinstance(g, ShortestGraph) else g


def _candidates(g: Graph | ShortestGraph, req: AnyRequest, slack: int) -> list[tuple[int, ...]]:
    base = _base_graph(g)
    s, t = _endpoints(req)
    if isinstance(g, ShortestGraph) and isinstance(req, Request):
        # a colour path exists iff the graph distance equals the level gap
        ls, lt = g.level(req.colour, s), g.level(req.colour, t)
        if ls is None or lt is None:
            return []
        d = distance(base, s, t)
        if d is None or lt - ls != d:
            return []
        return list(enumerate_shortest_paths(base, s, t))
    d = distance(base, s, t)
    if d is None:
        raise DisconnectedPair(s, t)
    if slack == 0:
        return list(enumerate_shortest_paths(base, s, t))
    return list(enumerate_bounded_paths(base, s, t, d + slack))


def _clash(p: Sequence[int], q: Sequence[int]) -> int | None:
    """A vertex shared by ``p`` and ``q`` that is not a terminal of both."""
    ends_p, ends_q = {p[0], p[-1]}, {q[0], q[-1]}
    for v in set(p) & set(q):
        if not (v in ends_p and v in ends_q):
            return v
    return None


def oracle_solve(
    g: Graph | ShortestGraph,
    requests: Sequence[AnyRequest],
    slack: int = 0,
    cap: int = DEFAULT_CAP,
) -> list[tuple[int, ...]] | None:
    """Exact decision by backtracking over candidate path tuples.

    On a plain graph, request ``i`` may use any simple path of length at most
    ``d(s_i, t_i) + slack``.  On a shortest graph with coloured requests the
    candidates are the colour paths (found as shortest paths whose length
    matches the level gap); ``slack`` must then be 0.
    """
    if slack < 0:
        raise PreconditionError("slack must be non-negative")
    if isinstance(g, ShortestGraph) and slack:
        raise PreconditionError("coloured instances take no slack")
    options = [_candidates(g, r, slack) for r in requests]
    visited = 0
    order = sorted(range(len(requests)), key=lambda i: len(options[i]))
    chosen: dict[int, tuple[int, ...]] = {}

    def place(depth: int) -> bool:
        nonlocal visited
        if depth == len(order):
            return True
        i = order[depth]
        for path in options[i]:
            visited += 1
            if visited > cap:
                raise EnumerationCapExceeded(cap)
            if any(_clash(path, other) is not None for other in chosen.values()):
                continue
            chosen[i] = path
            if place(depth + 1):
                return True
            del chosen[i]
        return False

    if not place(0):
        return None
    return [chosen[i] for i in range(len(requests))]


@dataclass
class CheckReport:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def check_solution(
    g: Graph | ShortestGraph,
    requests: Sequence[AnyRequest],
    paths: Sequence[Sequence[int]],
    slack: int = 0,
) -> CheckReport:
    """Validate a claimed solution and report every problem found."""
    base = _base_graph(g)
    problems = []
    if len(paths) != len(requests):
        return CheckReport(False, [f"{len(paths)} paths for {len(requests)} requests"])
    paths = [tuple(p) for p in paths]
    for i, (req, path) in enumerate(zip(requests, paths)):
        s, t = _endpoints(req)
        if not path or path[0] != s or path[-1] != t:
            problems.append(f"path {i} does not join {s} to {t}")
            continue
        if len(set(path)) != len(path):
            problems.append(f"path {i} repeats a vertex")
        missing = [(a, b) for a, b in zip(path, path[1:]) if not base.has_edge(a, b)]
        if missing:
            problems.append(f"path {i} uses non-edges {missing}")
        d = distance(base, s, t)
        if d is None or len(path) - 1 > d + slack:
            problems.append(f"path {i} has length {len(path) - 1}, allowed {d} + {slack}")
        if isinstance(g, ShortestGraph) and isinstance(req, Request):
            row = g.levels[req.colour]
            if any(row[v] is None for v in path) or any(
                row[b] != row[a] + 1 for a, b in zip(path, path[1:])
            ):
                problems.append(f"path {i} is not a colour-{req.colour} path")
    for i in range(len(paths)):
        for j in range(i + 1, len(paths)):
            v = _clash(paths[i], paths[j])
            if v is not None:
                problems.append(f"paths {i} and {j} share vertex {v}")
    return CheckReport(not problems, problems)


def enumerate_dag_paths(dag: Digraph, s: int, t: int) -> Iterator[tuple[int, ...]]:
    def walk(path: list[int]) -> Iterator[tuple[int, ...]]:
        u = path[-1]
        if u == t:
            yield tuple(path)
            return
        for w in dag.out[u]:
            path.append(w)
            yield from walk(path)
            path.pop()

    yield from walk([s])


def oracle_dag_solve(
    dag: Digraph, pairs: Sequence[Pair], cap: int = DEFAULT_CAP
) -> list[tuple[int, ...]] | None:
    """Vertex-disjoint directed paths by exhaustive backtracking."""
    dag.topological_order()
    options = [list(enumerate_dag_paths(dag, s, t)) for s, t in pairs]
    visited = 0
    chosen: list[tuple[int, ...]] = []
    used: set[int] = set()

    def place(i: int) -> bool:
        nonlocal visited
        if i == len(pairs):
            return True
        for path in options[i]:
            visited += 1
            if visited > cap:
                raise EnumerationCapExceeded(cap)
            if used.intersection(path):
                continue
            chosen.append(path)
            used.update(path)
            if place(i + 1):
                return True
            chosen.pop()
            used.difference_update(path)
        return False

    return list(chosen) if place(0) else None

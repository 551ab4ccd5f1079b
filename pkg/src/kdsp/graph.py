"""Core data model: undirected graphs, layered colourings, requests and paths.

A shortest graph carries, for every colour, a level for each vertex (or no
level when the vertex is outside that colour's layering).  An edge has colour
``c`` when its endpoints sit on consecutive colour-``c`` levels; colour paths
climb exactly one level per edge.  Reachability along colour paths is stored
as Python ints used as bitsets, which keeps the product search cheap.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .errors import CyclicGraphError, PreconditionError

if TYPE_CHECKING:
    from .bicolored import BiColouredComponent

Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def bits(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        edges = frozenset(norm_edge(u, v) for u, v in self.edges)
        for u, v in edges:
            if u == v:
                raise PreconditionError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise PreconditionError(f"edge {(u, v)} out of range for n={self.n}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> Graph:
        return cls(n, frozenset((u, v) for u, v in edges))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


@dataclass(frozen=True)
class Digraph:
    """Directed graph on ``0..n-1``; used for the acyclic disjoint-paths side."""

    n: int
    arcs: frozenset[Edge]

    def __post_init__(self):
        arcs = frozenset((u, v) for u, v in self.arcs)
        for u, v in arcs:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise PreconditionError(f"bad arc {(u, v)} for n={self.n}")
        object.__setattr__(self, "arcs", arcs)

    @cached_property
    def out(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            adj[u].append(v)
        return tuple(tuple(sorted(a)) for a in adj)

    def topological_order(self) -> list[int]:
        """Kahn's algorithm, smallest ready vertex first (deterministic)."""
        indeg = [0] * self.n
        for _, v in self.arcs:
            indeg[v] += 1
        ready = [v for v in range(self.n) if indeg[v] == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            u = heapq.heappop(ready)
            order.append(u)
            for v in self.out[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(ready, v)
        if len(order) != self.n:
            raise CyclicGraphError("digraph contains a cycle")
        return order

    @cached_property
    def descendants(self) -> tuple[int, ...]:
        """Bitset of vertices reachable from each vertex, itself included."""
        desc = [0] * self.n
        for u in reversed(self.topological_order()):
            mask = 1 << u
            for v in self.out[u]:
                mask |= desc[v]
            desc[u] = mask
        return tuple(desc)


class Ordering(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class ShortestGraph:
    """A graph with ``k`` layerings.

    ``levels[c][v]`` is the colour-``c`` level of ``v`` or ``None``.
    """

    graph: Graph
    levels: tuple[tuple[int | None, ...], ...]

    def __post_init__(self):
        levels = tuple(tuple(row) for row in self.levels)
        for row in levels:
            if len(row) != self.graph.n:
                raise PreconditionError("level row length differs from vertex count")
        object.__setattr__(self, "levels", levels)

    @classmethod
    def from_level_maps(cls, graph: Graph, maps: Sequence[Mapping[int, int]]) -> ShortestGraph:
        rows = tuple(tuple(m.get(v) for v in range(graph.n)) for m in maps)
        return cls(graph, rows)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def k(self) -> int:
        return len(self.levels)

    def level(self, colour: int, v: int) -> int | None:
        return self.levels[colour][v]

    def is_coloured_edge(self, colour: int, u: int, v: int) -> bool:
        """Whether ``{u, v}`` is an edge climbing from ``u`` to ``v`` in ``colour``."""
        lu, lv = self.levels[colour][u], self.levels[colour][v]
        return lu is not None and lv is not None and lv == lu + 1 and self.graph.has_edge(u, v)

    def edge_colours(self, u: int, v: int) -> list[int]:
        out = []
        for c, row in enumerate(self.levels):
            if row[u] is not None and row[v] is not None and abs(row[u] - row[v]) == 1:
                out.append(c)
        return out

    @cached_property
    def _successors(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        adj = self.graph.adjacency
        table = []
        for row in self.levels:
            succ = []
            for v in range(self.n):
                lv = row[v]
                if lv is None:
                    succ.append(())
                else:
                    succ.append(tuple(w for w in adj[v] if row[w] == lv + 1))
            table.append(tuple(succ))
        return tuple(table)

    def successors(self, colour: int) -> tuple[tuple[int, ...], ...]:
        """Out-neighbours of every vertex in the colour-``colour`` orientation."""
        return self._successors[colour]

    def order_by_level(self, colour: int, reverse: bool = False) -> list[int]:
        row = self.levels[colour]
        vs = [v for v in range(self.n) if row[v] is not None]
        vs.sort(key=lambda v: (row[v], v), reverse=reverse)
        return vs

    def descendants(self, colour: int, avoid: int = 0) -> tuple[int, ...]:
        """Colour-path reachability, as one bitset per vertex.

        ``avoid`` is a bitset of vertices no path may touch (endpoints
        included); avoided and unlevelled vertices reach nothing.
        """
        if avoid == 0:
            return self._plain_descendants[colour]
        return self._compute_descendants(colour, avoid)

    @cached_property
    def _plain_descendants(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self._compute_descendants(c, 0) for c in range(self.k))

    def _compute_descendants(self, colour: int, avoid: int) -> tuple[int, ...]:
        succ = self.successors(colour)
        desc = [0] * self.n
        for v in self.order_by_level(colour, reverse=True):
            if avoid >> v & 1:
                continue
            mask = 1 << v
            for w in succ[v]:
                mask |= desc[w]
            desc[v] = mask
        return tuple(desc)

    def reaches(self, colour: int, u: int, v: int) -> bool:
        return bool(self._plain_descendants[colour][u] >> v & 1)

    def ancestors_of(self, colour: int, target: int, avoid: int = 0) -> int:
        """Bitset of vertices with a colour path to ``target``."""
        desc = self.descendants(colour, avoid)
        return bits(v for v in range(self.n) if desc[v] >> target & 1)


@dataclass(frozen=True)
class Request:
    """A terminal pair to be joined by a path of ``colour``.

    ``forbidden`` lists bi-coloured components whose vertices the path must
    avoid; plain instances leave it empty.
    """

    s: int
    t: int
    colour: int
    forbidden: tuple[BiColouredComponent, ...] = ()


def check_request(sg: ShortestGraph, req: Request) -> None:
    if not 0 <= req.colour < sg.k:
        raise PreconditionError(f"colour {req.colour} outside [0, {sg.k})")
    for v in (req.s, req.t):
        if not 0 <= v < sg.n:
            raise PreconditionError(f"terminal {v} out of range")
        if sg.level(req.colour, v) is None:
            raise PreconditionError(f"terminal {v} has no colour-{req.colour} level")
    if req.s == req.t:
        raise PreconditionError(f"request with identical terminals {req.s}")
    for comp in req.forbidden:
        if req.colour not in (comp.colour_a, comp.colour_b):
            raise PreconditionError(
                f"forbidden component of colours {comp.colour_a},{comp.colour_b} "
                f"does not involve colour {req.colour}"
            )


@dataclass(frozen=True)
class ColouredPath:
    colour: int
    vertices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if not self.vertices:
            raise PreconditionError("empty path")

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def target(self) -> int:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class PathPartition:
    whole: ColouredPath
    parts: tuple[ColouredPath, ...]


@dataclass(frozen=True)
class Violation:
    edge: Edge
    clause: str
    colour: int | None = None


def validate_shortest_graph(sg: ShortestGraph) -> list[Violation]:
    """Every edge must climb one level of some colour and skip none.

    Returns one ``Violation`` per failed (edge, clause); empty when valid.
    """
    report = []
    for u, v in sg.graph.sorted_edges():
        coloured = False
        for c, row in enumerate(sg.levels):
            lu, lv = row[u], row[v]
            if lu is None or lv is None:
                continue
            gap = abs(lu - lv)
            if gap > 1:
                report.append(Violation((u, v), "skips-level", c))
            elif gap == 1:
                coloured = True
        if not coloured:
            report.append(Violation((u, v), "uncoloured"))
    return report


def compare_in_colour(sg: ShortestGraph, colour: int, u: int, v: int) -> Ordering:
    lu, lv = sg.level(colour, u), sg.level(colour, v)
    if lu is None or lv is None:
        return Ordering.INCOMPARABLE
    if lu < lv:
        return Ordering.LESS
    if lu > lv:
        return Ordering.GREATER
    return Ordering.EQUAL


def is_colour_path(sg: ShortestGraph, colour: int, vertices: Sequence[int]) -> bool:
    if not vertices or not 0 <= colour < sg.k:
        return False
    row = sg.levels[colour]
    if any(not 0 <= v < sg.n or row[v] is None for v in vertices):
        return False
    if len(set(vertices)) != len(vertices):
        return False
    for a, b in zip(vertices, vertices[1:]):
        if row[b] != row[a] + 1 or not sg.graph.has_edge(a, b):
            return False
    return True


def orient(sg: ShortestGraph, colour: int, vertices: Sequence[int]) -> tuple[int, ...]:
    """Return ``vertices`` ordered from low to high colour level."""
    vs = tuple(vertices)
    row = sg.levels[colour]
    if len(vs) > 1 and row[vs[0]] is not None and row[vs[-1]] is not None and row[vs[0]] > row[vs[-1]]:
        return vs[::-1]
    return vs


def concatenate(first: Sequence[int], second: Sequence[int]) -> tuple[int, ...]:
    if not first or not second or first[-1] != second[0]:
        raise PreconditionError("paths do not share the joining endpoint")
    return tuple(first) + tuple(second[1:])


def is_path_partition(sg: ShortestGraph, partition: PathPartition) -> bool:
    whole = partition.whole.vertices
    if not partition.parts:
        return False
    joined: tuple[int, ...] = partition.parts[0].vertices
    for part in partition.parts[1:]:
        if part.vertices[0] != joined[-1]:
            return False
        joined = joined + part.vertices[1:]
    return joined == whole and len(set(whole)) == len(whole)


def partition_intersection(whole: Sequence[int], *partitions: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Common refinement of several path partitions of ``whole``.

    Cuts the path at every vertex that is an endpoint of some part.
    """
    position = {v: i for i, v in enumerate(whole)}
    cuts = {0, len(whole) - 1}
    for parts in partitions:
        for part in parts:
            cuts.add(position[part[0]])
            cuts.add(position[part[-1]])
    ordered = sorted(cuts)
    if len(ordered) == 1:
        return [tuple(whole)]
    return [tuple(whole[a : b + 1]) for a, b in zip(ordered, ordered[1:])]


def topological_success(sg: ShortestGraph, colour: int) -> bool:
    """Whether the colour-oriented edges form an acyclic digraph."""
    arcs = frozenset((u, w) for u, ws in enumerate(sg.successors(colour)) for w in ws)
    try:
        Digraph(sg.n, arcs).topological_order()
    except CyclicGraphError:
        return False
    return True

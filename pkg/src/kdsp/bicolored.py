"""Bi-coloured components and the conflict / sees / blind predicates.

An edge carrying colours ``a`` and ``b`` is a *plus* edge when both colours
orient it the same way and a *minus* edge otherwise.  Components of the plus
and minus subgraphs are computed separately.  Inside a plus component the
colour-``b`` level equals the colour-``a`` level plus a constant offset; in a
minus component their sum is constant.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations

from .errors import NonContiguousIntersection, PreconditionError
from .graph import ColouredPath, Edge, ShortestGraph, bits, is_colour_path


class Sign(enum.Enum):
    PLUS = "+"
    MINUS = "-"


@dataclass(frozen=True)
class BiColouredComponent:
    colour_a: int
    colour_b: int
    sign: Sign
    vertices: frozenset[int]
    edges: frozenset[Edge]
    offset: int

    def other(self, colour: int) -> int:
        if colour == self.colour_a:
            return self.colour_b
        if colour == self.colour_b:
            return self.colour_a
        raise PreconditionError(f"colour {colour} not in component")

    def has_colour(self, colour: int) -> bool:
        return colour in (self.colour_a, self.colour_b)

    def key(self) -> tuple:
        return (self.colour_a, self.colour_b, self.sign.value, min(self.vertices))

    def __repr__(self) -> str:
        return (
            f"BiColouredComponent({self.colour_a},{self.colour_b}{self.sign.value}, "
            f"vertices={sorted(self.vertices)}, offset={self.offset})"
        )


@dataclass(frozen=True)
class Conflict:
    component: BiColouredComponent
    s1: int
    t1: int
    s2: int
    t2: int


def _find(parent: dict[int, int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def components(sg: ShortestGraph, i: int, j: int) -> list[BiColouredComponent]:
    """All bi-coloured components of colours ``i`` and ``j``.

    Sorted by sign (plus first) then smallest vertex.
    """
    if i == j or not (0 <= i < sg.k and 0 <= j < sg.k):
        raise PreconditionError(f"need two distinct colours in [0, {sg.k}), got {i}, {j}")
    a, b = min(i, j), max(i, j)
    la, lb = sg.levels[a], sg.levels[b]
    by_sign: dict[Sign, list[Edge]] = {Sign.PLUS: [], Sign.MINUS: []}
    for u, v in sg.graph.sorted_edges():
        if None in (la[u], la[v], lb[u], lb[v]):
            continue
        da, db = la[v] - la[u], lb[v] - lb[u]
        if abs(da) != 1 or abs(db) != 1:
            continue
        by_sign[Sign.PLUS if da == db else Sign.MINUS].append((u, v))

    out = []
    for sign in (Sign.PLUS, Sign.MINUS):
        edges = by_sign[sign]
        parent: dict[int, int] = {}
        for u, v in edges:
            parent.setdefault(u, u)
            parent.setdefault(v, v)
            ru, rv = _find(parent, u), _find(parent, v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        groups: dict[int, tuple[set[int], set[Edge]]] = {}
        for u, v in edges:
            vs, es = groups.setdefault(_find(parent, u), (set(), set()))
            vs.update((u, v))
            es.add((u, v))
        comps = []
        for vs, es in groups.values():
            x = min(vs)
            offset = lb[x] - la[x] if sign is Sign.PLUS else lb[x] + la[x]
            comps.append(BiColouredComponent(a, b, sign, frozenset(vs), frozenset(es), offset))
        comps.sort(key=lambda c: min(c.vertices))
        out.extend(comps)
    return out


def all_components(sg: ShortestGraph) -> list[BiColouredComponent]:
    out = []
    for i, j in combinations(range(sg.k), 2):
        out.extend(components(sg, i, j))
    return out


def offset_violations(sg: ShortestGraph, comp: BiColouredComponent) -> list[int]:
    """Vertices of ``comp`` at which the level offset equation fails."""
    la, lb = sg.levels[comp.colour_a], sg.levels[comp.colour_b]
    bad = []
    for x in sorted(comp.vertices):
        expected = la[x] + comp.offset if comp.sign is Sign.PLUS else comp.offset - la[x]
        if lb[x] != expected:
            bad.append(x)
    return bad


def path_component_intersection(
    sg: ShortestGraph, path: ColouredPath, comp: BiColouredComponent
) -> range:
    """Positions of ``path`` whose vertex lies in ``comp``, as one range.

    Raises ``NonContiguousIntersection`` when the positions are not
    consecutive, which only happens on corrupted inputs.
    """
    if not comp.has_colour(path.colour):
        raise PreconditionError("component does not carry the path's colour")
    hits = [p for p, v in enumerate(path.vertices) if v in comp.vertices]
    if not hits:
        return range(0)
    if hits[-1] - hits[0] + 1 != len(hits):
        raise NonContiguousIntersection(
            f"path {path.vertices} meets component at positions {hits}"
        )
    return range(hits[0], hits[-1] + 1)


def _component_descendants(sg: ShortestGraph, colour: int, comp: BiColouredComponent) -> list[int]:
    row = sg.levels[colour]
    succ: dict[int, list[int]] = {v: [] for v in comp.vertices}
    for u, v in comp.edges:
        if row[v] == row[u] + 1:
            succ[u].append(v)
        else:
            succ[v].append(u)
    desc = [0] * sg.n
    for v in sorted(comp.vertices, key=lambda x: row[x], reverse=True):
        mask = 1 << v
        for w in succ[v]:
            mask |= desc[w]
        desc[v] = mask
    return desc


def conflict_witnesses(
    sg: ShortestGraph,
    ci: int,
    cj: int,
    s1: int,
    t1: int,
    s2: int,
    t2: int,
    within: BiColouredComponent | None = None,
) -> int:
    """Bitset of vertices shared by some colour-``ci`` (s1,t1)-path and some
    colour-``cj`` (s2,t2)-path, the four endpoints excluded.

    With ``within`` the paths are confined to that component's own edges;
    otherwise they range over the full colour orientations.
    """
    if within is None:
        di, dj = sg.descendants(ci), sg.descendants(cj)
    else:
        di = _component_descendants(sg, ci, within)
        dj = _component_descendants(sg, cj, within)
    through_i = di[s1] & bits(v for v in range(sg.n) if di[v] >> t1 & 1)
    through_j = dj[s2] & bits(v for v in range(sg.n) if dj[v] >> t2 & 1)
    return through_i & through_j & ~bits((s1, t1, s2, t2))


def _conflict_on(
    sg: ShortestGraph, p_i: ColouredPath, p_j: ColouredPath, comp: BiColouredComponent, within: bool
) -> Conflict | None:
    ri = path_component_intersection(sg, p_i, comp)
    rj = path_component_intersection(sg, p_j, comp)
    if not ri or not rj:
        return None
    s1, t1 = p_i.vertices[ri.start], p_i.vertices[ri[-1]]
    s2, t2 = p_j.vertices[rj.start], p_j.vertices[rj[-1]]
    found = conflict_witnesses(
        sg, p_i.colour, p_j.colour, s1, t1, s2, t2, within=comp if within else None
    )
    if not within:
        found &= bits(comp.vertices)
    return Conflict(comp, s1, t1, s2, t2) if found else None


def conflicting_components(
    sg: ShortestGraph, p_i: ColouredPath, p_j: ColouredPath, within_component: bool = False
) -> list[Conflict]:
    """Every bi-coloured component on which the two paths conflict."""
    if p_i.colour == p_j.colour:
        return []
    out = []
    for comp in components(sg, p_i.colour, p_j.colour):
        hit = _conflict_on(sg, p_i, p_j, comp, within_component)
        if hit is not None:
            out.append(hit)
    return out


def find_conflicting_component(sg: ShortestGraph, p_i: ColouredPath, p_j: ColouredPath) -> Conflict | None:
    found = conflicting_components(sg, p_i, p_j)
    return found[0] if found else None


def _internal(path: ColouredPath) -> tuple[int, ...]:
    return path.vertices[1:-1]


def _check_pair(sg: ShortestGraph, p_i: ColouredPath, p_j: ColouredPath) -> None:
    for p in (p_i, p_j):
        if not is_colour_path(sg, p.colour, p.vertices):
            raise PreconditionError(f"{p.vertices} is not a colour-{p.colour} path")
    if set(_internal(p_i)) & set(p_j.vertices) or set(_internal(p_j)) & set(p_i.vertices):
        raise PreconditionError("paths are not internally vertex-disjoint")


def sees(sg: ShortestGraph, p_i: ColouredPath, p_j: ColouredPath) -> bool:
    """Whether some colour path from an internal vertex of ``p_i`` to its
    target passes through an internal vertex of ``p_j``."""
    _check_pair(sg, p_i, p_j)
    inner_j = bits(_internal(p_j))
    if not inner_j or len(p_i) <= 2:
        return False
    desc = sg.descendants(p_i.colour)
    target = p_i.target
    to_target = bits(v for v in range(sg.n) if desc[v] >> target & 1)
    reach = 0
    for x in _internal(p_i):
        reach |= desc[x]
    return bool(reach & to_target & inner_j)


def is_blind(sg: ShortestGraph, p_i: ColouredPath, p_j: ColouredPath) -> bool:
    return not sees(sg, p_i, p_j) and not sees(sg, p_j, p_i)


def component_containing(
    sg: ShortestGraph, colour_a: int, colour_b: int, sign: Sign, vertex: int
) -> BiColouredComponent:
    for comp in components(sg, colour_a, colour_b):
        if comp.sign is sign and vertex in comp.vertices:
            return comp
    raise PreconditionError(
        f"no {sign.value} component of colours {colour_a},{colour_b} contains {vertex}"
    )


"""Blind-case solver: reachability in the product digraph over l-tuples.

A state holds one current vertex per request.  A move advances a single
coordinate ``i`` along one colour edge ``x_i -> y_i`` and is allowed when

1. ``y_i`` can still reach ``t_i`` by a colour path avoiding the request's
   forbidden components,
2. ``y_i`` is nobody else's current vertex, and
3. ``x_i`` lies on no remaining avoiding path of any other request
   (``x_j -> x_i -> t_j``), unless ``x_i`` belongs to one of that request's
   forbidden components.

Search is a forward BFS from the start tuple with states generated on the
fly.  Reaching the target tuple yields pairwise-disjoint paths.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .bicolored import BiColouredComponent
from .errors import PreconditionError, StateBudgetExceeded
from .graph import ColouredPath, Digraph, Request, ShortestGraph, bits, check_request

log = logging.getLogger(__name__)

DEFAULT_STATE_BUDGET = 2_000_000


@dataclass(frozen=True)
class ReachIndex:
    """Colour-path reachability avoiding a vertex set.

    ``rows[u]`` is the bitset of vertices reachable from ``u``; avoided and
    unlevelled vertices have an empty row.
    """

    colour: int
    forbidden: frozenset[int]
    rows: tuple[int, ...]

    def reach(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def into(self, target: int) -> int:
        """Bitset of vertices with an avoiding path to ``target``."""
        mask = 0
        for u, row in enumerate(self.rows):
            if row >> target & 1:
                mask |= 1 << u
        return mask


def forbidden_vertices(comps: Sequence[BiColouredComponent]) -> frozenset[int]:
    out: set[int] = set()
    for comp in comps:
        out |= comp.vertices
    return frozenset(out)


def build_reach_index(
    sg: ShortestGraph, colour: int, forbidden_components: Sequence[BiColouredComponent] = ()
) -> ReachIndex:
    for comp in forbidden_components:
        if not comp.has_colour(colour):
            raise PreconditionError(f"forbidden component does not involve colour {colour}")
    avoid = forbidden_vertices(forbidden_components)
    return ReachIndex(colour, avoid, sg.descendants(colour, bits(avoid)))


def _product_search(
    starts: tuple[int, ...],
    targets: tuple[int, ...],
    succ: Sequence[Sequence[Sequence[int]]],
    future: Sequence[Sequence[int]],
    escape: Sequence[int],
    budget: int,
) -> list[tuple[int, ...]] | None:
    """BFS over tuples; returns the state sequence from starts to targets.

    ``succ[i][x]`` lists admissible next vertices of coordinate ``i``
    (already filtered to those that can still reach ``targets[i]``);
    ``future[i][x]`` is the bitset of vertices on some remaining path of
    coordinate ``i`` from ``x``; ``escape[i]`` is the bitset of vertices in
    coordinate ``i``'s forbidden components.
    """
    l = len(starts)
    pred: dict[tuple[int, ...], tuple[int, ...] | None] = {starts: None}
    queue = deque([starts])
    while queue:
        state = queue.popleft()
        if state == targets:
            break
        occupied = bits(state)
        futures = [future[j][state[j]] for j in range(l)]
        for i in range(l):
            x = state[i]
            if x == targets[i]:
                continue
            if any(
                futures[j] >> x & 1 and not escape[j] >> x & 1 for j in range(l) if j != i
            ):
                continue
            for y in succ[i][x]:
                if occupied >> y & 1:
                    continue
                nxt = state[:i] + (y,) + state[i + 1 :]
                if nxt in pred:
                    continue
                pred[nxt] = state
                if len(pred) > budget:
                    raise StateBudgetExceeded(budget)
                queue.append(nxt)
    if targets not in pred:
        return None
    chain = [targets]
    while (prev := pred[chain[-1]]) is not None:
        chain.append(prev)
    chain.reverse()
    return chain


def _paths_from_states(chain: list[tuple[int, ...]]) -> list[list[int]]:
    """Unfold a state sequence into one vertex list per coordinate.

    Checks on the way that the growing prefixes stay pairwise disjoint.
    """
    paths = [[v] for v in chain[0]]
    used = {v: i for i, v in enumerate(chain[0])}
    for prev, cur in zip(chain, chain[1:]):
        moved = [i for i in range(len(cur)) if cur[i] != prev[i]]
        assert len(moved) == 1, "product arcs move exactly one coordinate"
        i = moved[0]
        y = cur[i]
        assert y not in used, f"prefix of request {i} runs into request {used.get(y)}"
        used[y] = i
        paths[i].append(y)
    return paths


def solve_blind(
    sg: ShortestGraph,
    requests: Sequence[Request],
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> list[ColouredPath] | None:
    """Solve a k-DSP instance through the product digraph.

    Returns disjoint colour paths, one per request, each avoiding its
    forbidden components; or ``None`` when the target tuple is unreachable.
    A ``None`` only rules out solutions in which every pair of paths is blind
    or contained in a forbidden component of the other.
    """
    if not requests:
        return []
    terminals = [v for r in requests for v in (r.s, r.t)]
    if len(set(terminals)) != len(terminals):
        raise PreconditionError("terminals must be pairwise distinct; split them first")
    for r in requests:
        check_request(sg, r)

    succ, future, escape = [], [], []
    for r in requests:
        idx = build_reach_index(sg, r.colour, r.forbidden)
        into_t = idx.into(r.t)
        if not idx.reach(r.s, r.t):
            return None
        colour_succ = sg.successors(r.colour)
        succ.append([[w for w in colour_succ[x] if into_t >> w & 1] for x in range(sg.n)])
        future.append([row & into_t for row in idx.rows])
        escape.append(bits(idx.forbidden))

    starts = tuple(r.s for r in requests)
    targets = tuple(r.t for r in requests)
    chain = _product_search(starts, targets, succ, future, escape, state_budget)
    if chain is None:
        return None
    return [ColouredPath(r.colour, p) for r, p in zip(requests, _paths_from_states(chain))]


def solve_dag_disjoint(
    dag: Digraph, pairs: Sequence[tuple[int, int]], state_budget: int = DEFAULT_STATE_BUDGET
) -> list[tuple[int, ...]] | None:
    """Vertex-disjoint directed paths in an acyclic digraph, or ``None``.

    With a single orientation the move rule is the classic pebbling rule:
    a pebble may leave ``x`` only when no other pebble can still pass
    through ``x``.  This decides the problem exactly.
    """
    desc = dag.descendants  # raises CyclicGraphError
    if not pairs:
        return []
    terminals = [v for p in pairs for v in p]
    if len(set(terminals)) != len(terminals):
        raise PreconditionError("terminals must be pairwise distinct")
    succ, future = [], []
    for s, t in pairs:
        if not desc[s] >> t & 1:
            return None
        into_t = bits(u for u in range(dag.n) if desc[u] >> t & 1)
        succ.append([[w for w in dag.out[x] if into_t >> w & 1] for x in range(dag.n)])
        future.append([row & into_t for row in desc])
    starts = tuple(s for s, _ in pairs)
    targets = tuple(t for _, t in pairs)
    chain = _product_search(starts, targets, succ, future, [0] * len(pairs), state_budget)
    if chain is None:
        return None
    return [tuple(p) for p in _paths_from_states(chain)]

"""Decomposition-based k-DSP solver.

The solver guesses how each request's path splits into chained segments,
which colour each segment is solved in, and which bi-coloured components it
must avoid.  Every guess (a *segment scheme*) is handed to the blind-case
solver; a success is stitched back into one path per request.

Schemes are tried in order of total segment count.  Budgets bound the number
of segments per request and the number of forbidden components per segment.
In exhaustive mode the segment budget covers the longest request, so the
scheme in which every segment is a single edge is always tried; all pairs of
single edges are blind, which makes the search complete.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator, Sequence

from .bicolored import BiColouredComponent, Sign, all_components
from .blind import DEFAULT_STATE_BUDGET, solve_blind
from .errors import AssemblyMismatch, PreconditionError, StateBudgetExceeded
from .graph import ColouredPath, Graph, Request, ShortestGraph, bits, check_request, is_colour_path, members
from .oracle import check_solution
from .reductions import reduce_capprox, split_terminals

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveConfig:
    segment_budget: int = 2
    forbidden_budget: int = 1
    state_budget: int = DEFAULT_STATE_BUDGET
    exhaustive: bool = False
    max_schemes: int | None = None

    def __post_init__(self):
        if self.segment_budget < 1 or self.state_budget < 1:
            raise PreconditionError("segment and state budgets must be at least 1")
        if self.forbidden_budget < 0:
            raise PreconditionError("forbidden budget must be non-negative")


@dataclass(frozen=True)
class Segment:
    """One piece of a request's path.

    ``s`` and ``t`` follow the request's own colour order.  The piece is
    solved in ``colour``; ``reverse`` means that colour runs from ``t`` to
    ``s`` (the piece sits in a minus component).
    """

    s: int
    t: int
    colour: int
    reverse: bool = False
    forbidden: tuple[BiColouredComponent, ...] = ()

    def as_request(self) -> Request:
        if self.reverse:
            return Request(self.t, self.s, self.colour, self.forbidden)
        return Request(self.s, self.t, self.colour, self.forbidden)


@dataclass(frozen=True)
class SegmentScheme:
    segments: tuple[tuple[Segment, ...], ...]

    @property
    def total(self) -> int:
        return sum(len(row) for row in self.segments)

    def flat(self) -> list[Segment]:
        return [seg for row in self.segments for seg in row]


class Status(enum.Enum):
    SOLUTION = "solution"
    NO_SOLUTION = "no-solution"
    BUDGET_EXCEEDED = "budget-exceeded"


EXIT_CODES = {Status.SOLUTION: 0, Status.NO_SOLUTION: 1, Status.BUDGET_EXCEEDED: 2}


@dataclass
class SolveVerdict:
    status: Status
    paths: list[ColouredPath] | None = None
    scheme: SegmentScheme | None = None
    reason: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def __bool__(self) -> bool:
        return self.status is Status.SOLUTION


def _corridor(sg: ShortestGraph, colour: int, s: int, t: int) -> int:
    desc = sg.descendants(colour)
    return desc[s] & bits(v for v in range(sg.n) if desc[v] >> t & 1)


class _Planner:
    """Per-request scheme options, grouped by segment count."""

    def __init__(self, sg: ShortestGraph, forbidden_budget: int):
        self.sg = sg
        self.forbidden_budget = forbidden_budget
        self.comps = all_components(sg)

    def colour_options(self, colour: int, x: int, y: int) -> list[tuple[int, bool]]:
        out = [(colour, False)]
        row = self.sg.levels[colour]
        if row[y] - row[x] <= 1:
            return out
        for comp in self.comps:
            if comp.has_colour(colour) and x in comp.vertices and y in comp.vertices:
                opt = (comp.other(colour), comp.sign is Sign.MINUS)
                if opt not in out:
                    out.append(opt)
        return out

    def forbidden_options(self, colour: int, a: int, b: int) -> list[tuple[BiColouredComponent, ...]]:
        """Forbidden lists for a piece solved from ``a`` to ``b`` in ``colour``.

        Lists are deduplicated by the vertices they actually remove from the
        piece's corridor; lists that leave no path are dropped.
        """
        out: list[tuple[BiColouredComponent, ...]] = [()]
        if self.forbidden_budget == 0 or self.sg.levels[colour][b] - self.sg.levels[colour][a] <= 1:
            return out
        corridor = _corridor(self.sg, colour, a, b)
        useful = [
            c
            for c in self.comps
            if c.has_colour(colour)
            and a not in c.vertices
            and b not in c.vertices
            and corridor & bits(c.vertices)
        ]
        seen = {0}
        for size in range(1, self.forbidden_budget + 1):
            for group in combinations(useful, size):
                removed = corridor & bits(v for c in group for v in c.vertices)
                if removed in seen:
                    continue
                seen.add(removed)
                if not self.sg.descendants(colour, removed)[a] >> b & 1:
                    continue
                out.append(group)
        return out

    def chains(self, colour: int, s: int, t: int, pieces: int) -> Iterator[tuple[int, ...]]:
        desc = self.sg.descendants(colour)
        row = self.sg.levels[colour]
        inner = _corridor(self.sg, colour, s, t) & ~bits((s, t))
        candidates = sorted(members(inner), key=lambda v: (row[v], v))

        def extend(chain: list[int], left: int) -> Iterator[tuple[int, ...]]:
            last = chain[-1]
            if left == 1:
                if desc[last] >> t & 1 and last != t:
                    yield tuple(chain) + (t,)
                return
            for v in candidates:
                if row[v] > row[last] and desc[last] >> v & 1:
                    chain.append(v)
                    yield from extend(chain, left - 1)
                    chain.pop()

        yield from extend([s], pieces)

    def options(self, req: Request, pieces: int) -> list[tuple[Segment, ...]]:
        out = []
        for chain in self.chains(req.colour, req.s, req.t, pieces):
            per_piece = []
            for x, y in zip(chain, chain[1:]):
                choices = []
                for colour, reverse in self.colour_options(req.colour, x, y):
                    a, b = (y, x) if reverse else (x, y)
                    for forbidden in self.forbidden_options(colour, a, b):
                        choices.append(Segment(x, y, colour, reverse, forbidden))
                per_piece.append(choices)
            out.extend(product(*per_piece))
        return out


def _gap(sg: ShortestGraph, req: Request) -> int:
    row = sg.levels[req.colour]
    return row[req.t] - row[req.s]


def _check_instance(sg: ShortestGraph, requests: Sequence[Request]) -> None:
    for r in requests:
        check_request(sg, r)
    ends = [v for r in requests for v in (r.s, r.t)]
    if len(set(ends)) != len(ends):
        raise PreconditionError("terminals must be pairwise distinct; split them first")


def _budgets(sg: ShortestGraph, requests: Sequence[Request], config: SolveConfig) -> int:
    if config.exhaustive:
        return max((_gap(sg, r) for r in requests), default=0) + 1
    return config.segment_budget


def enumerate_schemes(
    sg: ShortestGraph, requests: Sequence[Request], config: SolveConfig
) -> Iterator[SegmentScheme]:
    """Yield segment schemes in order of non-decreasing total segment count."""
    _check_instance(sg, requests)
    if not requests:
        yield SegmentScheme(())
        return
    budget = _budgets(sg, requests, config)
    planner = _Planner(sg, config.forbidden_budget)
    caps = [max(0, min(budget, _gap(sg, r))) for r in requests]
    if 0 in caps:
        return
    cache: dict[tuple[int, int], list[tuple[Segment, ...]]] = {}

    def opts(i: int, m: int) -> list[tuple[Segment, ...]]:
        if (i, m) not in cache:
            cache[(i, m)] = planner.options(requests[i], m)
        return cache[(i, m)]

    l = len(requests)
    for total in range(l, sum(caps) + 1):
        for counts in _compositions(total, caps):
            for combo in product(*(opts(i, m) for i, m in enumerate(counts))):
                if _endpoints_clash(combo):
                    continue
                yield SegmentScheme(tuple(combo))


def _compositions(total: int, caps: Sequence[int]) -> Iterator[tuple[int, ...]]:
    if not caps:
        if total == 0:
            yield ()
        return
    rest_max = sum(caps[1:])
    for m in range(max(1, total - rest_max), min(caps[0], total - (len(caps) - 1)) + 1):
        for tail in _compositions(total - m, caps[1:]):
            yield (m,) + tail


def _endpoints_clash(combo: Sequence[tuple[Segment, ...]]) -> bool:
    seen: set[int] = set()
    for row in combo:
        ends = {row[0].s} | {seg.t for seg in row}
        if seen & ends:
            return True
        seen |= ends
    return False


def assemble(
    sg: ShortestGraph,
    requests: Sequence[Request],
    scheme: SegmentScheme,
    segment_paths: Sequence[Sequence[Sequence[int]]],
) -> list[ColouredPath]:
    """Concatenate per-segment paths into one colour path per request.

    ``segment_paths[i][p]`` is the path found for segment ``p`` of request
    ``i``, oriented in that segment's solving colour.
    """
    if len(segment_paths) != len(scheme.segments):
        raise AssemblyMismatch("one list of segment paths per request expected")
    out = []
    for req, segs, paths in zip(requests, scheme.segments, segment_paths):
        if len(segs) != len(paths):
            raise AssemblyMismatch(f"request {req}: {len(segs)} segments, {len(paths)} paths")
        walk: list[int] = [req.s]
        for seg, path in zip(segs, paths):
            piece = tuple(path)[::-1] if seg.reverse else tuple(path)
            if piece[0] != seg.s or piece[-1] != seg.t or piece[0] != walk[-1]:
                raise AssemblyMismatch(f"segment {seg.s}->{seg.t} got path {piece}")
            walk.extend(piece[1:])
        if walk[-1] != req.t or not is_colour_path(sg, req.colour, walk):
            raise AssemblyMismatch(f"assembled {walk} is not a colour-{req.colour} path {req.s}->{req.t}")
        out.append(ColouredPath(req.colour, tuple(walk)))
    return out


def _blind_key(reqs: Sequence[Request]) -> tuple:
    return tuple(
        sorted((r.s, r.t, r.colour, frozenset(v for c in r.forbidden for v in c.vertices)) for r in reqs)
    )


def solve(
    sg: ShortestGraph, requests: Sequence[Request], config: SolveConfig = SolveConfig()
) -> SolveVerdict:
    """Decide a k-DSP instance by trying segment schemes.

    A solution is always validated before being returned.  ``NO_SOLUTION``
    is only reported in exhaustive mode after every scheme failed without
    hitting the state budget.  When all requests share one colour, the
    one-segment scheme is already complete and exhaustive mode stops there.
    """
    _check_instance(sg, requests)
    single_colour = len({r.colour for r in requests}) <= 1
    if config.exhaustive and single_colour:
        config = SolveConfig(1, 0, config.state_budget, True, config.max_schemes)

    stats = {"schemes": 0, "blind_calls": 0, "state_budget_hits": 0, "max_total": 0}
    tried: set[tuple] = set()
    for scheme in enumerate_schemes(sg, requests, config):
        if config.max_schemes is not None and stats["schemes"] >= config.max_schemes:
            return SolveVerdict(Status.BUDGET_EXCEEDED, reason="scheme budget exhausted", stats=stats)
        stats["schemes"] += 1
        stats["max_total"] = scheme.total
        flat = [seg.as_request() for seg in scheme.flat()]
        key = _blind_key(flat)
        if key in tried:
            continue
        tried.add(key)
        split = split_terminals(sg, flat)
        stats["blind_calls"] += 1
        try:
            found = solve_blind(split.graph, split.requests, config.state_budget)
        except StateBudgetExceeded:
            stats["state_budget_hits"] += 1
            log.debug("state budget hit on scheme %s", scheme)
            continue
        if found is None:
            continue
        flat_paths = [split.map_path(p.vertices) for p in found]
        grouped, pos = [], 0
        for row in scheme.segments:
            grouped.append(flat_paths[pos : pos + len(row)])
            pos += len(row)
        paths = assemble(sg, requests, scheme, grouped)
        report = check_solution(sg, requests, [p.vertices for p in paths])
        if not report:
            raise AssemblyMismatch("; ".join(report.problems))
        return SolveVerdict(Status.SOLUTION, paths, scheme, "scheme solved", stats)

    if config.exhaustive and stats["state_budget_hits"] == 0:
        reason = "single colour: one segment per request is complete" if single_colour else "all schemes exhausted"
        return SolveVerdict(Status.NO_SOLUTION, reason=reason, stats=stats)
    if stats["state_budget_hits"]:
        return SolveVerdict(Status.BUDGET_EXCEEDED, reason="product state budget exceeded", stats=stats)
    return SolveVerdict(Status.BUDGET_EXCEEDED, reason="segment budget exhausted", stats=stats)


def solve_relaxed(
    g: Graph,
    pairs: Sequence[tuple[int, int]],
    slack: int = 0,
    config: SolveConfig = SolveConfig(),
) -> SolveVerdict:
    """Disjoint paths of length at most ``d(s, t) + slack`` in a plain graph.

    Shared terminals are split first; each instance of the slack expansion is
    solved in turn and the first success is mapped back.
    """
    split = split_terminals(g, list(pairs))
    base, split_pairs = split.graph, list(split.requests)
    outcome = Status.NO_SOLUTION
    stats = {"instances": 0}
    for inst in reduce_capprox(base, split_pairs, slack):
        stats["instances"] += 1
        verdict = solve(inst.sg, inst.requests, config)
        if verdict.status is Status.BUDGET_EXCEEDED:
            outcome = Status.BUDGET_EXCEEDED
            continue
        if verdict.status is Status.NO_SOLUTION:
            continue
        walks = inst.assemble([p.vertices for p in verdict.paths])
        walks = [split.map_path(w) for w in walks]
        report = check_solution(g, list(pairs), walks, slack)
        if not report:
            raise AssemblyMismatch("; ".join(report.problems))
        paths = [ColouredPath(i, w) for i, w in enumerate(walks)]
        return SolveVerdict(Status.SOLUTION, paths, None, f"instance {stats['instances']} solved", stats)
    if outcome is Status.NO_SOLUTION and not config.exhaustive:
        outcome = Status.BUDGET_EXCEEDED
    reason = "every expanded instance infeasible" if outcome is Status.NO_SOLUTION else "budget exceeded"
    return SolveVerdict(outcome, reason=reason, stats=stats)

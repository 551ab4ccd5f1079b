import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import path_graph
from kdsp.errors import CyclicGraphError, DisconnectedPair, PreconditionError
from kdsp.generate import gen_dag, gen_plain
from kdsp.graph import Digraph, Graph, Request, validate_shortest_graph
from kdsp.layering import build_shortest_graph
from kdsp.oracle import check_solution, oracle_solve
from kdsp.reductions import dag_to_1dsp, reduce_capprox, split_terminals, to_kdsp
from kdsp.solver import SolveConfig, Status, solve, solve_relaxed


def test_to_kdsp_single_request():
    sg, reqs = to_kdsp(path_graph(3), [(0, 2)])
    assert reqs == [Request(0, 2, 0)]
    assert sg.levels == ((0, 1, 2),)


def test_to_kdsp_disconnected():
    with pytest.raises(DisconnectedPair):
        to_kdsp(Graph.from_edges(3, [(0, 1)]), [(0, 2)])


def test_to_kdsp_prunes_triangle_flat_edge():
    g = Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    sg, _ = to_kdsp(g, [(0, 1)])
    assert (1, 2) not in sg.graph.edges


def test_to_kdsp_preserves_oracle_verdicts():
    rng = random.Random(4)
    for seed in range(120):
        n = rng.randint(2, 8)
        inst = gen_plain(n, rng.randint(1, min(3, n // 2)), seed)
        sg, reqs = to_kdsp(inst.graph, inst.requests)
        assert (oracle_solve(inst.graph, inst.requests) is None) == (oracle_solve(sg, reqs) is None)


def test_capprox_zero_slack_is_plain_packaging():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    (inst,) = list(reduce_capprox(g, [(0, 2)], 0))
    sg, reqs = to_kdsp(g, [(0, 2)])
    assert inst.sg == sg and list(inst.requests) == reqs


def test_capprox_one_detour_edge():
    # levels from 0: 1 and 2 share level 1, so {1, 2} is the only detour edge
    g = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4)])
    stream = list(reduce_capprox(g, [(0, 4)], 1))
    got = {inst.routes[0]: [(r.s, r.t) for r in inst.requests] for inst in stream}
    assert got == {
        (): [(0, 4)],
        ((1, 2),): [(0, 1), (2, 4)],
        ((2, 1),): [(0, 2), (1, 4)],
    }
    for inst in stream:
        assert not inst.blocked


def test_capprox_single_vertex_stretch_is_blocked():
    # 5-cycle from 0: detour 2->3 ends on the target, leaving an empty stretch
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    stream = {inst.routes[0]: inst for inst in reduce_capprox(g, [(0, 3)], 1)}
    assert set(stream) == {(), ((2, 3),)}
    inst = stream[((2, 3),)]
    assert inst.blocked == {3} and inst.pieces == ((0, None),)
    assert inst.assemble([(0, 1, 2)]) == [(0, 1, 2, 3)]


def test_capprox_rejects_shared_terminals():
    with pytest.raises(PreconditionError):
        list(reduce_capprox(path_graph(3), [(0, 1), (1, 2)], 1))


def test_split_identity_without_sharing():
    sg = build_shortest_graph(path_graph(4), [0])
    split = split_terminals(sg, [Request(0, 1, 0), Request(2, 3, 0)])
    assert split.graph is sg and split.back == (0, 1, 2, 3)


def test_split_clones_shared_source():
    g = Graph.from_edges(3, [(0, 1), (0, 2)])
    split = split_terminals(g, [(0, 1), (0, 2)])
    assert split.graph.n == 4
    assert split.requests == ((0, 1), (3, 2))
    assert split.back == (0, 1, 2, 0)
    assert split.graph.neighbours(3) == split.graph.neighbours(0)
    assert not split.graph.has_edge(0, 3)


def test_split_preserves_oracle_verdicts():
    rng = random.Random(8)
    seen_shared = 0
    for _ in range(200):
        n = rng.randint(3, 7)
        g = Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.45])
        pairs = []
        for _ in range(rng.randint(1, 3)):
            s, t = rng.sample(range(n), 2)
            pairs.append((s, t))
        try:
            before = oracle_solve(g, pairs)
        except DisconnectedPair:
            continue
        split = split_terminals(g, pairs)
        seen_shared += split.graph.n > n
        after = oracle_solve(split.graph, list(split.requests))
        assert (before is None) == (after is None)
        if after is not None:
            assert check_solution(g, pairs, [split.map_path(p) for p in after])
    assert seen_shared > 20


def test_relaxed_solver_on_shared_source():
    g = Graph.from_edges(6, [(0, 3), (3, 1), (3, 2), (0, 4), (4, 5), (5, 2)])
    pairs = [(0, 1), (0, 2)]
    assert solve_relaxed(g, pairs, 0, SolveConfig(exhaustive=True)).status is Status.NO_SOLUTION
    verdict = solve_relaxed(g, pairs, 1, SolveConfig(exhaustive=True))
    assert verdict.status is Status.SOLUTION
    assert check_solution(g, pairs, [p.vertices for p in verdict.paths], slack=1)


def test_dag_subdivision_lengths():
    # order 0, 1, 2, 3: arc (0, 3) spans three positions
    dag = Digraph(4, frozenset({(0, 1), (1, 2), (2, 3), (0, 3)}))
    red = dag_to_1dsp(dag, [(0, 3)])
    assert len(red.chains[(0, 3)]) == 4
    assert red.chains[(1, 2)] == (1, 2)
    assert red.graph.n == 6
    assert validate_shortest_graph(red.sg) == []


def test_dag_reduction_rejects_cycle():
    with pytest.raises(CyclicGraphError):
        dag_to_1dsp(Digraph(2, frozenset({(0, 1), (1, 0)})), [(0, 1)])


def test_dag_reduction_pulls_back_paths():
    dag = Digraph(4, frozenset({(0, 1), (1, 2), (2, 3), (0, 3)}))
    red = dag_to_1dsp(dag, [(0, 3)])
    verdict = solve(red.sg, red.requests, SolveConfig(exhaustive=True))
    (p,) = verdict.paths
    pulled = red.pull_back(p.vertices)
    assert pulled[0] == 0 and pulled[-1] == 3
    assert all((a, b) in dag.arcs for a, b in zip(pulled, pulled[1:]))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.integers(0, 10**6))
def test_dag_reductions_validate(n, seed):
    inst = gen_dag(n, 1, seed)
    red = dag_to_1dsp(inst.dag, inst.requests)
    assert validate_shortest_graph(red.sg) == []

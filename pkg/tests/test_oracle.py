from collections import deque

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cycle_graph, graphs, path_graph, star_instance
from kdsp.errors import DisconnectedPair, EnumerationCapExceeded, PreconditionError
from kdsp.graph import Graph
from kdsp.oracle import (
    check_solution,
    enumerate_bounded_paths,
    enumerate_shortest_paths,
    oracle_solve,
)


def shared_source_instance():
    """Requests 0->1 and 0->2 share the source 0; both shortest routes run
    through 3, and 0-4-5-2 is one edge longer."""
    g = Graph.from_edges(6, [(0, 3), (3, 1), (3, 2), (0, 4), (4, 5), (5, 2)])
    return g, [(0, 1), (0, 2)]


def count_shortest(g, s, t):
    """Number of shortest s-t paths by dynamic programming over BFS order."""
    dist = {s: 0}
    ways = {s: 1}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                ways[w] = 0
                queue.append(w)
            if dist[w] == dist[u] + 1:
                ways[w] += ways[u]
    return ways.get(t, 0)


def test_unique_path_on_path_graph():
    assert list(enumerate_shortest_paths(path_graph(4), 0, 3)) == [(0, 1, 2, 3)]


def test_four_cycle_antipodal_has_two_paths():
    assert sorted(enumerate_shortest_paths(cycle_graph(4), 0, 2)) == [(0, 1, 2), (0, 3, 2)]


def test_complete_graph_adjacent_pair():
    g = Graph.from_edges(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
    assert list(enumerate_shortest_paths(g, 1, 2)) == [(1, 2)]


def test_disconnected_pair_raises():
    g = Graph.from_edges(3, [(0, 1)])
    with pytest.raises(DisconnectedPair):
        list(enumerate_shortest_paths(g, 0, 2))
    with pytest.raises(DisconnectedPair):
        oracle_solve(g, [(0, 2)])


def test_bounded_paths_include_detours():
    paths = set(enumerate_bounded_paths(cycle_graph(5), 0, 1, 4))
    assert paths == {(0, 1), (0, 4, 3, 2, 1)}


def test_requests_on_separate_parts():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    assert oracle_solve(g, [(0, 2), (3, 5)]) == [(0, 1, 2), (3, 4, 5)]


def test_star_centre_infeasible():
    sg, reqs = star_instance()
    assert oracle_solve(sg, reqs) is None
    assert oracle_solve(sg.graph, [(1, 2), (3, 4)]) is None


def test_slack_unlocks_detour():
    g, pairs = shared_source_instance()
    assert oracle_solve(g, pairs) is None
    found = oracle_solve(g, pairs, slack=1)
    assert found is not None and check_solution(g, pairs, found, slack=1)
    assert sorted(found) == [(0, 3, 1), (0, 4, 5, 2)]


def test_oracle_cap():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    with pytest.raises(EnumerationCapExceeded):
        oracle_solve(g, [(0, 2), (3, 5)], cap=1)


def test_negative_slack_rejected():
    with pytest.raises(PreconditionError):
        oracle_solve(path_graph(3), [(0, 2)], slack=-1)


def test_check_reports_shared_vertex():
    g = Graph.from_edges(5, [(0, 2), (2, 1), (3, 2), (2, 4)])
    report = check_solution(g, [(0, 1), (3, 4)], [(0, 2, 1), (3, 2, 4)])
    assert not report
    assert any("vertex 2" in p for p in report.problems)


def test_check_allows_shared_terminal():
    g, pairs = shared_source_instance()
    assert check_solution(g, pairs, [(0, 3, 1), (0, 4, 5, 2)], slack=1)


def test_check_length_with_and_without_slack():
    g = cycle_graph(5)
    assert not check_solution(g, [(0, 2)], [(0, 4, 3, 2)])
    assert check_solution(g, [(0, 2)], [(0, 4, 3, 2)], slack=1)


def test_check_rejects_wrong_count_and_non_edges():
    g = path_graph(3)
    assert not check_solution(g, [(0, 2)], [])
    assert not check_solution(g, [(0, 2)], [(0, 2)])


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=9), st.data())
def test_enumeration_count_matches_dynamic_programme(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    t = data.draw(st.integers(0, g.n - 1))
    expected = count_shortest(g, s, t)
    if expected == 0:
        with pytest.raises(DisconnectedPair):
            list(enumerate_shortest_paths(g, s, t))
        return
    paths = list(enumerate_shortest_paths(g, s, t))
    assert len(paths) == len(set(paths)) == expected

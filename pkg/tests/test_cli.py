import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import shortest_graphs
from kdsp.bicolored import all_components
from kdsp.cli import main
from kdsp.errors import InstanceFormatError
from kdsp.fileformat import (
    format_instance,
    format_solution,
    instance_to_json,
    parse_instance,
    parse_solution,
)
from kdsp.generate import Instance, gen_dag, gen_kdsp, gen_plain
from kdsp.graph import Request

PATH_INSTANCE = """\
# one request along a path
4 1 1
e 0 1
e 1 2
e 2 3
src 0 0
r 0 3 0
"""

STAR_INSTANCE = """\
5 2 2
e 0 1
e 0 2
e 0 3
e 0 4
src 0 1
src 1 3
r 1 2 0
r 3 4 1
"""


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_solve_path_instance(write, capsys):
    code, out = run(capsys, "solve", write("p.txt", PATH_INSTANCE))
    assert code == 0
    assert out.out == "solution\np 0 0 1 2 3\n"


def test_oracle_star_is_infeasible(write, capsys):
    code, out = run(capsys, "oracle", write("s.txt", STAR_INSTANCE))
    assert code == 1 and out.out.startswith("no-solution")


def test_budget_exit_code(write, capsys):
    code, _ = run(capsys, "solve", write("s.txt", STAR_INSTANCE), "--budget", "1")
    assert code == 2


def test_input_errors(write, capsys):
    assert run(capsys, "solve", write("bad.txt", "3 1 1\ne 0 9\n"))[0] == 3
    assert run(capsys, "solve", "/nonexistent/file")[0] == 3
    assert run(capsys, "frobnicate")[0] == 3
    assert run(capsys, "gen", "--n", "3", "--requests", "2", "--seed", "1")[0] == 3


def test_json_output(write, capsys):
    code, out = run(capsys, "solve", write("p.txt", PATH_INSTANCE), "--json")
    data = json.loads(out.out)
    assert code == 0 and data["status"] == "solution" and data["paths"] == [[0, 1, 2, 3]]


def test_check_command(write, capsys):
    inst = write("p.txt", PATH_INSTANCE)
    assert run(capsys, "check", inst, write("good.txt", "p 0 0 1 2 3\n"))[0] == 0
    code, out = run(capsys, "check", inst, write("bad.txt", "p 0 0 1 2\n"))
    assert code == 1 and "invalid" in out.out


def test_solve_output_feeds_check(write, capsys):
    inst = write("p.txt", PATH_INSTANCE)
    _, out = run(capsys, "solve", inst)
    assert run(capsys, "check", inst, write("sol.txt", out.out))[0] == 0


def test_layer_and_components(write, capsys):
    plain = write("c.txt", "4 0 1\ne 0 1\ne 1 2\ne 2 3\ne 3 0\nr 0 2\n")
    code, out = run(capsys, "layer", plain, "--sources", "0,2")
    assert code == 0
    layered = write("l.txt", out.out)
    code, out = run(capsys, "components", layered, "--colours", "0,1")
    assert code == 0
    assert out.out == "0 1 - offset 2 vertices 0 1 2 3\n"


def test_dag_commands(write, capsys):
    dag = write("d.txt", "4 0 1\na 0 1\na 1 2\na 2 3\na 0 3\nr 0 3\n")
    code, out = run(capsys, "dag-solve", dag)
    assert code == 0
    assert run(capsys, "check", dag, write("ds.txt", out.out))[0] == 0
    code, out = run(capsys, "dag-reduce", dag)
    assert code == 0
    reduced = parse_instance(out.out)
    assert reduced.kind == "kdsp" and reduced.n == 6


def test_relaxed_solve_from_cli(write, capsys):
    plain = write("r.txt", "6 0 2\ne 0 3\ne 3 1\ne 3 2\ne 0 4\ne 4 5\ne 5 2\nr 0 1\nr 0 2\n")
    assert run(capsys, "solve", plain, "--exhaustive")[0] == 1
    assert run(capsys, "oracle", plain)[0] == 1
    assert run(capsys, "solve", plain, "--exhaustive", "--slack", "1")[0] == 0
    assert run(capsys, "oracle", plain, "--slack", "1")[0] == 0


def test_gen_is_byte_identical(capsys):
    outs = [run(capsys, "gen", "--n", "8", "--k", "2", "--requests", "2", "--seed", "99")[1].out for _ in range(2)]
    assert outs[0] == outs[1] and outs[0]
    cmd = [sys.executable, "-m", "kdsp", "gen", "--n", "8", "--k", "2", "--requests", "2", "--seed", "99"]
    fresh = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert fresh == outs[0]


def test_gen_batch_exit_codes_agree(tmp_path, capsys):
    for seed in range(25):
        _, out = run(capsys, "gen", "--n", "7", "--k", "2", "--requests", "2", "--seed", str(seed))
        path = tmp_path / f"g{seed}.txt"
        path.write_text(out.out)
        solved, _ = run(capsys, "solve", str(path), "--exhaustive")
        exact, _ = run(capsys, "oracle", str(path))
        assert solved == exact


def test_format_errors_carry_line_numbers():
    with pytest.raises(InstanceFormatError, match="line 2"):
        parse_instance("2 0 0\nx 1 2\n")
    with pytest.raises(InstanceFormatError):
        parse_instance("2 0 1\ne 0 1\n")
    with pytest.raises(InstanceFormatError):
        parse_instance("")
    with pytest.raises(InstanceFormatError):
        parse_solution("p 1 0 1\n")


def test_names_round_trip():
    text = "2 0 1\ne 0 1\nr 0 1\nname 0 home\nname 1 work\n"
    inst = parse_instance(text)
    assert inst.names == {0: "home", 1: "work"}
    assert format_instance(inst) == text


def roundtrip_checks(inst):
    text = format_instance(inst)
    again = parse_instance(text)
    assert format_instance(again) == text
    assert again.requests == inst.requests
    via_json = parse_instance(json.dumps(instance_to_json(inst)))
    assert format_instance(via_json) == text


@settings(max_examples=80, deadline=None)
@given(shortest_graphs(max_n=9), st.data())
def test_layered_round_trip_with_forbidden_lists(sg, data):
    requests = []
    for _ in range(data.draw(st.integers(0, 2))):
        c = data.draw(st.integers(0, sg.k - 1))
        levelled = [v for v in range(sg.n) if sg.level(c, v) is not None]
        if len(levelled) < 2:
            continue
        s, t = data.draw(st.lists(st.sampled_from(levelled), min_size=2, max_size=2, unique=True))
        comps = [x for x in all_components(sg) if x.has_colour(c)]
        forbidden = tuple(data.draw(st.lists(st.sampled_from(comps), max_size=2, unique=True))) if comps else ()
        requests.append(Request(s, t, c, forbidden))
    inst = Instance(sg=sg, requests=requests)
    roundtrip_checks(inst)
    assert parse_instance(format_instance(inst)).sg == sg


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.integers(0, 2**63 - 1))
def test_generated_instances_round_trip(n, seed):
    roundtrip_checks(gen_kdsp(n, 2, 1, seed))
    roundtrip_checks(gen_plain(n, 1, seed))
    roundtrip_checks(gen_dag(n, 1, seed))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 50), min_size=1, max_size=6), max_size=4))
def test_solution_round_trip(paths):
    assert parse_solution(format_solution(paths)) == [tuple(p) for p in paths]

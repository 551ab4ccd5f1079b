"""Command-line front end.

Exit status: 0 solution found or check passed, 1 proven infeasible,
2 budget exceeded, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .bicolored import all_components, components
from .blind import DEFAULT_STATE_BUDGET, solve_dag_disjoint
from .errors import EnumerationCapExceeded, InstanceFormatError, KdspError, StateBudgetExceeded
from .fileformat import (
    format_instance,
    format_solution,
    instance_to_json,
    parse_instance,
    parse_solution,
)
from .generate import Instance, gen_dag, gen_kdsp, gen_plain
from .graph import Graph
from .layering import build_shortest_graph
from .oracle import DEFAULT_CAP, check_solution, oracle_dag_solve, oracle_solve
from .reductions import dag_to_1dsp, to_kdsp
from .solver import SolveConfig, Status, solve, solve_relaxed

log = logging.getLogger("kdsp")

EXIT_OK, EXIT_INFEASIBLE, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3
STATUS_EXIT = {"solution": EXIT_OK, "no-solution": EXIT_INFEASIBLE, "budget-exceeded": EXIT_BUDGET}


class CliError(Exception):
    """Bad arguments or unusable input; maps to exit status 3."""


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _load(path: str) -> Instance:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_instance(text)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        sys.stdout.write(text)


def _emit_verdict(args, status: str, paths, extra: dict | None = None) -> int:
    payload = {"status": status, "paths": [list(p) for p in paths] if paths else None}
    payload.update(extra or {})
    text = status + "\n" + (format_solution(paths) if paths else "")
    _emit(args, payload, text)
    return STATUS_EXIT[status]


def cmd_layer(args) -> int:
    inst = _load(args.instance)
    if inst.kind != "plain":
        raise CliError("layer expects a plain instance")
    if args.sources is None:
        sg, requests = to_kdsp(inst.graph, inst.requests)
    else:
        sg, requests = build_shortest_graph(inst.graph, args.sources), []
    out = Instance(sg=sg, requests=requests, names=inst.names)
    _emit(args, instance_to_json(out), format_instance(out))
    return EXIT_OK


def cmd_components(args) -> int:
    inst = _load(args.instance)
    if inst.sg is None:
        raise CliError("components expects a layered instance")
    if args.colours is None:
        comps = all_components(inst.sg)
    else:
        if len(args.colours) != 2:
            raise CliError("--colours takes exactly two colours")
        i, j = args.colours
        for c in (i, j):
            if not 0 <= c < inst.sg.k:
                raise CliError(f"colour {c} outside [0, {inst.sg.k})")
        comps = components(inst.sg, i, j)
    rows = [
        {
            "colours": [c.colour_a, c.colour_b],
            "sign": c.sign.value,
            "offset": c.offset,
            "vertices": sorted(c.vertices),
            "edges": sorted(list(e) for e in c.edges),
        }
        for c in comps
    ]
    text = "".join(
        f"{r['colours'][0]} {r['colours'][1]} {r['sign']} offset {r['offset']} vertices "
        + " ".join(map(str, r["vertices"]))
        + "\n"
        for r in rows
    )
    _emit(args, {"components": rows}, text)
    return EXIT_OK


def _config(args) -> SolveConfig:
    return SolveConfig(
        segment_budget=args.budget,
        forbidden_budget=args.bf,
        state_budget=args.state_budget,
        exhaustive=args.exhaustive,
    )


def cmd_solve(args) -> int:
    inst = _load(args.instance)
    config = _config(args)
    if inst.kind == "kdsp":
        if args.slack:
            raise CliError("--slack applies to plain instances only")
        verdict = solve(inst.sg, inst.requests, config)
    elif inst.kind == "plain":
        verdict = solve_relaxed(inst.graph, inst.requests, args.slack, config)
    else:
        raise CliError("use dag-solve for DAG instances")
    paths = [p.vertices for p in verdict.paths] if verdict.paths else None
    log.info("%s: %s %s", verdict.status.value, verdict.reason, verdict.stats)
    return _emit_verdict(args, verdict.status.value, paths, {"reason": verdict.reason, "stats": verdict.stats})


def cmd_oracle(args) -> int:
    inst = _load(args.instance)
    try:
        if inst.kind == "dag":
            paths = oracle_dag_solve(inst.dag, inst.requests, args.cap)
        elif inst.kind == "kdsp":
            if args.slack:
                raise CliError("--slack applies to plain instances only")
            paths = oracle_solve(inst.sg, inst.requests, 0, args.cap)
        else:
            paths = oracle_solve(inst.graph, inst.requests, args.slack, args.cap)
    except EnumerationCapExceeded as exc:
        log.warning("%s", exc)
        return _emit_verdict(args, Status.BUDGET_EXCEEDED.value, None)
    status = Status.SOLUTION if paths is not None else Status.NO_SOLUTION
    return _emit_verdict(args, status.value, paths)


def cmd_dag_solve(args) -> int:
    inst = _load(args.instance)
    if inst.dag is None:
        raise CliError("dag-solve expects an instance with arcs")
    try:
        paths = solve_dag_disjoint(inst.dag, inst.requests, args.state_budget)
    except StateBudgetExceeded as exc:
        log.warning("%s", exc)
        return _emit_verdict(args, Status.BUDGET_EXCEEDED.value, None)
    status = Status.SOLUTION if paths is not None else Status.NO_SOLUTION
    return _emit_verdict(args, status.value, paths)


def cmd_dag_reduce(args) -> int:
    inst = _load(args.instance)
    if inst.dag is None:
        raise CliError("dag-reduce expects an instance with arcs")
    red = dag_to_1dsp(inst.dag, inst.requests)
    out = Instance(sg=red.sg, requests=red.requests, names=inst.names)
    _emit(args, instance_to_json(out), format_instance(out))
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        if args.kind == "kdsp":
            inst = gen_kdsp(args.n, args.k, args.requests, args.seed, args.p)
        elif args.kind == "plain":
            inst = gen_plain(args.n, args.requests, args.seed, args.p)
        else:
            inst = gen_dag(args.n, args.requests, args.seed, args.p)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    _emit(args, instance_to_json(inst), format_instance(inst))
    return EXIT_OK


def cmd_check(args) -> int:
    inst = _load(args.instance)
    try:
        paths = parse_solution(Path(args.solution).read_text())
    except OSError as exc:
        raise CliError(f"cannot read {args.solution}: {exc.strerror}") from exc
    if inst.kind == "dag":
        # a directed path in the DAG instance is checked on its underlying graph
        # plus arc direction
        graph = Graph.from_edges(inst.n, inst.dag.arcs)
        report = check_solution(graph, inst.requests, paths, slack=inst.n)
        for i, p in enumerate(paths):
            if any((a, b) not in inst.dag.arcs for a, b in zip(p, p[1:])):
                report.ok = False
                report.problems.append(f"path {i} does not follow arc directions")
    else:
        base = inst.sg if inst.sg is not None else inst.graph
        report = check_solution(base, inst.requests, paths, args.slack)
    _emit(
        args,
        {"ok": report.ok, "problems": report.problems},
        ("ok\n" if report.ok else "invalid\n") + "".join(p + "\n" for p in report.problems),
    )
    return EXIT_OK if report.ok else EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kdsp", description="Disjoint shortest paths toolkit.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument(
        "--threads", type=int, default=1, help="internal parallelism (the solver currently runs single-threaded)"
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    # the same flags are accepted after the command name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("layer", parents=[common], help="layer a plain graph by BFS from each source")
    p.add_argument("instance")
    p.add_argument("--sources", type=_int_list, help="default: the request sources, one colour each")
    p.set_defaults(func=cmd_layer)

    p = sub.add_parser("components", parents=[common], help="list bi-coloured components")
    p.add_argument("instance")
    p.add_argument("--colours", type=_int_list)
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("solve", parents=[common], help="run the decomposition solver")
    p.add_argument("instance")
    p.add_argument("--budget", type=int, default=2, help="segments per request")
    p.add_argument("--bf", type=int, default=1, help="forbidden components per segment")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--slack", type=int, default=0)
    p.add_argument("--state-budget", type=int, default=DEFAULT_STATE_BUDGET)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", parents=[common], help="exact answer by brute force")
    p.add_argument("instance")
    p.add_argument("--slack", type=int, default=0)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("dag-solve", parents=[common], help="vertex-disjoint paths in a DAG")
    p.add_argument("instance")
    p.add_argument("--state-budget", type=int, default=DEFAULT_STATE_BUDGET)
    p.set_defaults(func=cmd_dag_solve)

    p = sub.add_parser("dag-reduce", parents=[common], help="subdivide a DAG into a one-colour instance")
    p.add_argument("instance")
    p.set_defaults(func=cmd_dag_reduce)

    p = sub.add_parser("gen", parents=[common], help="seeded random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--requests", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--kind", choices=("kdsp", "plain", "dag"), default="kdsp")
    p.add_argument("--p", type=float, default=0.4, help="edge probability")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", parents=[common], help="validate a solution file")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--slack", type=int, default=0)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr, format="%(levelname)s %(message)s"
    )
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (CliError, InstanceFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KdspError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

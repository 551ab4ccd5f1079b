"""Line-oriented instance and solution files, plus a JSON mirror.

Instance text format (``#`` starts a comment, blank lines are ignored)::

    n k l            header: vertex count, colour count, request count
    e u v            undirected edge
    a u v            arc (acyclic instances; no ``e`` lines allowed then)
    lv c x0 x1 ...   colour-c level of every vertex, ``-`` when unlevelled
    src c v          colour c is the BFS layering from v (instead of ``lv``)
    r s t [colour]   request; the colour is given iff k > 0
    f i a b sign v   request i avoids the ``sign`` component of colours a,b
                     that contains v
    name v label     optional vertex label

``k > 0`` gives a layered instance, ``a`` lines a DAG instance, anything
else a plain instance whose requests are terminal pairs.

Solution files hold one ``p i v0 v1 ...`` line per request.
"""

from __future__ import annotations

import json
from typing import Sequence

from .bicolored import Sign, component_containing
from .errors import InstanceFormatError, KdspError
from .generate import Instance
from .graph import Digraph, Graph, Request, ShortestGraph
from .layering import bfs_levels

MAX_VERTICES = 1 << 20


def _ints(fields: Sequence[str], count: int, lineno: int) -> list[int]:
    if len(fields) != count:
        raise InstanceFormatError(f"expected {count} fields, got {len(fields)}", lineno)
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise InstanceFormatError(f"non-integer field in {' '.join(fields)!r}", lineno) from None


def _vertex(v: int, n: int, lineno: int | None) -> int:
    if not 0 <= v < n:
        raise InstanceFormatError(f"vertex {v} outside [0, {n})", lineno)
    return v


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_instance(text: str) -> Instance:
    """Parse the text format, or the JSON mirror when ``text`` starts with ``{``."""
    if text.lstrip().startswith("{"):
        return instance_from_json(json.loads(text))
    lines = list(_lines(text))
    if not lines:
        raise InstanceFormatError("empty instance")
    header_no, header = lines[0]
    n, k, l = _ints(header, 3, header_no)
    if not 0 <= n <= MAX_VERTICES or k < 0 or l < 0:
        raise InstanceFormatError("header values out of range", header_no)

    edges, arcs, requests, forbidden = [], [], [], []
    level_rows: dict[int, tuple[int | None, ...]] = {}
    names: dict[int, str] = {}
    for lineno, (tag, *rest) in lines[1:]:
        if tag == "e":
            u, v = (_vertex(x, n, lineno) for x in _ints(rest, 2, lineno))
            edges.append((u, v))
        elif tag == "a":
            u, v = (_vertex(x, n, lineno) for x in _ints(rest, 2, lineno))
            arcs.append((u, v))
        elif tag == "lv":
            if len(rest) != n + 1:
                raise InstanceFormatError(f"level line needs a colour and {n} entries", lineno)
            (c,) = _ints(rest[:1], 1, lineno)
            row = tuple(None if x == "-" else _ints([x], 1, lineno)[0] for x in rest[1:])
            level_rows[c] = row
        elif tag == "src":
            c, v = _ints(rest, 2, lineno)
            level_rows[c] = ("src", _vertex(v, n, lineno))  # resolved once edges are known
        elif tag == "r":
            want = 3 if k else 2
            vals = _ints(rest, want, lineno)
            for x in vals[:2]:
                _vertex(x, n, lineno)
            requests.append((lineno, vals))
        elif tag == "f":
            if len(rest) != 5 or rest[3] not in ("+", "-"):
                raise InstanceFormatError("forbidden line is 'f req a b sign v'", lineno)
            i, a, b = _ints(rest[:3], 3, lineno)
            (v,) = _ints(rest[4:], 1, lineno)
            forbidden.append((lineno, i, a, b, Sign(rest[3]), v))
        elif tag == "name":
            if len(rest) != 2:
                raise InstanceFormatError("name line is 'name v label'", lineno)
            names[_vertex(_ints(rest[:1], 1, lineno)[0], n, lineno)] = rest[1]
        else:
            raise InstanceFormatError(f"unknown line tag {tag!r}", lineno)

    if len(requests) != l:
        raise InstanceFormatError(f"header announces {l} requests, found {len(requests)}")
    try:
        if arcs:
            if edges or k:
                raise InstanceFormatError("arc instances take no edges and no colours")
            pairs = [tuple(vals) for _, vals in requests]
            return Instance(dag=Digraph(n, frozenset(arcs)), requests=pairs, names=names)
        graph = Graph.from_edges(n, edges)
        if not k:
            if forbidden or level_rows:
                raise InstanceFormatError("plain instances take no levels or forbidden lists")
            return Instance(graph=graph, requests=[tuple(vals) for _, vals in requests], names=names)
        return _layered(graph, k, level_rows, requests, forbidden, names)
    except InstanceFormatError:
        raise
    except (KdspError, ValueError) as exc:
        raise InstanceFormatError(str(exc)) from exc


def _layered(graph, k, level_rows, requests, forbidden, names) -> Instance:
    if sorted(level_rows) != list(range(k)):
        raise InstanceFormatError(f"need exactly one level line per colour 0..{k - 1}")
    rows = []
    for c in range(k):
        row = level_rows[c]
        if row and row[0] == "src":
            dist = bfs_levels(graph, row[1])
            row = tuple(dist.get(v) for v in range(graph.n))
        rows.append(row)
    sg = ShortestGraph(graph, tuple(rows))
    comps: dict[int, list] = {}
    for lineno, i, a, b, sign, v in forbidden:
        if not 0 <= i < len(requests):
            raise InstanceFormatError(f"forbidden list for unknown request {i}", lineno)
        try:
            comps.setdefault(i, []).append(component_containing(sg, a, b, sign, v))
        except KdspError as exc:
            raise InstanceFormatError(str(exc), lineno) from exc
    reqs = []
    for i, (lineno, (s, t, c)) in enumerate(requests):
        if not 0 <= c < k:
            raise InstanceFormatError(f"colour {c} outside [0, {k})", lineno)
        reqs.append(Request(s, t, c, tuple(comps.get(i, ()))))
    return Instance(sg=sg, requests=reqs, names=names)


def format_instance(inst: Instance) -> str:
    out = []
    k = inst.sg.k if inst.sg is not None else 0
    out.append(f"{inst.n} {k} {len(inst.requests)}")
    if inst.dag is not None:
        out.extend(f"a {u} {v}" for u, v in sorted(inst.dag.arcs))
    else:
        graph = inst.sg.graph if inst.sg is not None else inst.graph
        out.extend(f"e {u} {v}" for u, v in graph.sorted_edges())
    if inst.sg is not None:
        for c, row in enumerate(inst.sg.levels):
            out.append(f"lv {c} " + " ".join("-" if x is None else str(x) for x in row))
        for req in inst.requests:
            out.append(f"r {req.s} {req.t} {req.colour}")
        for i, req in enumerate(inst.requests):
            for comp in req.forbidden:
                out.append(
                    f"f {i} {comp.colour_a} {comp.colour_b} {comp.sign.value} {min(comp.vertices)}"
                )
    else:
        out.extend(f"r {s} {t}" for s, t in inst.requests)
    out.extend(f"name {v} {label}" for v, label in sorted(inst.names.items()))
    return "\n".join(out) + "\n"


def instance_to_json(inst: Instance) -> dict:
    data: dict = {"kind": inst.kind, "n": inst.n}
    if inst.dag is not None:
        data["arcs"] = [list(a) for a in sorted(inst.dag.arcs)]
    else:
        graph = inst.sg.graph if inst.sg is not None else inst.graph
        data["edges"] = [list(e) for e in graph.sorted_edges()]
    if inst.sg is not None:
        data["levels"] = [list(row) for row in inst.sg.levels]
        data["requests"] = [
            {
                "s": r.s,
                "t": r.t,
                "colour": r.colour,
                "forbidden": [
                    {"colours": [c.colour_a, c.colour_b], "sign": c.sign.value, "vertex": min(c.vertices)}
                    for c in r.forbidden
                ],
            }
            for r in inst.requests
        ]
    else:
        data["requests"] = [{"s": s, "t": t} for s, t in inst.requests]
    if inst.names:
        data["names"] = {str(v): label for v, label in sorted(inst.names.items())}
    return data


def instance_from_json(data: dict) -> Instance:
    try:
        n = int(data["n"])
        names = {int(v): str(label) for v, label in data.get("names", {}).items()}
        kind = data.get("kind", "kdsp" if "levels" in data else "plain")
        reqs = data.get("requests", [])
        if kind == "dag":
            dag = Digraph(n, frozenset(tuple(a) for a in data["arcs"]))
            return Instance(dag=dag, requests=[(r["s"], r["t"]) for r in reqs], names=names)
        graph = Graph.from_edges(n, data.get("edges", []))
        if kind == "plain":
            return Instance(graph=graph, requests=[(r["s"], r["t"]) for r in reqs], names=names)
        sg = ShortestGraph(graph, tuple(tuple(row) for row in data["levels"]))
        out = []
        for r in reqs:
            comps = tuple(
                component_containing(sg, f["colours"][0], f["colours"][1], Sign(f["sign"]), f["vertex"])
                for f in r.get("forbidden", [])
            )
            out.append(Request(r["s"], r["t"], r["colour"], comps))
        return Instance(sg=sg, requests=out, names=names)
    except InstanceFormatError:
        raise
    except (KeyError, TypeError, IndexError, KdspError, ValueError) as exc:
        raise InstanceFormatError(f"bad JSON instance: {exc}") from exc


def parse_solution(text: str) -> list[tuple[int, ...]]:
    paths: dict[int, tuple[int, ...]] = {}
    for lineno, (tag, *rest) in _lines(text):
        if tag in ("solution", "no-solution", "budget-exceeded") and not rest:
            continue  # status line written by ``solve``
        if tag != "p" or len(rest) < 2:
            raise InstanceFormatError("solution lines are 'p i v0 v1 ...'", lineno)
        i, *path = _ints(rest, len(rest), lineno)
        if i in paths:
            raise InstanceFormatError(f"path {i} given twice", lineno)
        paths[i] = tuple(path)
    if sorted(paths) != list(range(len(paths))):
        raise InstanceFormatError("path indices must be 0, 1, ... without gaps")
    return [paths[i] for i in range(len(paths))]


def format_solution(paths: Sequence[Sequence[int]]) -> str:
    return "".join(f"p {i} " + " ".join(map(str, p)) + "\n" for i, p in enumerate(paths))

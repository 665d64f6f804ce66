"""Canonical text formats for graphs, query sets, and solution sets.

The graph format is a small extension of the familiar DIMACS arc layout:

    c objectives distance,time
    c meta family grid
    p mosp <V> <E> <d>
    s <scale_1> ... <scale_d>          (only when a scale differs from 1)
    a <u> <v> <c_1> ... <c_d>

Query files hold `q <source> <target>` lines whose file order defines the
query index.  Solution files hold one block per (query, epsilon) pair:

    r <query_index> <eps_1,...,eps_d> <count>
    x <c_1> ... <c_d> : <v_1> <v_2> ... <v_k>

Writers emit a canonical order (arcs sorted by (u, v, cost), solution
entries sorted lexicographically by cost), so equal inputs produce byte
identical files.
"""
from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .core import (
    Cost,
    Epsilon,
    MosGraph,
    Objective,
    Query,
    SolutionEntry,
    SolutionSet,
    _fraction_text,
)
from .errors import Malformed

_NAME_RE = re.compile(r"^[A-Za-z0-9_.\-]+$")


def _int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise Malformed(lineno, f"{what}: expected integer, got {token!r}") from None


def _lines(path: str | Path) -> list[str]:
    return Path(path).read_text(encoding="ascii").splitlines()


def write_graph(graph: MosGraph, path: str | Path) -> None:
    """Write a graph in canonical form (sorted arcs, sorted metadata)."""
    out: list[str] = []
    names = [o.name for o in graph.objectives]
    for name in names:
        if not _NAME_RE.match(name):
            raise ValueError(f"objective name {name!r} is not writable")
    out.append(f"c objectives {','.join(names)}")
    for key in sorted(graph.metadata):
        out.append(f"c meta {key} {graph.metadata[key]}")
    out.append(f"p mosp {graph.num_vertices} {graph.num_edges} {graph.d}")
    if any(o.scale != 1 for o in graph.objectives):
        out.append("s " + " ".join(str(o.scale) for o in graph.objectives))
    for u, v, cost in sorted(graph.edges):
        out.append(f"a {u} {v} " + " ".join(str(c) for c in cost))
    Path(path).write_text("\n".join(out) + "\n", encoding="ascii")


def read_graph(path: str | Path) -> MosGraph:
    """Parse the canonical graph format; inverse of write_graph."""
    num_vertices = 0
    num_edges = -1
    d = 0
    scales: list[int] | None = None
    names: list[str] | None = None
    metadata: dict[str, str] = {}
    edges: list[tuple[int, int, Cost]] = []
    lineno = 0
    for lineno, raw in enumerate(_lines(path), start=1):
        line = raw.strip()
        if not line:
            continue
        kind, _, rest = line.partition(" ")
        if kind == "c":
            words = rest.split()
            if len(words) >= 2 and words[0] == "objectives":
                names = words[1].split(",")
            elif len(words) >= 2 and words[0] == "meta":
                metadata[words[1]] = rest.split(None, 2)[2] if len(words) > 2 else ""
            continue
        if kind == "p":
            if num_edges >= 0:
                raise Malformed(lineno, "duplicate problem line")
            tokens = rest.split()
            if len(tokens) != 4 or tokens[0] != "mosp":
                raise Malformed(lineno, f"expected 'p mosp V E d', got {raw!r}")
            num_vertices = _int(tokens[1], lineno, "vertex count")
            num_edges = _int(tokens[2], lineno, "edge count")
            d = _int(tokens[3], lineno, "objective count")
            if d < 1:
                raise Malformed(lineno, "objective count must be >= 1")
            continue
        if kind == "s":
            if num_edges < 0:
                raise Malformed(lineno, "scale line before problem line")
            if scales is not None:
                raise Malformed(lineno, "duplicate scale line")
            tokens = rest.split()
            if len(tokens) != d:
                raise Malformed(lineno, f"expected {d} scales, got {len(tokens)}")
            scales = [_int(t, lineno, "scale") for t in tokens]
            if any(s < 1 for s in scales):
                raise Malformed(lineno, "scales must be >= 1")
            continue
        if kind == "a":
            if num_edges < 0:
                raise Malformed(lineno, "arc before problem line")
            tokens = rest.split()
            if len(tokens) != 2 + d:
                raise Malformed(
                    lineno, f"expected 'a u v' plus {d} costs, got {len(tokens)} fields"
                )
            u = _int(tokens[0], lineno, "arc tail")
            v = _int(tokens[1], lineno, "arc head")
            cost = tuple(_int(t, lineno, "arc cost") for t in tokens[2:])
            if not (1 <= u <= num_vertices) or not (1 <= v <= num_vertices):
                raise Malformed(lineno, f"arc endpoint out of range 1..{num_vertices}")
            if any(c < 0 for c in cost):
                raise Malformed(lineno, "negative arc cost")
            edges.append((u, v, cost))
            continue
        raise Malformed(lineno, f"unknown line keyword {kind!r}")
    if num_edges < 0:
        raise Malformed(lineno, "missing problem line")
    if len(edges) != num_edges:
        raise Malformed(lineno, f"problem line declares {num_edges} arcs, file has {len(edges)}")
    if names is not None and len(names) != d:
        raise Malformed(lineno, f"objective comment names {len(names)} of {d} objectives")
    if names is None:
        names = [f"c{i + 1}" for i in range(d)]
    if scales is None:
        scales = [1] * d
    return MosGraph(
        num_vertices=num_vertices,
        edges=tuple(edges),
        objectives=tuple(Objective(n, s) for n, s in zip(names, scales)),
        metadata=metadata,
    )


def write_queries(queries: Sequence[Query], path: str | Path) -> None:
    """Write query pairs in list order (file order defines the index)."""
    out = [f"q {q.source} {q.target}" for q in queries]
    Path(path).write_text("\n".join(out) + ("\n" if out else ""), encoding="ascii")


def read_queries(path: str | Path) -> list[Query]:
    """Parse `q source target` lines; indices follow file order."""
    out: list[Query] = []
    for lineno, raw in enumerate(_lines(path), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tokens = line.split()
        if tokens[0] != "q" or len(tokens) != 3:
            raise Malformed(lineno, f"expected 'q source target', got {raw!r}")
        s = _int(tokens[1], lineno, "source")
        t = _int(tokens[2], lineno, "target")
        if s < 1 or t < 1:
            raise Malformed(lineno, "query endpoints must be >= 1")
        out.append(Query(s, t, len(out)))
    return out


def write_solutions(
    sets: Sequence[SolutionSet],
    path: str | Path,
    *,
    objectives: Sequence[Objective] | None = None,
    include_paths: bool = True,
) -> None:
    """Write solution blocks; entries are sorted lexicographically by cost."""
    out: list[str] = []
    if objectives is not None:
        out.append(f"c objectives {','.join(o.name for o in objectives)}")
    for ss in sets:
        eps_text = ",".join(_fraction_text(v) for v in ss.epsilon.values)
        out.append(f"r {ss.query.index} {eps_text} {len(ss.entries)}")
        for entry in sorted(ss.entries, key=lambda e: e.cost):
            cost_text = " ".join(str(c) for c in entry.cost)
            if include_paths and entry.path is not None:
                out.append(f"x {cost_text} : " + " ".join(str(v) for v in entry.path))
            else:
                out.append(f"x {cost_text}")
    Path(path).write_text("\n".join(out) + ("\n" if out else ""), encoding="ascii")


def read_solutions(
    path: str | Path, queries: Sequence[Query] | None = None
) -> list[SolutionSet]:
    """Parse solution blocks.

    When `queries` is given, each block's query index binds to the matching
    Query; otherwise placeholder endpoints (0, 0) are used and only the
    index is meaningful.
    """
    sets: list[SolutionSet] = []
    pending: int = 0
    query: Query | None = None
    epsilon: Epsilon | None = None
    entries: list[SolutionEntry] = []
    d = 0

    def flush(lineno: int) -> None:
        nonlocal query, epsilon
        if query is None:
            return
        if pending != 0:
            raise Malformed(lineno, f"block for query {query.index} is {pending} entries short")
        sets.append(SolutionSet(query, epsilon, tuple(entries)))
        query = None
        epsilon = None
        entries.clear()

    lineno = 0
    for lineno, raw in enumerate(_lines(path), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tokens = line.split()
        if tokens[0] == "r":
            flush(lineno)
            if len(tokens) != 4:
                raise Malformed(lineno, f"expected 'r index eps count', got {raw!r}")
            qidx = _int(tokens[1], lineno, "query index")
            try:
                eps_values = tuple(Fraction(p) for p in tokens[2].split(","))
            except (ValueError, ZeroDivisionError):
                raise Malformed(lineno, f"bad epsilon list {tokens[2]!r}") from None
            if any(v < 0 for v in eps_values):
                raise Malformed(lineno, "negative epsilon")
            pending = _int(tokens[3], lineno, "entry count")
            if pending < 0:
                raise Malformed(lineno, "negative entry count")
            d = len(eps_values)
            if queries is not None:
                if not (0 <= qidx < len(queries)):
                    raise Malformed(lineno, f"query index {qidx} outside the query set")
                query = queries[qidx]
            else:
                query = Query(0, 0, qidx)
            epsilon = Epsilon(eps_values)
            continue
        if tokens[0] == "x":
            if query is None:
                raise Malformed(lineno, "entry before any 'r' line")
            if pending == 0:
                raise Malformed(lineno, "more entries than the block declared")
            body = tokens[1:]
            path_part: tuple[int, ...] | None = None
            if ":" in body:
                sep = body.index(":")
                cost_tokens, path_tokens = body[:sep], body[sep + 1 :]
                path_part = tuple(_int(t, lineno, "path vertex") for t in path_tokens)
                if not path_part:
                    raise Malformed(lineno, "empty witness path")
            else:
                cost_tokens = body
            if len(cost_tokens) != d:
                raise Malformed(lineno, f"expected {d} cost components, got {len(cost_tokens)}")
            cost = tuple(_int(t, lineno, "cost") for t in cost_tokens)
            if any(c < 0 for c in cost):
                raise Malformed(lineno, "negative cost")
            entries.append(SolutionEntry(cost, path_part))
            pending -= 1
            continue
        raise Malformed(lineno, f"unknown line keyword {tokens[0]!r}")
    flush(lineno)
    return sets

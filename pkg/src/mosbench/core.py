"""Core model for multi-objective shortest-path benchmarks.

Cost vectors are tuples of non-negative integers.  Real-valued objectives are
carried in fixed point: each objective has a scale factor s, and a stored
component c represents the real value c / s.  All comparisons, dominance
checks and front computations happen on the stored integers, so they are
exact and independent of float rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateInput,
    DimensionMismatch,
    EmptyGraph,
    LengthMismatch,
    NegativeCost,
    NonEdge,
)

Cost = tuple[int, ...]


@dataclass(frozen=True)
class Objective:
    """One cost axis: a name and the fixed-point scale of its stored integers."""

    name: str
    scale: int = 1

    def __post_init__(self) -> None:
        if self.scale < 1:
            raise ValueError(f"objective {self.name!r}: scale must be >= 1")


def _default_objectives(d: int) -> tuple[Objective, ...]:
    return tuple(Objective(f"c{i + 1}") for i in range(d))


@dataclass(frozen=True, eq=True)
class MosGraph:
    """A directed graph with d-dimensional additive integer edge costs.

    Vertices are 1..num_vertices.  Edges are (u, v, cost) triples; parallel
    edges are allowed and kept distinct.  The edge tuple order is the
    construction order and is preserved by conversions; file writers apply
    their own canonical sort without mutating the in-memory graph.
    """

    num_vertices: int
    edges: tuple[tuple[int, int, Cost], ...]
    objectives: tuple[Objective, ...]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.num_vertices < 1:
            raise EmptyGraph("graph must have at least one vertex")
        d = len(self.objectives)
        if d < 1:
            raise DimensionMismatch("graph needs at least one objective")
        n = self.num_vertices
        for u, v, cost in self.edges:
            if not (1 <= u <= n) or not (1 <= v <= n):
                raise NonEdge(f"edge ({u}, {v}) endpoint out of range 1..{n}")
            if len(cost) != d:
                raise DimensionMismatch(
                    f"edge ({u}, {v}) has {len(cost)} cost components, expected {d}"
                )
            for c in cost:
                if c < 0:
                    raise NegativeCost(f"edge ({u}, {v}) has negative cost {cost}")

    @property
    def d(self) -> int:
        return len(self.objectives)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def _min_edge_cost(self) -> dict[tuple[int, int], Cost]:
        # Parallel edges collapse to the lexicographically smallest cost here;
        # path_cost uses this map, solvers see every parallel edge separately.
        best: dict[tuple[int, int], Cost] = {}
        for u, v, cost in self.edges:
            key = (u, v)
            cur = best.get(key)
            if cur is None or cost < cur:
                best[key] = cost
        return best

    @cached_property
    def out_csr(self) -> tuple[list[int], list[int], list[list[int]]]:
        """Forward adjacency as (offsets, neighbor ids, per-objective cost columns)."""
        return self._csr(forward=True)

    @cached_property
    def in_csr(self) -> tuple[list[int], list[int], list[list[int]]]:
        """Reverse adjacency in the same layout as out_csr."""
        return self._csr(forward=False)

    def _csr(self, forward: bool) -> tuple[list[int], list[int], list[list[int]]]:
        n = self.num_vertices
        d = self.d
        counts = [0] * (n + 2)
        for u, v, _ in self.edges:
            counts[(u if forward else v) + 1] += 1
        off = [0] * (n + 2)
        for i in range(1, n + 2):
            off[i] = off[i - 1] + counts[i]
        pos = off[:]
        m = len(self.edges)
        nbr = [0] * m
        cols = [[0] * m for _ in range(d)]
        for u, v, cost in self.edges:
            src, dst = (u, v) if forward else (v, u)
            p = pos[src]
            pos[src] = p + 1
            nbr[p] = dst
            for k in range(d):
                cols[k][p] = cost[k]
        return off, nbr, cols

    def out_degree(self, v: int) -> int:
        off = self.out_csr[0]
        return off[v + 1] - off[v]

    def in_degree(self, v: int) -> int:
        off = self.in_csr[0]
        return off[v + 1] - off[v]


@dataclass(frozen=True, order=True)
class Query:
    """A source/target pair plus its position in the query file."""

    source: int
    target: int
    index: int = 0


def _fraction_text(value: Fraction) -> str:
    """Render a non-negative fraction; decimals stay decimals, others are n/d."""
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    k = 0
    while den % 2 == 0:
        den //= 2
        k += 1
    j = 0
    while den % 5 == 0:
        den //= 5
        j += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    places = max(k, j)
    scaled = value.numerator * 10**places // value.denominator
    digits = str(scaled).rjust(places + 1, "0")
    return f"{digits[:-places]}.{digits[-places:]}"


@dataclass(frozen=True)
class Epsilon:
    """Per-objective relative slack, held exactly as fractions.

    A vector p epsilon-dominates q when p_i <= (1 + eps_i) * q_i for all i
    with strict inequality (or strict dominance via equality of p and q being
    excluded) somewhere.  Comparisons multiply through by the denominator so
    no floats are ever involved.
    """

    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise DimensionMismatch("epsilon needs at least one component")
        for v in self.values:
            if v < 0:
                raise ValueError(f"epsilon component {v} is negative")

    @classmethod
    def zero(cls, d: int) -> "Epsilon":
        return cls((Fraction(0),) * d)

    @classmethod
    def broadcast(cls, value: Fraction | str | int, d: int) -> "Epsilon":
        return cls((Fraction(value),) * d)

    @classmethod
    def from_text(cls, text: str, d: int) -> "Epsilon":
        """Parse '0.1', '1/20' or a comma list with exactly d entries."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) == 1:
            return cls.broadcast(Fraction(parts[0]), d)
        if len(parts) != d:
            raise DimensionMismatch(
                f"epsilon list has {len(parts)} entries, graph has {d} objectives"
            )
        return cls(tuple(Fraction(p) for p in parts))

    @property
    def d(self) -> int:
        return len(self.values)

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def ratios(self) -> tuple[tuple[int, int], ...]:
        """(numerator, denominator) of 1 + eps_i per objective."""
        out = []
        for v in self.values:
            r = 1 + v
            out.append((r.numerator, r.denominator))
        return tuple(out)

    def display(self) -> str:
        """Canonical text: a single scalar when uniform, else a comma list."""
        if all(v == self.values[0] for v in self.values):
            return _fraction_text(self.values[0])
        return ",".join(_fraction_text(v) for v in self.values)


@dataclass(frozen=True)
class SolutionEntry:
    """One Pareto point: its cost vector and an optional witness path."""

    cost: Cost
    path: tuple[int, ...] | None = None


@dataclass(frozen=True)
class SolutionSet:
    """The solution front for one (query, epsilon) pair, sorted by cost."""

    query: Query
    epsilon: Epsilon
    entries: tuple[SolutionEntry, ...]

    @property
    def cardinality(self) -> int:
        return len(self.entries)

    def costs(self) -> list[Cost]:
        return [e.cost for e in self.entries]


def path_cost(graph: MosGraph, path: Sequence[int]) -> Cost:
    """Sum edge costs along a vertex path; a single vertex costs zero.

    Parallel edges resolve to the lexicographically smallest cost.  Raises
    NonEdge if a consecutive pair is not an arc.
    """
    if not path:
        raise NonEdge("empty path")
    n = graph.num_vertices
    for v in path:
        if not (1 <= v <= n):
            raise NonEdge(f"path vertex {v} out of range 1..{n}")
    d = graph.d
    total = [0] * d
    lookup = graph._min_edge_cost
    for u, v in zip(path, path[1:]):
        cost = lookup.get((u, v))
        if cost is None:
            raise NonEdge(f"({u}, {v}) is not an arc of the graph")
        for k in range(d):
            total[k] += cost[k]
    return tuple(total)


def _check_pair(p: Sequence[int], q: Sequence[int]) -> None:
    if len(p) != len(q):
        raise DimensionMismatch(f"cost vectors of length {len(p)} and {len(q)}")


def dominates(p: Sequence[int], q: Sequence[int]) -> bool:
    """True when p <= q componentwise and p != q (Pareto dominance)."""
    _check_pair(p, q)
    strict = False
    for a, b in zip(p, q):
        if a > b:
            return False
        if a < b:
            strict = True
    return strict


def weakly_dominates(p: Sequence[int], q: Sequence[int]) -> bool:
    """True when p <= q componentwise (dominated-or-equal)."""
    _check_pair(p, q)
    return all(a <= b for a, b in zip(p, q))


def eps_dominates(p: Sequence[int], q: Sequence[int], eps: Epsilon) -> bool:
    """True when p_i <= (1 + eps_i) * q_i for all i, strictly for some i.

    With eps = 0 this reduces to dominates().  Evaluated exactly over the
    integers via the fraction form of each 1 + eps_i.
    """
    _check_pair(p, q)
    if eps.d != len(p):
        raise DimensionMismatch(
            f"epsilon has {eps.d} components, vectors have {len(p)}"
        )
    strict = False
    for (a, b), (num, den) in zip(zip(p, q), eps.ratios()):
        lhs = a * den
        rhs = num * b
        if lhs > rhs:
            return False
        if lhs < rhs:
            strict = True
    return strict


def eps_covers(p: Sequence[int], q: Sequence[int], eps: Epsilon) -> bool:
    """eps_dominates or equality: p is an acceptable stand-in for q."""
    return tuple(p) == tuple(q) or eps_dominates(p, q, eps)


def pareto_filter(costs: Iterable[Cost]) -> list[Cost]:
    """The non-dominated subset, deduplicated, sorted lexicographically.

    After a lexicographic sort no vector can dominate an earlier one, so a
    single forward sweep against the retained front suffices.
    """
    pool = sorted(set(tuple(c) for c in costs))
    if not pool:
        return []
    d = len(pool[0])
    for c in pool:
        if len(c) != d:
            raise DimensionMismatch("mixed cost vector lengths")
    front: list[Cost] = []
    for c in pool:
        dominated = False
        for k in front:
            if all(a <= b for a, b in zip(k, c)):
                dominated = True
                break
        if not dominated:
            front.append(c)
    return front


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of two equal-length samples.

    Raises LengthMismatch on unequal lengths and DegenerateInput when either
    sample is constant or shorter than two.
    """
    if len(xs) != len(ys):
        raise LengthMismatch(f"samples of length {len(xs)} and {len(ys)}")
    if len(xs) < 2:
        raise DegenerateInput("need at least two observations")
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    xc = x - x.mean()
    yc = y - y.mean()
    sx = math.sqrt(float(np.dot(xc, xc)))
    sy = math.sqrt(float(np.dot(yc, yc)))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateInput("constant sample has no correlation")
    r = float(np.dot(xc, yc)) / (sx * sy)
    return max(-1.0, min(1.0, r))


def correlation_matrix_from_costs(
    costs: Sequence[Cost],
) -> list[list[float | None]]:
    """Pairwise Pearson matrix of cost components; None marks undefined cells."""
    if len(costs) < 2:
        raise EmptyGraph("need at least two cost vectors")
    d = len(costs[0])
    cols = [np.asarray([c[k] for c in costs], dtype=np.float64) for k in range(d)]
    out: list[list[float | None]] = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            try:
                r = pearson(cols[i], cols[j])
            except DegenerateInput:
                r = None
            out[i][j] = r
            out[j][i] = r
    return out


def objective_correlation_matrix(graph: MosGraph) -> list[list[float | None]]:
    """Pearson correlation between objectives over all edge costs.

    Computed on the stored fixed-point integers; Pearson is scale invariant
    so the result equals the real-valued correlation.
    """
    if graph.num_edges < 2:
        raise EmptyGraph("correlation needs at least two edges")
    return correlation_matrix_from_costs([cost for _, _, cost in graph.edges])

"""The standardized evaluation protocol.

run_benchmark sweeps a query set across an epsilon grid, producing solution
sets plus one benchmark record per (query, epsilon) task.  Verification
checks solver output feasibility and the epsilon-coverage contract, and the
statistics operations reproduce the reported descriptive tables:
cardinalities, reductions versus the exact baseline, per-axis spreads, and
objective correlation matrices.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from time import monotonic
from typing import Callable, Sequence

from .core import (
    Cost,
    Epsilon,
    MosGraph,
    Query,
    SolutionSet,
    _fraction_text,
    correlation_matrix_from_costs,
    dominates,
    eps_covers,
    objective_correlation_matrix,
    path_cost,
)
from .errors import (
    AllExcluded,
    MissingBaseline,
    NoRecords,
    NonEdge,
    QueryMismatch,
    SearchTimeout,
)
from .generate import netmaker_edge_kinds
from .solve import HeuristicTable, ideal_point_heuristic, solve_approx, solve_exact

SOLVER_ID = "labelset-dr"
RECORDS_HEADER = ("benchmark", "query", "epsilon", "cardinality", "ms", "solver", "status")

STATUS_SOLVED = "solved"
STATUS_EMPTY = "empty"
STATUS_TIMEOUT = "timeout"


@dataclass(frozen=True)
class BenchmarkRecord:
    """One (query, epsilon) measurement row of the records CSV."""

    benchmark: str
    query_index: int
    epsilon: str
    cardinality: int
    ms: float
    solver: str = SOLVER_ID
    status: str = STATUS_SOLVED


@dataclass(frozen=True)
class EpsilonGrid:
    """The protocol's ordered scalar epsilon values, broadcast per graph."""

    values: tuple[Fraction, ...] = (
        Fraction(0),
        Fraction(1, 100),
        Fraction(1, 20),
        Fraction(1, 10),
    )

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("epsilon grid must not be empty")
        for v in self.values:
            if v < 0:
                raise ValueError(f"negative epsilon {v}")
        for a, b in zip(self.values, self.values[1:]):
            if a >= b:
                raise ValueError("epsilon grid must be strictly increasing")

    def epsilons(self, d: int) -> list[Epsilon]:
        return [Epsilon.broadcast(v, d) for v in self.values]


def run_benchmark(
    graph: MosGraph,
    queries: Sequence[Query],
    grid: EpsilonGrid | Sequence[Epsilon] | None = None,
    *,
    timeout_ms: float | None = 300_000.0,
    benchmark_name: str | None = None,
    threads: int = 1,
    progress: Callable[[BenchmarkRecord], None] | None = None,
) -> tuple[list[SolutionSet], list[BenchmarkRecord]]:
    """Solve every (query, epsilon) pair; order is query-major, epsilon-minor.

    One heuristic is built per distinct target and shared.  A task that
    exceeds the timeout yields a timeout record and no solution set; the
    batch always continues.
    """
    if grid is None:
        grid = EpsilonGrid()
    eps_list = grid.epsilons(graph.d) if isinstance(grid, EpsilonGrid) else list(grid)
    name = benchmark_name or graph.metadata.get("family", "graph")
    graph.out_csr
    graph.in_csr
    heuristics: dict[int, HeuristicTable] = {}
    for q in queries:
        if q.target not in heuristics:
            heuristics[q.target] = ideal_point_heuristic(graph, q.target)
    tasks = [(q, e) for q in queries for e in eps_list]

    def run(task: tuple[Query, Epsilon]) -> tuple[SolutionSet | None, BenchmarkRecord]:
        query, eps = task
        heur = heuristics[query.target]
        t0 = monotonic()
        try:
            if eps.is_zero:
                ss = solve_exact(graph, query, heur, time_limit_ms=timeout_ms)
            else:
                ss = solve_approx(graph, query, eps, heur, time_limit_ms=timeout_ms)
        except SearchTimeout:
            ms = (monotonic() - t0) * 1000.0
            return None, BenchmarkRecord(
                name, query.index, eps.display(), 0, ms, SOLVER_ID, STATUS_TIMEOUT
            )
        ms = (monotonic() - t0) * 1000.0
        status = STATUS_SOLVED if ss.entries else STATUS_EMPTY
        rec = BenchmarkRecord(
            name, query.index, eps.display(), ss.cardinality, ms, SOLVER_ID, status
        )
        return ss, rec

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(t) for t in tasks]

    sets: list[SolutionSet] = []
    records: list[BenchmarkRecord] = []
    for ss, rec in results:
        if ss is not None:
            sets.append(ss)
        records.append(rec)
        if progress is not None:
            progress(rec)
    return sets, records


@dataclass
class VerificationReport:
    """Violations found in one solution set; empty means clean."""

    violations: list[str]

    @property
    def clean(self) -> bool:
        return not self.violations


def _path_can_cost(graph: MosGraph, path: Sequence[int], cost: Cost) -> bool:
    """Whether some choice among parallel edges gives the path this exact cost."""
    d = graph.d
    options: list[list[Cost]] = []
    for u, v in zip(path, path[1:]):
        opts = sorted(
            {c for (a, b, c) in graph.edges if a == u and b == v}
        )
        if not opts:
            return False
        options.append(opts)
    mins = [
        tuple(min(o[k] for o in opts) for k in range(d)) for opts in options
    ]
    suffix_min = [(0,) * d] * (len(options) + 1)
    for i in range(len(options) - 1, -1, -1):
        suffix_min[i] = tuple(mins[i][k] + suffix_min[i + 1][k] for k in range(d))

    def walk(i: int, acc: Cost) -> bool:
        if any(acc[k] + suffix_min[i][k] > cost[k] for k in range(d)):
            return False
        if i == len(options):
            return acc == cost
        for opt in options[i]:
            if walk(i + 1, tuple(acc[k] + opt[k] for k in range(d))):
                return True
        return False

    return walk(0, (0,) * d)


def verify_solutions(
    graph: MosGraph, query: Query, solset: SolutionSet
) -> VerificationReport:
    """Check witness feasibility, cost recomputation, dedup, non-dominance.

    Entries without witness paths only get the set-level checks.
    """
    v: list[str] = []
    costs = solset.costs()
    seen: dict[Cost, int] = {}
    for i, c in enumerate(costs):
        if c in seen:
            v.append(f"Duplicate: entry {i} repeats the cost of entry {seen[c]}")
        else:
            seen[c] = i
    for i, ci in enumerate(costs):
        for j, cj in enumerate(costs):
            if i != j and dominates(cj, ci):
                v.append(f"DominanceViolation: entry {i} is dominated by entry {j}")
                break
    for i, entry in enumerate(solset.entries):
        if entry.path is None:
            continue
        p = entry.path
        if p[0] != query.source:
            v.append(f"PathStart: entry {i} starts at {p[0]}, query source is {query.source}")
            continue
        if p[-1] != query.target:
            v.append(f"PathEnd: entry {i} ends at {p[-1]}, query target is {query.target}")
            continue
        try:
            rc = path_cost(graph, p)
        except NonEdge as exc:
            v.append(f"PathBroken: entry {i}: {exc}")
            continue
        if rc != entry.cost and not _path_can_cost(graph, p, entry.cost):
            v.append(
                f"CostMismatch: entry {i} stores {entry.cost}, path recomputes to {rc}"
            )
    return VerificationReport(v)


def verify_coverage(
    exact: SolutionSet, approx: SolutionSet, eps: Epsilon
) -> tuple[bool, list[Cost]]:
    """True when every exact cost is epsilon-dominated by (or equal to) an
    approximate cost; otherwise the uncovered exact vectors come back."""
    if (exact.query.source, exact.query.target, exact.query.index) != (
        approx.query.source,
        approx.query.target,
        approx.query.index,
    ):
        raise QueryMismatch(
            f"exact set is for query {exact.query}, approximate for {approx.query}"
        )
    approx_costs = approx.costs()
    uncovered = [
        c
        for c in exact.costs()
        if not any(eps_covers(a, c, eps) for a in approx_costs)
    ]
    return (not uncovered, uncovered)


@dataclass(frozen=True)
class CardinalityStats:
    """Front-size summary at one epsilon; mean is kept raw and rounded."""

    count: int
    minimum: int
    maximum: int
    median: int
    mean: float
    mean_rounded: int
    excluded_timeouts: int


def _lower_median(sorted_values: Sequence) -> object:
    return sorted_values[(len(sorted_values) - 1) // 2]


def cardinality_stats(
    records: Sequence[BenchmarkRecord], at_eps: Epsilon | str
) -> CardinalityStats:
    """Min/max/median/mean cardinality over non-timeout records at one epsilon.

    The median is the lower middle element for even counts; the rounded mean
    rounds half up.
    """
    eps_text = at_eps.display() if isinstance(at_eps, Epsilon) else at_eps
    matching = [r for r in records if r.epsilon == eps_text]
    timeouts = sum(1 for r in matching if r.status == STATUS_TIMEOUT)
    cards = sorted(r.cardinality for r in matching if r.status != STATUS_TIMEOUT)
    if not cards:
        raise NoRecords(f"no usable records at epsilon {eps_text!r}")
    mean = sum(cards) / len(cards)
    return CardinalityStats(
        count=len(cards),
        minimum=cards[0],
        maximum=cards[-1],
        median=_lower_median(cards),
        mean=mean,
        mean_rounded=math.floor(mean + 0.5),
        excluded_timeouts=timeouts,
    )


@dataclass(frozen=True)
class ReductionStats:
    """Cardinality reduction against the epsilon-zero baseline, in percent.

    Both aggregations are reported: pooled over every counted query, and
    the average of per-benchmark-family values.
    """

    epsilon: str
    queries: int
    excluded_empty: int
    pooled_median_pct: float
    pooled_mean_pct: float
    family_median_avg_pct: float
    family_mean_avg_pct: float


def reduction_stats(records: Sequence[BenchmarkRecord]) -> list[ReductionStats]:
    """Per-epsilon reduction r = 1 - |front_eps| / |front_0| per query.

    Queries with an empty exact front are excluded (and counted); a query
    lacking a usable epsilon-zero record raises MissingBaseline.
    """
    zero_text = _fraction_text(Fraction(0))
    baseline: dict[tuple[str, int], int] = {}
    for r in records:
        if r.epsilon == zero_text and r.status != STATUS_TIMEOUT:
            baseline[(r.benchmark, r.query_index)] = r.cardinality
    eps_order: list[str] = []
    per_eps: dict[str, list[BenchmarkRecord]] = {}
    for r in records:
        if r.epsilon not in per_eps:
            per_eps[r.epsilon] = []
            eps_order.append(r.epsilon)
        per_eps[r.epsilon].append(r)
    out: list[ReductionStats] = []
    for eps_text in eps_order:
        reductions: list[float] = []
        by_family: dict[str, list[float]] = {}
        excluded = 0
        for r in per_eps[eps_text]:
            if r.status == STATUS_TIMEOUT:
                continue
            key = (r.benchmark, r.query_index)
            if key not in baseline:
                raise MissingBaseline(
                    f"query {r.query_index} of {r.benchmark} has no epsilon-zero record"
                )
            base = baseline[key]
            if base == 0:
                excluded += 1
                continue
            red = (1.0 - r.cardinality / base) * 100.0
            reductions.append(red)
            by_family.setdefault(r.benchmark, []).append(red)
        if not reductions:
            continue
        reductions.sort()
        fam_medians = [_lower_median(sorted(v)) for v in by_family.values()]
        fam_means = [sum(v) / len(v) for v in by_family.values()]
        out.append(
            ReductionStats(
                epsilon=eps_text,
                queries=len(reductions),
                excluded_empty=excluded,
                pooled_median_pct=_lower_median(reductions),
                pooled_mean_pct=sum(reductions) / len(reductions),
                family_median_avg_pct=sum(fam_medians) / len(fam_medians),
                family_mean_avg_pct=sum(fam_means) / len(fam_means),
            )
        )
    return out


@dataclass(frozen=True)
class AxisSpread:
    """Average max/min cost ratio along one objective axis."""

    objective: int
    average: float
    included: int
    excluded: int


def spread_stats(sets: Sequence[SolutionSet]) -> list[AxisSpread]:
    """Per-axis spread (front max / front min) averaged over queries.

    Empty fronts are excluded everywhere; a query whose front minimum is 0
    on an axis is excluded from that axis only.  An axis with no included
    queries raises AllExcluded.
    """
    if not sets:
        raise AllExcluded("no solution sets given")
    d = 0
    for ss in sets:
        if ss.entries:
            d = len(ss.entries[0].cost)
            break
    if d == 0:
        raise AllExcluded("every solution set is empty")
    out: list[AxisSpread] = []
    for k in range(d):
        ratios: list[float] = []
        excluded = 0
        for ss in sets:
            if not ss.entries:
                excluded += 1
                continue
            values = [e.cost[k] for e in ss.entries]
            lo, hi = min(values), max(values)
            if lo == 0:
                excluded += 1
                continue
            ratios.append(hi / lo)
        if not ratios:
            raise AllExcluded(f"axis {k}: every query excluded")
        out.append(AxisSpread(k, sum(ratios) / len(ratios), len(ratios), excluded))
    return out


def correlation_csv(graph: MosGraph, edge_filter: str | None = None) -> str:
    """Labeled CSV of the pairwise objective correlation matrix.

    edge_filter 'cycle'/'local' restricts to the matching NetMaker edge
    class; None uses every edge.  Undefined cells print NA.
    """
    names = [o.name for o in graph.objectives]
    if edge_filter is None:
        matrix = objective_correlation_matrix(graph)
    else:
        if edge_filter not in ("cycle", "local"):
            raise ValueError(f"edge_filter must be 'cycle' or 'local', got {edge_filter!r}")
        cycle_idx, local_idx = netmaker_edge_kinds(graph)
        chosen = cycle_idx if edge_filter == "cycle" else local_idx
        matrix = correlation_matrix_from_costs(
            [graph.edges[i][2] for i in chosen]
        )
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["objective"] + names)
    for name, row in zip(names, matrix):
        w.writerow([name] + ["NA" if r is None else f"{r:.6f}" for r in row])
    return buf.getvalue()


def records_to_csv(records: Sequence[BenchmarkRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORDS_HEADER)
    for r in records:
        w.writerow(
            [r.benchmark, r.query_index, r.epsilon, r.cardinality, f"{r.ms:.3f}", r.solver, r.status]
        )
    return buf.getvalue()


def read_records(path: str | Path) -> list[BenchmarkRecord]:
    """Parse a records CSV written by records_to_csv."""
    out: list[BenchmarkRecord] = []
    with open(path, newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(RECORDS_HEADER):
            raise NoRecords(f"unrecognized records header {header!r}")
        for row in reader:
            if len(row) != 7:
                raise NoRecords(f"bad records row {row!r}")
            out.append(
                BenchmarkRecord(
                    row[0], int(row[1]), row[2], int(row[3]), float(row[4]), row[5], row[6]
                )
            )
    return out


def cardinality_csv(stats: CardinalityStats, eps_text: str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["epsilon", "count", "min", "max", "median", "mean", "mean_rounded", "excluded_timeouts"])
    w.writerow(
        [
            eps_text,
            stats.count,
            stats.minimum,
            stats.maximum,
            stats.median,
            f"{stats.mean:.6f}",
            stats.mean_rounded,
            stats.excluded_timeouts,
        ]
    )
    return buf.getvalue()


def reduction_csv(stats: Sequence[ReductionStats]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        [
            "epsilon",
            "queries",
            "excluded_empty",
            "pooled_median_pct",
            "pooled_mean_pct",
            "family_median_avg_pct",
            "family_mean_avg_pct",
        ]
    )
    for s in stats:
        w.writerow(
            [
                s.epsilon,
                s.queries,
                s.excluded_empty,
                f"{s.pooled_median_pct:.3f}",
                f"{s.pooled_mean_pct:.3f}",
                f"{s.family_median_avg_pct:.3f}",
                f"{s.family_mean_avg_pct:.3f}",
            ]
        )
    return buf.getvalue()


def spread_csv(spreads: Sequence[AxisSpread], names: Sequence[str] | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["objective", "average_spread", "included", "excluded"])
    for s in spreads:
        label = names[s.objective] if names else str(s.objective + 1)
        w.writerow([label, f"{s.average:.6f}", s.included, s.excluded])
    return buf.getvalue()

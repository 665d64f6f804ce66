"""Benchmark toolkit for exact and epsilon-approximate multi-objective
shortest-path search: deterministic instance generators, ingestion of
real-data families, label-setting solvers, and the evaluation protocol."""
from .convert import (
    ClearanceRoadmap,
    ElevationTable,
    GuardGrid,
    clearance_penalty,
    extend_dimacs,
    extract_connected_subgraph,
    guards_to_graph,
    panda_apply_clearance,
    parse_dimacs,
    parse_guards_map,
    read_elevation,
    read_roadmap,
    write_guards_map,
)
from .core import (
    Cost,
    Epsilon,
    MosGraph,
    Objective,
    Query,
    SolutionEntry,
    SolutionSet,
    dominates,
    eps_covers,
    eps_dominates,
    objective_correlation_matrix,
    pareto_filter,
    path_cost,
    pearson,
    weakly_dominates,
)
from .formats import (
    read_graph,
    read_queries,
    read_solutions,
    write_graph,
    write_queries,
    write_solutions,
)
from .generate import (
    GridSpec,
    NetMakerSpec,
    generate_grid,
    generate_netmaker,
    netmaker_edge_kinds,
    sample_netmaker_queries,
)
from .protocol import (
    BenchmarkRecord,
    EpsilonGrid,
    cardinality_stats,
    correlation_csv,
    reduction_stats,
    run_benchmark,
    spread_stats,
    verify_coverage,
    verify_solutions,
)
from .solve import (
    HeuristicTable,
    SearchLabel,
    brute_force_pareto,
    dijkstra_bound,
    ideal_point_heuristic,
    solve_approx,
    solve_exact,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkRecord",
    "ClearanceRoadmap",
    "Cost",
    "ElevationTable",
    "Epsilon",
    "EpsilonGrid",
    "GridSpec",
    "GuardGrid",
    "HeuristicTable",
    "MosGraph",
    "NetMakerSpec",
    "Objective",
    "Query",
    "SearchLabel",
    "SolutionEntry",
    "SolutionSet",
    "brute_force_pareto",
    "cardinality_stats",
    "clearance_penalty",
    "correlation_csv",
    "dijkstra_bound",
    "dominates",
    "eps_covers",
    "eps_dominates",
    "extend_dimacs",
    "extract_connected_subgraph",
    "generate_grid",
    "generate_netmaker",
    "guards_to_graph",
    "ideal_point_heuristic",
    "netmaker_edge_kinds",
    "objective_correlation_matrix",
    "panda_apply_clearance",
    "pareto_filter",
    "parse_dimacs",
    "parse_guards_map",
    "path_cost",
    "pearson",
    "read_elevation",
    "read_graph",
    "read_queries",
    "read_roadmap",
    "read_solutions",
    "reduction_stats",
    "run_benchmark",
    "sample_netmaker_queries",
    "solve_approx",
    "solve_exact",
    "spread_stats",
    "verify_coverage",
    "verify_solutions",
    "weakly_dominates",
    "write_graph",
    "write_guards_map",
    "write_queries",
    "write_solutions",
]

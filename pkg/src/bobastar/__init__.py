"""Bi-objective point-to-point shortest paths on two-cost graphs.

Finds the full cost-unique Pareto front between two states of a directed
graph carrying two independent non-negative integer costs per arc.  The
workhorses are a watermark-pruned best-first engine, its enhanced variant
(bound breaks, early suffix splicing, cross tuning), and a bi-directional
pairing of the two; a brute-force oracle backs the test suite.
"""

from .boba import SolveResult, merge_fronts, solve
from .graph import (
    INF,
    BiGraph,
    DimacsError,
    TopologyMismatchError,
    build_bigraph,
    parse_dimacs_gr,
    write_dimacs_gr,
)
from .heuristics import HeuristicSet, compute_all_heuristics
from .oracle import pareto_oracle, pareto_oracle_with_paths
from .search import Engine, RunMetrics, SharedBounds, make_profile

__version__ = "0.1.0"

__all__ = [
    "INF",
    "BiGraph",
    "DimacsError",
    "Engine",
    "HeuristicSet",
    "RunMetrics",
    "SharedBounds",
    "SolveResult",
    "TopologyMismatchError",
    "build_bigraph",
    "compute_all_heuristics",
    "make_profile",
    "merge_fronts",
    "pareto_oracle",
    "pareto_oracle_with_paths",
    "parse_dimacs_gr",
    "solve",
    "write_dimacs_gr",
    "__version__",
]

from .config import SearchConfig, SearchStats
from .engine import LocalSearch, SolveResult, paws_update, solve
from .intervals import (
    ClauseDomain,
    IntervalPartition,
    build_interval_partition,
    candidate_values,
    clause_domain,
    satisfying_domain_clause,
)
from .select import select_operation
from .state import BoolFlip, CompiledFormula, RealOp, SearchState, init_assignment, make_of, score_of, weighted_cost

__all__ = [
    "BoolFlip",
    "ClauseDomain",
    "CompiledFormula",
    "IntervalPartition",
    "LocalSearch",
    "RealOp",
    "SearchConfig",
    "SearchState",
    "SearchStats",
    "SolveResult",
    "build_interval_partition",
    "candidate_values",
    "clause_domain",
    "init_assignment",
    "make_of",
    "paws_update",
    "satisfying_domain_clause",
    "score_of",
    "select_operation",
    "solve",
    "weighted_cost",
]

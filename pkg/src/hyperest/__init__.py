"""Hyperedge counting in d-uniform hypergraphs from subset queries alone."""

from .coarse import CoarseResult, coarse_estimate, verify_estimate
from .engine import (ConstantsProfile, EstimatorState, audit_state, estimate_hyperedges, make_profile,
                     run_coarse_phase, run_estimator, run_exact_phase, run_sparsify_phase)
from .exact import ExactOutcome, exact_count_or_exceeds
from .hypergraph import (GeneratorSpec, Hypergraph, HypergraphError, PartiteTuple, brute_count,
                         brute_ordered_count, generate, ordered_count, read_hypergraph, write_hypergraph)
from .importance import WeightedEstimate, importance_sample
from .oracles import OracleError, OracleHandle, QueryStats
from .sparsify import Coloring, HdHash, count_properly_colored, sparsify

__all__ = [
    "CoarseResult", "Coloring", "ConstantsProfile", "EstimatorState", "ExactOutcome", "GeneratorSpec",
    "HdHash", "Hypergraph", "HypergraphError", "OracleError", "OracleHandle", "PartiteTuple",
    "QueryStats", "WeightedEstimate", "audit_state", "brute_count", "brute_ordered_count",
    "coarse_estimate", "count_properly_colored", "estimate_hyperedges", "exact_count_or_exceeds",
    "generate", "importance_sample", "make_profile", "ordered_count", "read_hypergraph",
    "run_coarse_phase", "run_estimator", "run_exact_phase", "run_sparsify_phase", "sparsify",
    "verify_estimate", "write_hypergraph",
]

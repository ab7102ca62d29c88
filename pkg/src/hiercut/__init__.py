"""Divisive hierarchical community detection with pluggable edge-removal criteria."""

from .errors import (
    ConfigError,
    ContractViolation,
    CoverageError,
    DegenerateInputError,
    DependencyError,
    EdgeLookupError,
    EmptyPruneError,
    HiercutError,
    InsufficientDataError,
    NodeLookupError,
    ParseError,
    UndefinedInputError,
    UnreachableCutError,
)
from .graph import (
    Graph,
    GraphStats,
    Partition,
    build_graph,
    connected_components,
    dump_edge_list,
    load_graph,
    neighbors,
    parse_edge_list,
    parse_gml,
    stats,
    subgraph,
)
from .scoring import (
    Criterion,
    CriterionKind,
    EdgeScoreTable,
    INFINITE,
    LOCAL_INDEX_KINDS,
    all_criteria,
    edge_betweenness,
    edge_clustering_coefficient,
    local_index,
    rescore_after_removal,
    rescore_scope,
    score_all,
)
from .detect import Dendrogram, DetectionConfig, RemovalStep, cut, detect, select_edge
from .quality import ModularityReport, modularity, modularity_curve
from .pruning import PruneRecord, RemovedNode, prune, reattach, reattach_with_audit, stats_sweep
from .stattests import (
    PairedSeries,
    TestResult,
    paired_t_test,
    pearson,
    pearson_excluding_nonfinite,
    wilcoxon_signed_rank,
)

__all__ = [
    "ConfigError",
    "ContractViolation",
    "CoverageError",
    "DegenerateInputError",
    "DependencyError",
    "EdgeLookupError",
    "EmptyPruneError",
    "HiercutError",
    "InsufficientDataError",
    "NodeLookupError",
    "ParseError",
    "UndefinedInputError",
    "UnreachableCutError",
    "Graph",
    "GraphStats",
    "Partition",
    "build_graph",
    "connected_components",
    "dump_edge_list",
    "load_graph",
    "neighbors",
    "parse_edge_list",
    "parse_gml",
    "stats",
    "subgraph",
    "Criterion",
    "CriterionKind",
    "EdgeScoreTable",
    "INFINITE",
    "LOCAL_INDEX_KINDS",
    "all_criteria",
    "edge_betweenness",
    "edge_clustering_coefficient",
    "local_index",
    "rescore_after_removal",
    "rescore_scope",
    "score_all",
    "Dendrogram",
    "DetectionConfig",
    "RemovalStep",
    "cut",
    "detect",
    "select_edge",
    "ModularityReport",
    "modularity",
    "modularity_curve",
    "PruneRecord",
    "RemovedNode",
    "prune",
    "reattach",
    "reattach_with_audit",
    "stats_sweep",
    "PairedSeries",
    "TestResult",
    "paired_t_test",
    "pearson",
    "pearson_excluding_nonfinite",
    "wilcoxon_signed_rank",
]

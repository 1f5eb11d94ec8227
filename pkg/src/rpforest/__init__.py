"""Approximate k-nn search over random projection forests, with four
split-direction strategies, an exact brute-force oracle, and a benchmark CLI.
"""

from .core import Dataset, dispersion, euclidean_distance, project, random_unit_direction
from .forest import NeighborList, RpForest, build_forest, query_batch, query_knn, query_all_training
from .metrics import distance_error, missing_rate, time_run
from .oracle import all_true_neighbors, exact_knn
from .stats import TTestResult, two_sample_ttest
from .strategies import DirectionChoice, Method, StrategyConfig
from .tree import RpTree, TreeConfig, build_tree, traverse_to_leaf

__all__ = [
    "Dataset",
    "DirectionChoice",
    "Method",
    "NeighborList",
    "RpForest",
    "RpTree",
    "StrategyConfig",
    "TTestResult",
    "TreeConfig",
    "all_true_neighbors",
    "build_forest",
    "build_tree",
    "dispersion",
    "distance_error",
    "euclidean_distance",
    "exact_knn",
    "missing_rate",
    "project",
    "query_batch",
    "query_knn",
    "query_all_training",
    "random_unit_direction",
    "time_run",
    "traverse_to_leaf",
    "two_sample_ttest",
]

__version__ = "0.1.0"

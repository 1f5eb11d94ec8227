"""Search-quality metrics and wall-clock accounting.

Two quality measures over a truth table (exact k-nn) and a found table
(forest k-nn): the average missing rate (fraction of true neighbors not
retrieved) and the average distance error (mean excess of the found k-th
neighbor distance over the true k-th neighbor distance).
"""

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .forest import NeighborList


@dataclass
class EvalReport:
    missing_rate: float
    distance_error: float
    per_point_missed: np.ndarray
    excluded_rows: int
    build_time: float
    query_time: float
    run_metadata: dict = field(default_factory=dict)


def _check_tables(truth: Sequence[NeighborList], found: Sequence[NeighborList], k: int):
    if len(truth) != len(found):
        raise ValueError(f"row-count mismatch: truth has {len(truth)}, found has {len(found)}")
    if len(truth) == 0:
        raise ValueError("empty tables")
    for i, row in enumerate(truth):
        if len(row) != k:
            raise ValueError(f"truth row {i} has {len(row)} entries, expected k={k}")


def missing_rate(
    truth: Sequence[NeighborList], found: Sequence[NeighborList], k: int
) -> tuple[float, np.ndarray]:
    """Average missing rate: sum of per-point missed true neighbors over n*k."""
    _check_tables(truth, found, k)
    n = len(truth)
    missed = np.empty(n, dtype=np.intp)
    for i in range(n):
        missed[i] = np.setdiff1d(truth[i].ids, found[i].ids, assume_unique=True).size
    return float(missed.sum() / (n * k)), missed


def distance_error(
    truth: Sequence[NeighborList], found: Sequence[NeighborList], k: int
) -> tuple[float, int]:
    """Average excess of the found k-th distance over the true k-th distance.

    A found row shorter than k contributes its furthest available distance;
    empty found rows are excluded from the average and counted separately.
    Returns (mean error, number of excluded rows).
    """
    _check_tables(truth, found, k)
    errors = []
    excluded = 0
    for true_row, found_row in zip(truth, found):
        if len(found_row) == 0:
            excluded += 1
            continue
        d_true = true_row.distances[k - 1]
        d_found = found_row.distances[min(k, len(found_row)) - 1]
        errors.append(d_found - d_true)
    if not errors:
        return float("nan"), excluded
    return float(np.mean(errors)), excluded


def time_run(build: Callable[[], object], query_all: Callable[[], object]):
    """Wall-clock each phase on a monotonic clock; returns (build_s, query_s)."""
    t0 = time.perf_counter()
    build_result = build()
    t1 = time.perf_counter()
    query_result = query_all()
    t2 = time.perf_counter()
    return (t1 - t0, t2 - t1), (build_result, query_result)

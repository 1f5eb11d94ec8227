"""Random projection forest: T independently seeded trees, pooled at query time.

A query descends each tree to a leaf; the union of leaf members (deduplicated,
minus the query's own id if given) is ranked by Euclidean distance with ties
broken by ascending point id.
"""

from dataclasses import dataclass

import numpy as np

from .core import Dataset
from .tree import RpTree, TreeConfig, assign_leaves, build_tree, traverse_to_leaf


@dataclass
class NeighborList:
    """(id, distance) pairs sorted ascending by (distance, id)."""

    ids: np.ndarray
    distances: np.ndarray

    def __len__(self) -> int:
        return int(self.ids.size)


@dataclass
class RpForest:
    trees: list[RpTree]
    tree_config: TreeConfig
    data: Dataset
    master_seed: int | np.random.SeedSequence


def build_forest(
    data: Dataset,
    cfg: TreeConfig,
    n_trees: int,
    master_seed: int | np.random.SeedSequence,
) -> RpForest:
    """Build n_trees trees, tree t seeded from child stream t of master_seed.

    Child streams are spawned from the master seed, so tree t is identical
    regardless of how many trees follow it and trees can be built in parallel.
    """
    if n_trees < 1:
        raise ValueError(f"need at least 1 tree, got {n_trees}")
    if isinstance(master_seed, np.random.SeedSequence):
        ss = master_seed
    else:
        ss = np.random.SeedSequence(master_seed)
    children = ss.spawn(n_trees)
    trees = [build_tree(data, cfg, np.random.default_rng(child)) for child in children]
    return RpForest(trees=trees, tree_config=cfg, data=data, master_seed=master_seed)


def _rank_candidates(data: Dataset, candidates: np.ndarray, x, k: int) -> NeighborList:
    if candidates.size == 0:
        return NeighborList(ids=np.empty(0, dtype=np.intp), distances=np.empty(0))
    diffs = data.points[candidates] - np.asarray(x, dtype=np.float64)
    dists = np.sqrt(np.einsum("ij,ij->i", diffs, diffs))
    # candidates are sorted ascending, so a stable sort on distance alone
    # breaks ties by ascending id
    order = np.argsort(dists, kind="stable")[:k]
    return NeighborList(ids=candidates[order], distances=dists[order])


def candidate_ids(forest: RpForest, x, self_id: int | None = None) -> np.ndarray:
    """Deduplicated union of leaf members over all trees, sorted ascending."""
    pools = [traverse_to_leaf(tree, x).member_ids for tree in forest.trees]
    candidates = np.unique(np.concatenate(pools))
    if self_id is not None:
        candidates = candidates[candidates != self_id]
    return candidates


def query_knn(forest: RpForest, x, k: int, self_id: int | None = None) -> NeighborList:
    """Approximate k-nn: rank the defeatist candidate pool by distance.

    Returns fewer than k entries when the pool is smaller than k.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    candidates = candidate_ids(forest, x, self_id)
    return _rank_candidates(forest.data, candidates, x, k)


def query_all_training(forest: RpForest, k: int) -> list[NeighborList]:
    """query_knn for every dataset point with self-exclusion, batched.

    Training points route to the leaf that holds them, so each point's
    candidate pool is read off the trees' stored leaf memberships directly.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    data = forest.data
    members = [[leaf.member_ids for leaf in tree.leaves] for tree in forest.trees]
    leaf_of = [tree.leaf_of for tree in forest.trees]
    results = []
    for i in range(data.n):
        pools = [m[lo[i]] for m, lo in zip(members, leaf_of)]
        candidates = np.unique(np.concatenate(pools))
        candidates = candidates[candidates != i]
        results.append(_rank_candidates(data, candidates, data.points[i], k))
    return results


def query_batch(
    forest: RpForest, queries: np.ndarray, k: int, self_ids: np.ndarray | None = None
) -> list[NeighborList]:
    """query_knn for a batch of arbitrary query points (vectorized routing)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    queries = np.asarray(queries, dtype=np.float64)
    leaf_idx = np.column_stack([assign_leaves(tree, queries) for tree in forest.trees])
    members = [[leaf.member_ids for leaf in tree.leaves] for tree in forest.trees]
    results = []
    for q in range(queries.shape[0]):
        pools = [members[t][leaf_idx[q, t]] for t in range(len(forest.trees))]
        candidates = np.unique(np.concatenate(pools))
        if self_ids is not None:
            candidates = candidates[candidates != self_ids[q]]
        results.append(_rank_candidates(forest.data, candidates, queries[q], k))
    return results

"""Random projection tree: recursive build and root-to-leaf routing.

Internal nodes store the projection direction r and split point c used at
build time; routing a query reuses exactly the same comparison (x.r < c goes
left), so every training point routes back to its own leaf.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import Dataset
from .strategies import DegenerateNodeError, StrategyConfig, choose_direction


class DegenerateSplitError(Exception):
    """All projected values coincide; no split point separates them."""


@dataclass(frozen=True)
class TreeConfig:
    leaf_capacity: int = 20
    strategy: StrategyConfig = field(default_factory=StrategyConfig)
    max_degenerate_retries: int = 3

    def __post_init__(self):
        if self.leaf_capacity < 2:
            raise ValueError(f"leaf_capacity must be >= 2, got {self.leaf_capacity}")
        if self.max_degenerate_retries < 0:
            raise ValueError("max_degenerate_retries must be >= 0")


@dataclass
class Leaf:
    member_ids: np.ndarray
    index: int  # position in RpTree.leaves


@dataclass
class Internal:
    direction: np.ndarray
    split: float
    left: "Internal | Leaf"
    right: "Internal | Leaf"


@dataclass
class RpTree:
    root: Internal | Leaf
    leaves: list[Leaf]
    leaf_of: np.ndarray  # training point id -> leaf index
    config: TreeConfig


def split_at_quantile(values: np.ndarray, u: float) -> float:
    """Empirical u-quantile by linear interpolation between order statistics."""
    pos = u * (values.size - 1)
    lo = int(pos)
    if lo + 1 >= values.size:
        return float(np.max(values))
    frac = pos - lo
    a, b = np.partition(values, (lo, lo + 1))[lo : lo + 2]
    return float(a + frac * (b - a))


def pick_split_point(values: np.ndarray, rng: np.random.Generator) -> float:
    """Draw u uniform on [0.25, 0.75] and return that quantile of the values."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        raise ValueError(f"need at least 2 values to split, got {v.size}")
    if v.max() == v.min():
        raise DegenerateSplitError("all projected values are equal")
    u = rng.uniform(0.25, 0.75)
    return split_at_quantile(v, u)


def build_tree(data: Dataset, cfg: TreeConfig, rng: np.random.Generator) -> RpTree:
    """Recursively partition the dataset into an rpTree.

    Nodes with fewer than leaf_capacity points become leaves. Degenerate
    splits (an empty child, or all projected values equal) are retried with a
    fresh direction up to max_degenerate_retries times, then the node is
    forced into a leaf so duplicate-heavy data still terminates.
    """
    if data.n == 0:
        raise ValueError("dataset is empty")
    leaves: list[Leaf] = []
    leaf_of = np.empty(data.n, dtype=np.intp)

    def make_leaf(ids: np.ndarray) -> Leaf:
        leaf = Leaf(member_ids=ids, index=len(leaves))
        leaves.append(leaf)
        leaf_of[ids] = leaf.index
        return leaf

    def partition(ids: np.ndarray) -> Internal | Leaf:
        if ids.size < cfg.leaf_capacity:
            return make_leaf(ids)
        pts = data.points[ids]
        for _ in range(cfg.max_degenerate_retries + 1):
            try:
                choice = choose_direction(pts, cfg.strategy, rng)
            except DegenerateNodeError:
                break  # identical points: retrying cannot help
            values = pts @ choice.direction
            try:
                c = pick_split_point(values, rng)
            except DegenerateSplitError:
                continue
            go_left = values < c
            if go_left.all() or not go_left.any():
                continue
            left = partition(ids[go_left])
            right = partition(ids[~go_left])
            return Internal(direction=choice.direction, split=c, left=left, right=right)
        return make_leaf(ids)

    root = partition(data.ids)
    return RpTree(root=root, leaves=leaves, leaf_of=leaf_of, config=cfg)


def traverse_to_leaf(tree: RpTree, x) -> Leaf:
    """Route a query point root-to-leaf: descend left iff x.r < c."""
    x = np.asarray(x, dtype=np.float64)
    node = tree.root
    while isinstance(node, Internal):
        if x.shape[0] != node.direction.shape[0]:
            raise ValueError(
                f"dimension mismatch: query has d={x.shape[0]}, "
                f"tree has d={node.direction.shape[0]}"
            )
        node = node.left if float(x @ node.direction) < node.split else node.right
    return node


def assign_leaves(tree: RpTree, points: np.ndarray) -> np.ndarray:
    """Route a batch of query points; returns the leaf index for each row."""
    points = np.asarray(points, dtype=np.float64)
    out = np.empty(points.shape[0], dtype=np.intp)

    def descend(node: Internal | Leaf, rows: np.ndarray) -> None:
        if rows.size == 0:
            return
        if isinstance(node, Leaf):
            out[rows] = node.index
            return
        go_left = points[rows] @ node.direction < node.split
        descend(node.left, rows[go_left])
        descend(node.right, rows[~go_left])

    descend(tree.root, np.arange(points.shape[0]))
    return out

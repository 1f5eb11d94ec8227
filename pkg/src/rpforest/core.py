"""Numeric primitives shared by the tree, forest and evaluation code."""

from dataclasses import dataclass

import numpy as np

UNIT_NORM_TOL = 1e-9


@dataclass(frozen=True)
class Dataset:
    """An n x d matrix of points with stable integer ids (row order)."""

    points: np.ndarray
    ids: np.ndarray

    @classmethod
    def from_points(cls, points) -> "Dataset":
        pts = np.ascontiguousarray(points, dtype=np.float64)
        if pts.ndim != 2:
            raise ValueError(f"points must be a 2-d matrix, got ndim={pts.ndim}")
        n, d = pts.shape
        if n < 1 or d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain NaN or Inf")
        return cls(points=pts, ids=np.arange(n))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


def project(points, direction) -> np.ndarray:
    """Project points onto a direction: one dot product per point."""
    pts = np.asarray(points, dtype=np.float64)
    r = np.asarray(direction, dtype=np.float64)
    if pts.shape[-1] != r.shape[0]:
        raise ValueError(
            f"dimension mismatch: points have d={pts.shape[-1]}, direction has d={r.shape[0]}"
        )
    return pts @ r


def euclidean_distance(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def dispersion(values) -> float:
    """Spread of projected values: sample standard deviation (divisor m-1).

    A single value has zero spread by convention.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("dispersion of an empty set is undefined")
    if v.size == 1:
        return 0.0
    return float(np.std(v, ddof=1))


def random_unit_direction(d: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random direction on the (d-1)-sphere: normalized Gaussian draw."""
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    while True:
        v = rng.standard_normal(d)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            return v / norm

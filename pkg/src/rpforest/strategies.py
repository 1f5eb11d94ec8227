"""Split-direction selection strategies.

Four ways to pick the direction a tree node projects onto before splitting:

1. one uniform random direction,
2. the best of n_try random directions by dispersion,
3. method 2 followed by noise-perturbation tuning stages,
4. the first principal component of the node's points.
"""

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .core import dispersion, project, random_unit_direction


class Method(IntEnum):
    RANDOM_DIRECTION = 1
    MAX_DISPERSION = 2
    NOISE_TUNED_DISPERSION = 3
    PRINCIPAL_COMPONENT = 4


class DegenerateNodeError(Exception):
    """All points in the node coincide; no split direction exists."""


@dataclass(frozen=True)
class StrategyConfig:
    method: Method = Method.RANDOM_DIRECTION
    n_try: int = 3
    noise_sigmas: tuple[float, ...] = (0.1, 0.01)

    def __post_init__(self):
        if self.n_try < 1:
            raise ValueError(f"n_try must be >= 1, got {self.n_try}")
        sigmas = tuple(self.noise_sigmas)
        if any(s <= 0 for s in sigmas):
            raise ValueError(f"noise sigmas must be positive, got {sigmas}")
        if any(a <= b for a, b in zip(sigmas, sigmas[1:])):
            raise ValueError(f"noise sigmas must be strictly decreasing, got {sigmas}")
        object.__setattr__(self, "noise_sigmas", sigmas)


@dataclass
class DirectionChoice:
    direction: np.ndarray
    dispersion: float
    candidates_evaluated: int
    # dispersion of the incumbent after each tuning stage (method 3 only)
    stage_dispersions: tuple[float, ...] = field(default_factory=tuple)


def choose_direction_method1(points: np.ndarray, rng: np.random.Generator) -> DirectionChoice:
    """Pick one random direction, ignoring dispersion."""
    r = random_unit_direction(points.shape[1], rng)
    return DirectionChoice(r, dispersion(project(points, r)), candidates_evaluated=1)


def choose_direction_method2(
    points: np.ndarray, cfg: StrategyConfig, rng: np.random.Generator
) -> DirectionChoice:
    """Try n_try random directions, keep the one with maximum dispersion.

    Ties go to the earliest draw.
    """
    best_r = None
    best_disp = -1.0
    for _ in range(cfg.n_try):
        r = random_unit_direction(points.shape[1], rng)
        disp = dispersion(project(points, r))
        if disp > best_disp:
            best_r, best_disp = r, disp
    return DirectionChoice(best_r, best_disp, candidates_evaluated=cfg.n_try)


def choose_direction_method3(
    points: np.ndarray, cfg: StrategyConfig, rng: np.random.Generator
) -> DirectionChoice:
    """Method 2 plus tuning: perturb the incumbent with Gaussian noise.

    Each tuning stage draws n_try perturbations of the current best direction
    (noise scale from cfg.noise_sigmas, re-normalized to unit length) and keeps
    the incumbent unless a perturbation strictly improves dispersion, so the
    per-stage dispersion sequence is non-decreasing.
    """
    best = choose_direction_method2(points, cfg, rng)
    direction, disp = best.direction, best.dispersion
    evaluated = best.candidates_evaluated
    stages = [disp]
    for sigma in cfg.noise_sigmas:
        for _ in range(cfg.n_try):
            cand = direction + rng.normal(scale=sigma, size=direction.shape)
            norm = np.linalg.norm(cand)
            if norm <= 1e-12:
                continue
            cand /= norm
            cand_disp = dispersion(project(points, cand))
            if cand_disp > disp:
                direction, disp = cand, cand_disp
        evaluated += cfg.n_try
        stages.append(disp)
    return DirectionChoice(direction, disp, evaluated, stage_dispersions=tuple(stages))


def choose_direction_method4(
    points: np.ndarray, rng: np.random.Generator | None = None
) -> DirectionChoice:
    """First principal component of the node's points (max projected variance).

    Sign is normalized so the first nonzero component is positive. Raises
    DegenerateNodeError when all points coincide (zero covariance).
    """
    centered = points - points.mean(axis=0)
    if np.max(np.abs(centered)) == 0.0:
        raise DegenerateNodeError("all node points are identical")
    cov = centered.T @ centered / (points.shape[0] - 1)
    _, vecs = np.linalg.eigh(cov)
    pc = vecs[:, -1]
    nonzero = np.nonzero(np.abs(pc) > 1e-12)[0]
    if pc[nonzero[0]] < 0:
        pc = -pc
    return DirectionChoice(pc, dispersion(project(points, pc)), candidates_evaluated=1)


def choose_direction(
    points: np.ndarray, cfg: StrategyConfig, rng: np.random.Generator
) -> DirectionChoice:
    if cfg.method == Method.RANDOM_DIRECTION:
        return choose_direction_method1(points, rng)
    if cfg.method == Method.MAX_DISPERSION:
        return choose_direction_method2(points, cfg, rng)
    if cfg.method == Method.NOISE_TUNED_DISPERSION:
        return choose_direction_method3(points, cfg, rng)
    if cfg.method == Method.PRINCIPAL_COMPONENT:
        return choose_direction_method4(points, rng)
    raise ValueError(f"unknown method: {cfg.method!r}")

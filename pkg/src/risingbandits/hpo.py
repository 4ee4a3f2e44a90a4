"""Toy hyperparameter-optimization objectives and search strategies.

These stand in for a real tuning engine: each objective is a cheap synthetic
loss over a small box, and the search strategies (uniform random, and a
minimal density-ratio sampler) produce the familiar rising, saturating
best-so-far reward shape without any ML dependencies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

OBJECTIVE_NAMES = ("sphere", "rosenbrock", "quadratic")
SEARCH_STRATEGIES = ("random", "density_estimator")

# Random exploration before the density model has anything to fit.
_WARMUP_TRIALS = 8
_N_CANDIDATES = 24


@dataclass
class ToyObjective:
    """A synthetic loss over the box [-halfwidth, halfwidth]^dim with minimum 0."""

    name: str
    dimension: int
    halfwidth: float
    _optimum: np.ndarray | None = None
    _matrix: np.ndarray | None = None

    def loss(self, x: np.ndarray) -> float:
        if self.name == "sphere":
            return float(np.sum((x - self._optimum) ** 2))
        if self.name == "rosenbrock":
            return float(
                np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2)
            )
        if self.name == "quadratic":
            d = x - self._optimum
            return float(d @ self._matrix @ d)
        raise ValueError(f"unknown objective {self.name!r}")


def make_objective(name: str, dimension: int, rng: np.random.Generator) -> ToyObjective:
    if name not in OBJECTIVE_NAMES:
        raise ValueError(f"unknown objective {name!r}, expected one of {OBJECTIVE_NAMES}")
    if not (2 <= dimension <= 5):
        raise ValueError(f"objective dimension must be in [2, 5], got {dimension}")
    if name == "sphere":
        obj = ToyObjective(name, dimension, halfwidth=5.0)
        obj._optimum = rng.uniform(-2.0, 2.0, size=dimension)
    elif name == "rosenbrock":
        obj = ToyObjective(name, dimension, halfwidth=2.0)
    else:  # quadratic with a seeded optimum and random PD matrix
        obj = ToyObjective(name, dimension, halfwidth=3.0)
        m = rng.normal(size=(dimension, dimension))
        obj._matrix = m.T @ m / dimension + 0.1 * np.eye(dimension)
        obj._optimum = rng.uniform(-2.0, 2.0, size=dimension)
    return obj


@dataclass
class SearchState:
    """Trial history of one tuning process."""

    points: list = field(default_factory=list)
    losses: list = field(default_factory=list)


def propose(
    state: SearchState,
    objective: ToyObjective,
    strategy: str,
    rng: np.random.Generator,
) -> np.ndarray:
    """Pick the next trial point according to the configured strategy."""
    hw = objective.halfwidth
    dim = objective.dimension
    if strategy == "random" or len(state.points) < _WARMUP_TRIALS:
        return rng.uniform(-hw, hw, size=dim)
    if strategy != "density_estimator":
        raise ValueError(f"unknown search strategy {strategy!r}")

    # Split trials at the median loss, model the good half with an
    # axis-aligned Gaussian kernel density, and keep the candidate with the
    # best good/bad density ratio.
    order = np.argsort(state.losses, kind="stable")
    pts = np.asarray(state.points)
    n_good = max(2, len(order) // 2)
    good = pts[order[:n_good]]
    bad = pts[order[n_good:]]
    if len(bad) < 2:
        return rng.uniform(-hw, hw, size=dim)

    good_bw = _bandwidths(good, hw)
    bad_bw = _bandwidths(bad, hw)

    centers = good[rng.integers(0, len(good), size=_N_CANDIDATES)]
    candidates = centers + rng.normal(size=(_N_CANDIDATES, dim)) * good_bw
    candidates = np.clip(candidates, -hw, hw)
    scores = _log_density(candidates, good, good_bw) - _log_density(candidates, bad, bad_bw)
    return candidates[int(np.argmax(scores))]


def _bandwidths(points: np.ndarray, halfwidth: float) -> np.ndarray:
    # Scott-style per-dimension bandwidth with a floor so the kernel never collapses.
    n = len(points)
    sigma = np.std(points, axis=0)
    return np.maximum(sigma * n ** (-0.2), 1e-3 * halfwidth)


def _log_density(query: np.ndarray, data: np.ndarray, bw: np.ndarray) -> np.ndarray:
    # Product of per-axis Gaussian KDEs, evaluated in log space.
    diff = (query[:, None, :] - data[None, :, :]) / bw
    log_kernels = -0.5 * np.sum(diff**2, axis=2) - np.sum(np.log(bw))
    m = np.max(log_kernels, axis=1)
    return m + np.log(np.sum(np.exp(log_kernels - m[:, None]), axis=1) / len(data))

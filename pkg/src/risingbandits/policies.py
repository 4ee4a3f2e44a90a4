"""Baseline selection policies sharing one interface.

A policy maps the observed arm states and the step index to the next arm to
pull.  Policies only ever see observed histories, never ground-truth curves.
Ties break towards the lowest arm id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bandit import ArmState


class Policy:
    name = "policy"

    def reset(self, rng: np.random.Generator) -> None:
        """Install the run-local RNG stream; deterministic policies ignore it."""

    def select(self, states: list[ArmState], t: int) -> int:
        raise NotImplementedError


class AveragePolicy(Policy):
    """Round-robin: pull each arm in turn, T/K pulls each over a full horizon."""

    name = "average"

    def select(self, states: list[ArmState], t: int) -> int:
        return (t - 1) % len(states) + 1


def _mean(state: ArmState) -> float:
    return sum(state.history) / state.pulls


def _argmax(scores: list[float]) -> int:
    best, best_score = 1, scores[0]
    for idx, score in enumerate(scores[1:], start=2):
        if score > best_score:
            best, best_score = idx, score
    return best


def _first_unpulled(states: list[ArmState]) -> int | None:
    for st in states:
        if st.pulls == 0:
            return st.arm_id
    return None


@dataclass
class UCBPolicy(Policy):
    """Stationary-bandit baseline: empirical mean plus an exploration bonus."""

    exploration_coefficient: float = math.sqrt(2.0)
    name = "ucb"

    def __post_init__(self) -> None:
        if self.exploration_coefficient <= 0.0:
            raise ValueError("exploration coefficient must be positive")

    def select(self, states: list[ArmState], t: int) -> int:
        forced = _first_unpulled(states)
        if forced is not None:
            return forced
        scores = [
            _mean(st) + self.exploration_coefficient * math.sqrt(math.log(t) / st.pulls)
            for st in states
        ]
        return _argmax(scores)


@dataclass
class SoftmaxPolicy(Policy):
    """Samples arms with probability proportional to exp(mean / temperature)."""

    temperature: float = 0.1
    name = "softmax"

    def __post_init__(self) -> None:
        if self.temperature <= 0.0:
            raise ValueError("temperature must be positive")
        self._rng: np.random.Generator | None = None

    def reset(self, rng: np.random.Generator) -> None:
        self._rng = rng

    def select(self, states: list[ArmState], t: int) -> int:
        forced = _first_unpulled(states)
        if forced is not None:
            return forced
        logits = np.array([_mean(st) / self.temperature for st in states])
        logits -= logits.max()
        probs = np.exp(logits)
        probs /= probs.sum()
        return int(self._rng.choice(len(states), p=probs)) + 1


@dataclass
class ThompsonPolicy(Policy):
    """Beta-Bernoulli sampling with fractional pseudo-counts.

    Each reward r contributes r to the success count and 1 - r to the failure
    count, the standard continuous-reward adaptation of Thompson sampling.
    """

    prior_alpha: float = 1.0
    prior_beta: float = 1.0
    name = "thompson"

    def __post_init__(self) -> None:
        if self.prior_alpha <= 0.0 or self.prior_beta <= 0.0:
            raise ValueError("Beta prior parameters must be positive")
        self._rng: np.random.Generator | None = None

    def reset(self, rng: np.random.Generator) -> None:
        self._rng = rng

    def select(self, states: list[ArmState], t: int) -> int:
        draws = []
        for st in states:
            successes = sum(st.history)
            failures = st.pulls - successes
            draws.append(self._rng.beta(self.prior_alpha + successes, self.prior_beta + failures))
        return _argmax(draws)


@dataclass
class RisingBanditPolicy(Policy):
    """Marker for the elimination algorithm; the harness delegates whole runs.

    ``growth`` / ``smooth_window`` override the run configuration when set.
    """

    growth: str | None = None
    smooth_window: int | None = None
    name = "rising_bandit"


POLICY_NAMES = ("average", "ucb", "softmax", "thompson", "rising_bandit")


def make_policy(name: str, **params) -> Policy:
    """Build a policy by name; unknown names or parameters raise ValueError."""
    factories = {
        "average": AveragePolicy,
        "ucb": UCBPolicy,
        "softmax": SoftmaxPolicy,
        "thompson": ThompsonPolicy,
        "rising_bandit": RisingBanditPolicy,
    }
    if name not in factories:
        raise ValueError(f"unknown policy {name!r}, expected one of {POLICY_NAMES}")
    try:
        return factories[name](**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for policy {name!r}: {exc}") from exc

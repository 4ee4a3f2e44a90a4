"""Stateful arm processes and instance construction.

An arm process yields a non-decreasing best-so-far reward sequence in [0, 1]
on successive pulls, together with a positive per-pull cost.  Three kinds are
provided: exact curve playback, noisy (monotone but non-concave) playback,
and a toy hyperparameter-tuning process.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hpo
from .curves import RewardCurve


class ConfigurationError(ValueError):
    """Invalid instance or experiment configuration."""


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


class ArmProcess:
    """Base class: a reward source with best-so-far semantics.

    ``peek_cost`` returns the exact cost the next ``pull`` will incur without
    consuming randomness, which lets budgeted runs refuse a pull that would
    overshoot.
    """

    def __init__(self) -> None:
        self.pulls_so_far = 0
        self._best = 0.0

    def pull(self) -> tuple[float, float]:
        """Consume one unit of resource; return (reward, cost)."""
        cost = self.peek_cost()
        self.pulls_so_far += 1
        raw = self._raw_reward(self.pulls_so_far)
        self._best = max(self._best, _clamp01(raw)) if self.pulls_so_far > 1 else _clamp01(raw)
        self._advance_cost()
        return self._best, cost

    def peek_cost(self) -> float:
        raise NotImplementedError

    def _raw_reward(self, n: int) -> float:
        raise NotImplementedError

    def _advance_cost(self) -> None:
        pass


class CurveArm(ArmProcess):
    """Plays back a reward curve exactly, at a constant per-pull cost."""

    def __init__(self, curve: RewardCurve, cost: float = 1.0) -> None:
        super().__init__()
        if cost <= 0.0:
            raise ConfigurationError(f"per-pull cost must be positive, got {cost}")
        self.curve = curve
        self.cost = float(cost)

    def peek_cost(self) -> float:
        return self.cost

    def _raw_reward(self, n: int) -> float:
        return self.curve.eval(n)


class NoisyCurveArm(ArmProcess):
    """Curve playback with downward uniform noise, kept monotone.

    Output is max(previous output, clamp(curve(n) - U(0, amplitude))), which
    preserves the best-so-far invariant while breaking exact concavity.
    """

    def __init__(
        self,
        curve: RewardCurve,
        noise_amplitude: float,
        rng: np.random.Generator,
        cost: float = 1.0,
    ) -> None:
        super().__init__()
        if noise_amplitude < 0.0:
            raise ConfigurationError(f"noise amplitude must be >= 0, got {noise_amplitude}")
        if cost <= 0.0:
            raise ConfigurationError(f"per-pull cost must be positive, got {cost}")
        self.curve = curve
        self.noise_amplitude = float(noise_amplitude)
        self.cost = float(cost)
        self._rng = rng

    def peek_cost(self) -> float:
        return self.cost

    def _raw_reward(self, n: int) -> float:
        return self.curve.eval(n) - self._rng.uniform(0.0, self.noise_amplitude)


class HpoArm(ArmProcess):
    """Toy tuning process: reward is the normalized best loss so far.

    Reward after n trials is 1 - (best_loss - global_min) / (first_loss -
    global_min), clamped to [0, 1]; all objectives here have global_min 0.
    Per-pull cost is mean_cost scaled by U(0.8, 1.2), pre-drawn so that
    ``peek_cost`` is exact.
    """

    def __init__(
        self,
        objective: str,
        dimension: int,
        rng: np.random.Generator,
        strategy: str = "random",
        mean_cost: float = 1.0,
    ) -> None:
        super().__init__()
        if strategy not in hpo.SEARCH_STRATEGIES:
            raise ConfigurationError(
                f"unknown search strategy {strategy!r}, expected one of {hpo.SEARCH_STRATEGIES}"
            )
        if mean_cost <= 0.0:
            raise ConfigurationError(f"mean cost must be positive, got {mean_cost}")
        self.strategy = strategy
        self.mean_cost = float(mean_cost)
        self._search_rng = rng
        self._cost_rng = np.random.Generator(np.random.PCG64(rng.integers(0, 2**63)))
        try:
            self.objective = hpo.make_objective(objective, dimension, rng)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from exc
        self._state = hpo.SearchState()
        self._first_loss: float | None = None
        self._best_loss = float("inf")
        self._next_cost = self.mean_cost * self._cost_rng.uniform(0.8, 1.2)

    def peek_cost(self) -> float:
        return self._next_cost

    def _advance_cost(self) -> None:
        self._next_cost = self.mean_cost * self._cost_rng.uniform(0.8, 1.2)

    def _raw_reward(self, n: int) -> float:
        point = hpo.propose(self._state, self.objective, self.strategy, self._search_rng)
        loss = self.objective.loss(point)
        self._state.points.append(point)
        self._state.losses.append(loss)
        if self._first_loss is None:
            self._first_loss = loss
        self._best_loss = min(self._best_loss, loss)
        if self._first_loss <= 0.0:
            return 1.0
        return 1.0 - self._best_loss / self._first_loss


@dataclass(frozen=True)
class CurveArmSpec:
    curve: RewardCurve
    cost: float = 1.0

    def build(self, rng: np.random.Generator) -> ArmProcess:
        return CurveArm(self.curve, cost=self.cost)


@dataclass(frozen=True)
class NoisyCurveArmSpec:
    curve: RewardCurve
    noise_amplitude: float
    cost: float = 1.0

    def build(self, rng: np.random.Generator) -> ArmProcess:
        return NoisyCurveArm(self.curve, self.noise_amplitude, rng, cost=self.cost)


@dataclass(frozen=True)
class HpoArmSpec:
    objective: str = "sphere"
    dimension: int = 2
    strategy: str = "random"
    mean_cost: float = 1.0

    def build(self, rng: np.random.Generator) -> ArmProcess:
        return HpoArm(
            self.objective,
            self.dimension,
            rng,
            strategy=self.strategy,
            mean_cost=self.mean_cost,
        )


ArmSpec = CurveArmSpec | NoisyCurveArmSpec | HpoArmSpec


@dataclass(frozen=True)
class InstanceSpec:
    """The K-arm problem definition: one spec per arm, in arm-id order."""

    arms: tuple[ArmSpec, ...]

    def __init__(self, arms) -> None:
        object.__setattr__(self, "arms", tuple(arms))

    @property
    def k(self) -> int:
        return len(self.arms)

    def curves(self) -> list[RewardCurve] | None:
        """Ground-truth curves, or None if any arm has no exact curve."""
        out = []
        for spec in self.arms:
            if not isinstance(spec, CurveArmSpec):
                return None
            out.append(spec.curve)
        return out


def make_instance(spec: InstanceSpec, seed: int | np.random.SeedSequence = 0) -> list[ArmProcess]:
    """Build the arm processes with one derived RNG stream per arm.

    Arm k (1-based) gets the stream spawned at key (k,) from the given seed,
    so adding or reordering other arms never perturbs its randomness.
    """
    if spec.k == 0:
        raise ConfigurationError("an instance needs at least one arm")
    base = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    arms = []
    for idx, arm_spec in enumerate(spec.arms, start=1):
        stream = np.random.SeedSequence(entropy=base.entropy, spawn_key=base.spawn_key + (idx,))
        try:
            arms.append(arm_spec.build(np.random.Generator(np.random.PCG64(stream))))
        except (ValueError, TypeError) as exc:
            raise ConfigurationError(f"arm {idx}: {exc}") from exc
    return arms

"""Ground-truth reward curves.

A reward curve maps a pull count n = 1, 2, ... to a deterministic reward in
[0, 1].  All curves are non-decreasing and bounded; the exponential and power
families are additionally concave, while the staircase family deliberately
violates concavity (it holds a plateau and then jumps).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


class RewardCurve:
    """Base class for deterministic reward functions of the pull count.

    Subclasses expose ``eval(n)`` for n >= 1 and a ``limit`` attribute or
    property giving the supremum the curve saturates towards.
    """

    limit: float

    def eval(self, n: int) -> float:
        raise NotImplementedError

    @staticmethod
    def _check_pull_index(n: int) -> None:
        if n < 1:
            raise ValueError(f"pull index must be >= 1, got {n}")


@dataclass(frozen=True)
class ExponentialCurve(RewardCurve):
    """r(n) = limit - (limit - initial) * decay**(n - 1)."""

    limit: float
    initial: float
    decay: float

    def __post_init__(self) -> None:
        if not (0.0 < self.initial <= self.limit <= 1.0):
            raise ValueError(
                f"exponential curve needs 0 < initial <= limit <= 1, "
                f"got initial={self.initial}, limit={self.limit}"
            )
        if not (0.0 < self.decay < 1.0):
            raise ValueError(f"exponential decay must lie in (0, 1), got {self.decay}")

    def eval(self, n: int) -> float:
        self._check_pull_index(n)
        return self.limit - (self.limit - self.initial) * self.decay ** (n - 1)


@dataclass(frozen=True)
class PowerCurve(RewardCurve):
    """r(n) = limit - scale * n**(-exponent)."""

    limit: float
    scale: float
    exponent: float

    def __post_init__(self) -> None:
        if self.scale <= 0.0 or self.exponent <= 0.0:
            raise ValueError(
                f"power curve needs scale > 0 and exponent > 0, "
                f"got scale={self.scale}, exponent={self.exponent}"
            )
        if self.limit - self.scale < 0.0 or self.limit > 1.0:
            raise ValueError(
                f"power curve needs 0 <= limit - scale and limit <= 1, "
                f"got limit={self.limit}, scale={self.scale}"
            )

    def eval(self, n: int) -> float:
        self._check_pull_index(n)
        return self.limit - self.scale * float(n) ** (-self.exponent)


@dataclass(frozen=True)
class TabulatedCurve(RewardCurve):
    """Explicit table of rewards; pulls beyond the table hold the last value."""

    values: tuple[float, ...]

    def __init__(self, values: Sequence[float]) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in values))
        if not self.values:
            raise ValueError("tabulated curve needs at least one value")
        for i, v in enumerate(self.values):
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"tabulated value {v} at position {i} outside [0, 1]")
            if i > 0 and v < self.values[i - 1]:
                raise ValueError(f"tabulated values must be non-decreasing, dip at position {i}")

    @property
    def limit(self) -> float:  # type: ignore[override]
        return self.values[-1]

    def eval(self, n: int) -> float:
        self._check_pull_index(n)
        return self.values[min(n, len(self.values)) - 1]


@dataclass(frozen=True)
class StaircaseCurve(RewardCurve):
    """Non-concave curve: flat for ``plateau_length`` pulls, then a jump.

    Starting from the base curve's first value, each jump closes a fraction
    ``jump_fraction`` of the remaining gap to the base curve's limit.  The
    result is non-decreasing and bounded but has plateaus followed by jumps,
    so its first differences are not monotone.
    """

    base: RewardCurve
    plateau_length: int
    jump_fraction: float

    def __post_init__(self) -> None:
        if self.plateau_length < 1:
            raise ValueError(f"plateau_length must be >= 1, got {self.plateau_length}")
        if not (0.0 < self.jump_fraction <= 1.0):
            raise ValueError(f"jump_fraction must lie in (0, 1], got {self.jump_fraction}")

    @property
    def limit(self) -> float:  # type: ignore[override]
        return self.base.limit

    @property
    def start(self) -> float:
        return self.base.eval(1)

    def eval(self, n: int) -> float:
        self._check_pull_index(n)
        jumps = (n - 1) // self.plateau_length
        gap = self.limit - self.start
        return self.limit - gap * (1.0 - self.jump_fraction) ** jumps


def curve_eval(curve: RewardCurve, n: int) -> float:
    """Evaluate a curve at pull count n (n >= 1)."""
    return curve.eval(n)

"""Elimination-based selection for rising reward processes.

The algorithm keeps a candidate set of arms, pulls every candidate once per
round, brackets each arm's achievable final reward between the last observed
value (lower) and a linear extrapolation of the growth rate (upper), and
drops any arm whose upper bound falls below another candidate's lower bound.
Supports a trial-count horizon and a cost-aware budget horizon.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arms import ArmProcess, ConfigurationError
from .curves import RewardCurve

DEFAULT_EPSILON = 1e-12
DEFAULT_SMOOTH_WINDOW = 7

GROWTH_MODES = ("last", "smooth")


class InsufficientHistoryError(ValueError):
    """Raised when a growth rate is requested from fewer than two observations."""


@dataclass
class ArmState:
    """Per-arm bookkeeping maintained by a run."""

    arm_id: int
    pulls: int = 0
    history: list[float] = field(default_factory=list)
    growth: float | None = None
    upper: float = 1.0
    lower: float = 0.0
    active: bool = True
    total_cost: float = 0.0

    @property
    def mean_cost(self) -> float:
        if self.pulls == 0:
            raise ValueError("mean cost undefined before the first pull")
        return self.total_cost / self.pulls


@dataclass(frozen=True)
class BanditConfig:
    """Run configuration: exactly one of ``trials`` or ``budget`` must be set."""

    trials: int | None = None
    budget: float | None = None
    growth: str = "last"
    smooth_window: int = DEFAULT_SMOOTH_WINDOW
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self) -> None:
        if (self.trials is None) == (self.budget is None):
            raise ConfigurationError("exactly one of trials or budget must be set")
        if self.trials is not None and self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials}")
        if self.budget is not None and self.budget <= 0.0:
            raise ConfigurationError(f"budget must be positive, got {self.budget}")
        if self.growth not in GROWTH_MODES:
            raise ConfigurationError(f"growth mode must be one of {GROWTH_MODES}, got {self.growth!r}")
        if self.smooth_window < 1:
            raise ConfigurationError(f"smooth window must be >= 1, got {self.smooth_window}")
        if self.epsilon < 0.0:
            raise ConfigurationError(f"epsilon must be >= 0, got {self.epsilon}")


@dataclass(frozen=True)
class StepRecord:
    t: int
    arm: int
    reward: float
    cost: float
    candidate_set_size: int


@dataclass
class PolicyTrace:
    """Full record of one run."""

    steps: list[StepRecord]
    pull_counts: list[int]
    total_cost: float
    best_arm: int
    best_step: int
    final_j: float
    candidate_history: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def horizon(self) -> int:
        return len(self.steps)


def growth_rate(history: list[float], mode: str = "last", window: int = DEFAULT_SMOOTH_WINDOW) -> float:
    """Growth rate of an observed reward sequence.

    ``last`` is the most recent increment; ``smooth`` averages the last
    ``window`` increments, falling back to the mean increment over the whole
    history while fewer than ``window`` increments exist.
    """
    n = len(history)
    if n < 2:
        raise InsufficientHistoryError(f"growth rate needs >= 2 observations, got {n}")
    if mode == "last":
        return history[-1] - history[-2]
    if mode == "smooth":
        if n > window:
            return (history[-1] - history[-1 - window]) / window
        return (history[-1] - history[0]) / (n - 1)
    raise ValueError(f"growth mode must be one of {GROWTH_MODES}, got {mode!r}")


def upper_bound(state: ArmState, t: int, horizon: int, omega: float | None) -> float:
    """Optimistic final reward: last value plus omega per remaining step, capped at 1.

    With fewer than two observations omega is unknowable and the only sound
    bound is 1.
    """
    if t > horizon:
        raise ValueError(f"step {t} beyond horizon {horizon}")
    if omega is None:
        return 1.0
    return min(state.history[-1] + omega * (horizon - t), 1.0)


def cost_aware_upper_bound(state: ArmState, budget_left: float, omega: float | None) -> float:
    """Budget variant: the extrapolation horizon is the affordable pull count."""
    if omega is None:
        return 1.0
    mean_cost = state.mean_cost
    if mean_cost <= 0.0:
        raise ValueError(f"mean cost must be positive, got {mean_cost}")
    return min(state.history[-1] + omega * (budget_left / mean_cost), 1.0)


def eliminate(candidates: list[int], states: list[ArmState], epsilon: float = DEFAULT_EPSILON) -> list[int]:
    """One elimination sweep over the candidate set.

    Arm j is dropped iff some other candidate's lower bound reaches j's upper
    bound (within epsilon).  All removals are decided against the set as it
    stood at sweep start; if mutual dominance would empty the set, the
    lowest-numbered candidate survives.
    """
    survivors = []
    for j in candidates:
        dominated = any(
            states[i - 1].lower >= states[j - 1].upper - epsilon
            for i in candidates
            if i != j
        )
        if not dominated:
            survivors.append(j)
    if not survivors:
        survivors = [min(candidates)]
    return survivors


def _pull_and_update(arm: ArmProcess, state: ArmState, config: BanditConfig) -> tuple[float, float]:
    reward, cost = arm.pull()
    state.pulls += 1
    state.history.append(reward)
    state.lower = reward
    state.total_cost += cost
    if state.pulls >= 2:
        state.growth = growth_rate(state.history, config.growth, config.smooth_window)
    return reward, cost


def _finish_trace(
    steps: list[StepRecord],
    states: list[ArmState],
    candidate_history: list[tuple[int, ...]],
) -> PolicyTrace:
    best = max(steps, key=lambda s: s.reward)
    return PolicyTrace(
        steps=steps,
        pull_counts=[st.pulls for st in states],
        total_cost=sum(st.total_cost for st in states),
        best_arm=best.arm,
        best_step=best.t,
        final_j=best.reward,
        candidate_history=candidate_history,
    )


def rising_bandit_run(arms: list[ArmProcess], config: BanditConfig) -> PolicyTrace:
    """Run the elimination algorithm to the configured horizon.

    Trials mode performs exactly ``config.trials`` pulls, truncating the last
    round mid-way if needed.  Budget mode skips any pull whose cost would
    overshoot the remaining budget and stops once no candidate pull fits.
    Elimination sweeps run at the end of each round.
    """
    k = len(arms)
    if k == 0:
        raise ConfigurationError("an instance needs at least one arm")
    states = [ArmState(arm_id=i) for i in range(1, k + 1)]
    candidates = list(range(1, k + 1))
    steps: list[StepRecord] = []
    candidate_history: list[tuple[int, ...]] = [tuple(candidates)]
    t = 0

    if config.trials is not None:
        horizon = config.trials
        while t < horizon:
            for arm_id in list(candidates):
                if t >= horizon:
                    break
                t += 1
                st = states[arm_id - 1]
                reward, cost = _pull_and_update(arms[arm_id - 1], st, config)
                st.upper = upper_bound(st, t, horizon, st.growth)
                steps.append(StepRecord(t, arm_id, reward, cost, len(candidates)))
            if t >= horizon:
                # No pulls remain, so a final sweep could only mislabel arms
                # that tie at equality; leave the candidate set as pulled.
                break
            candidates = eliminate(candidates, states, config.epsilon)
            candidate_history.append(tuple(candidates))
    else:
        budget = config.budget
        spent = 0.0
        while True:
            pulled_any = False
            for arm_id in list(candidates):
                arm = arms[arm_id - 1]
                if spent + arm.peek_cost() > budget:
                    continue
                t += 1
                st = states[arm_id - 1]
                reward, cost = _pull_and_update(arm, st, config)
                spent += cost
                st.upper = cost_aware_upper_bound(st, budget - spent, st.growth)
                steps.append(StepRecord(t, arm_id, reward, cost, len(candidates)))
                pulled_any = True
            if not pulled_any:
                break
            candidates = eliminate(candidates, states, config.epsilon)
            candidate_history.append(tuple(candidates))

    for st in states:
        st.active = st.arm_id in candidates
    return _finish_trace(steps, states, candidate_history)


def offline_max_run(curves: list[RewardCurve], horizon: int) -> tuple[int, float]:
    """Best single arm when the curves are known: argmax of the horizon value.

    Returns (arm_id, value); ties go to the lowest arm id.
    """
    if not curves:
        raise ConfigurationError("an instance needs at least one arm")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    best_arm, best_value = 1, curves[0].eval(horizon)
    for idx, curve in enumerate(curves[1:], start=2):
        value = curve.eval(horizon)
        if value > best_value:
            best_arm, best_value = idx, value
    return best_arm, best_value

"""Simulation and verification machinery.

Runs policies on instances, computes the best-observed-reward objective and
its regret against the offline oracle, and provides the desk-scale checks:
an exhaustive enumeration oracle, the separation-time quantity gamma, the
regret-bound evaluation, the average-policy comparison condition, and the
bias-ratio condition for the smooth growth rate.
"""

from __future__ import annotations

import warnings
import zlib
from dataclasses import dataclass, field

import numpy as np

from .arms import ConfigurationError, InstanceSpec, make_instance
from .bandit import (
    DEFAULT_EPSILON,
    ArmState,
    BanditConfig,
    PolicyTrace,
    StepRecord,
    _finish_trace,
    offline_max_run,
    rising_bandit_run,
)
from .curves import RewardCurve
from .policies import Policy, RisingBanditPolicy

BRUTE_FORCE_SEQUENCE_CAP = 10**7

# Interpretation caveat carried into every report: the regret bound's arm
# multiplicity is read as the number of arms K.
BOUND_INTERPRETATION_NOTE = (
    "regret bound evaluated as r*(T) - r*(T - (K-1)*gamma(T)) with the arm "
    "multiplicity taken to be K, the number of arms"
)


def derive_seed(
    base_seed: int, policy_name: str, replication: int
) -> np.random.SeedSequence:
    """Splittable stream for one (policy, replication) run.

    The policy name enters through a stable CRC32 key, so adding a policy to
    an experiment never perturbs the streams of the others.
    """
    policy_key = zlib.crc32(policy_name.encode("utf-8"))
    return np.random.SeedSequence(entropy=base_seed, spawn_key=(policy_key, replication))


def simulate(
    policy: Policy,
    instance: InstanceSpec,
    config: BanditConfig,
    seed: int = 0,
    replication: int = 0,
) -> PolicyTrace:
    """Run one policy on a fresh copy of the instance.

    Every run builds its own arm processes from the spec, so policies never
    share arm state; arm and policy RNG streams derive from (seed, policy
    name, replication).
    """
    run_seed = derive_seed(seed, policy.name, replication)
    arms = make_instance(instance, run_seed)
    if isinstance(policy, RisingBanditPolicy):
        run_config = config
        if policy.growth is not None or policy.smooth_window is not None:
            run_config = BanditConfig(
                trials=config.trials,
                budget=config.budget,
                growth=policy.growth or config.growth,
                smooth_window=policy.smooth_window or config.smooth_window,
                epsilon=config.epsilon,
            )
        return rising_bandit_run(arms, run_config)

    policy_stream = np.random.SeedSequence(entropy=run_seed.entropy, spawn_key=run_seed.spawn_key + (0,))
    policy.reset(np.random.Generator(np.random.PCG64(policy_stream)))

    k = len(arms)
    states = [ArmState(arm_id=i) for i in range(1, k + 1)]
    steps: list[StepRecord] = []
    t = 0
    spent = 0.0
    while True:
        if config.trials is not None and t >= config.trials:
            break
        arm_id = policy.select(states, t + 1)
        if not 1 <= arm_id <= k:
            raise ConfigurationError(f"policy {policy.name!r} selected invalid arm {arm_id}")
        arm = arms[arm_id - 1]
        if config.budget is not None and spent + arm.peek_cost() > config.budget:
            break
        t += 1
        reward, cost = arm.pull()
        spent += cost
        st = states[arm_id - 1]
        st.pulls += 1
        st.history.append(reward)
        st.lower = reward
        st.total_cost += cost
        steps.append(StepRecord(t, arm_id, reward, cost, k))
    if not steps:
        raise ConfigurationError("budget too small for a single pull")
    return _finish_trace(steps, states, candidate_history=[tuple(range(1, k + 1))])


@dataclass(frozen=True)
class GammaResult:
    gamma: int
    per_arm: tuple[int, ...]
    optimal_arm: int
    non_identifiable_arms: tuple[int, ...]

    @property
    def identifiable(self) -> bool:
        return not self.non_identifiable_arms


def compute_gamma(
    curves: list[RewardCurve], horizon: int, epsilon: float = DEFAULT_EPSILON
) -> GammaResult:
    """Separation times from lockstep two-arm simulation on ground truth.

    For each suboptimal arm k, arm k and the optimal arm are pulled strictly
    alternately (k first) on their true values; gamma_k is the first per-arm
    pull count at which k's extrapolated upper bound falls to the optimal
    arm's lower bound.  An arm not separated within the horizon gets
    gamma_k = horizon and is flagged non-identifiable.
    """
    k_star, _ = offline_max_run(curves, horizon)
    star_curve = curves[k_star - 1]
    per_arm = []
    non_identifiable = []
    for idx, curve in enumerate(curves, start=1):
        if idx == k_star:
            per_arm.append(0)
            continue
        gamma_k = None
        n = 1
        while 2 * n <= horizon:
            if n >= 2:
                omega = curve.eval(n) - curve.eval(n - 1)
                # Arm k's upper bound is computed at its own pull moment,
                # global step 2n - 1 in the alternating schedule.
                u = min(curve.eval(n) + omega * (horizon - (2 * n - 1)), 1.0)
                if u <= star_curve.eval(n) + epsilon:
                    gamma_k = n
                    break
            n += 1
        if gamma_k is None:
            gamma_k = horizon
            non_identifiable.append(idx)
        per_arm.append(gamma_k)
    return GammaResult(
        gamma=max(per_arm),
        per_arm=tuple(per_arm),
        optimal_arm=k_star,
        non_identifiable_arms=tuple(non_identifiable),
    )


def theorem1_is_vacuous(k: int, gamma: int, horizon: int) -> bool:
    return (k - 1) * gamma >= horizon


def theorem1_bound(curves: list[RewardCurve], horizon: int, gamma: int, k: int) -> float:
    """Regret bound r*(T) - r*(T - (K-1)*gamma); 1.0 when vacuous."""
    if theorem1_is_vacuous(k, gamma, horizon):
        return 1.0
    k_star, star_value = offline_max_run(curves, horizon)
    return star_value - curves[k_star - 1].eval(horizon - (k - 1) * gamma)


def corollary1_check(
    curves: list[RewardCurve], horizon: int, k: int, gamma: int
) -> tuple[bool, float]:
    """Condition under which elimination beats round-robin, plus the analytic
    round-robin regret from ground truth.

    Uses floor(T/K) pulls per arm when the horizon does not divide evenly.
    """
    k_star, star_value = offline_max_run(curves, horizon)
    if k == 1:
        return True, 0.0
    condition = gamma <= (k * horizon - horizon) / (k * (k - 1))
    per_arm_pulls = horizon // k
    if per_arm_pulls >= 1:
        avg_j = max(curve.eval(per_arm_pulls) for curve in curves)
    else:
        # Fewer pulls than arms: round-robin reaches only the first T arms once.
        avg_j = max(curve.eval(1) for curve in curves[:horizon])
    return condition, star_value - avg_j


def least_concave_majorant(observed: list[float], limit: float | None = None) -> list[float]:
    """Least concave majorant of an observed sequence (upper concave hull).

    The hull is over the points (n, y(n)); the known curve limit, when given,
    only validates that no observation exceeds it.  Values are clamped from
    below by the observations so floating-point chord evaluation never dips
    under the data.
    """
    n = len(observed)
    if n == 0:
        raise ValueError("observed sequence is empty")
    if limit is not None:
        for i, y in enumerate(observed):
            if y > limit + 1e-9:
                raise ValueError(f"observation {y} at pull {i + 1} exceeds the stated limit {limit}")
    # Monotone-chain upper hull over x = 1..n.
    hull: list[tuple[int, float]] = []
    for x, y in enumerate(observed, start=1):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (x - x2) <= (y - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((x, y))
    out = [0.0] * n
    seg = 0
    for x in range(1, n + 1):
        while seg + 1 < len(hull) and hull[seg + 1][0] < x:
            seg += 1
        x1, y1 = hull[seg]
        if seg + 1 < len(hull):
            x2, y2 = hull[seg + 1]
            value = y1 + (y2 - y1) * (x - x1) / (x2 - x1)
        else:
            value = y1
        out[x - 1] = max(value, observed[x - 1])
    return out


def theorem2_condition_check(
    majorant: RewardCurve | list[float],
    observed: list[float],
    window: int,
    horizon: int | None = None,
    zero_tol: float = 1e-12,
) -> bool:
    """Bias-ratio condition for the smooth growth rate.

    With bias delta(t) = majorant(t) - observed(t), checks
    delta(t) / delta(t - C) <= (T - t) / (T - t + C) for every t in (C, T].
    A zero earlier bias with a positive later bias counts as a violation;
    both zero counts as satisfied.
    """
    horizon = len(observed) if horizon is None else horizon
    if horizon > len(observed):
        raise ValueError(f"horizon {horizon} beyond observed length {len(observed)}")
    if isinstance(majorant, RewardCurve):
        major = [majorant.eval(n) for n in range(1, horizon + 1)]
    else:
        major = list(majorant)
    deltas = []
    for n in range(horizon):
        d = major[n] - observed[n]
        if d < -1e-9:
            raise ValueError(
                f"observed value {observed[n]} at pull {n + 1} exceeds the majorant {major[n]}"
            )
        deltas.append(0.0 if d <= zero_tol else d)
    for t in range(window + 1, horizon + 1):
        d_now = deltas[t - 1]
        d_prev = deltas[t - window - 1]
        if d_prev == 0.0:
            if d_now > 0.0:
                return False
            continue
        bound = (horizon - t) / (horizon - t + window)
        if d_now / d_prev > bound + zero_tol:
            return False
    return True


def brute_force_optimal(curves: list[RewardCurve], horizon: int) -> tuple[float, tuple[int, ...]]:
    """Exhaustive enumeration of every pull sequence.

    Computes the best-observed reward of each of the K^T sequences directly
    from the definition and returns the maximum with one witness sequence.
    Intended for desk-scale instances; refuses anything above the cap.
    """
    k = len(curves)
    if k == 0:
        raise ConfigurationError("an instance needs at least one arm")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if k**horizon > BRUTE_FORCE_SEQUENCE_CAP:
        raise ValueError(
            f"instance too large: {k}^{horizon} sequences exceeds the cap {BRUTE_FORCE_SEQUENCE_CAP}"
        )
    tables = [[curve.eval(n) for n in range(1, horizon + 1)] for curve in curves]
    best_j = -1.0
    witness: tuple[int, ...] = ()

    def recurse(depth: int, counts: list[int], running_max: float, prefix: list[int]) -> None:
        nonlocal best_j, witness
        if depth == horizon:
            if running_max > best_j:
                best_j = running_max
                witness = tuple(prefix)
            return
        for arm in range(k):
            counts[arm] += 1
            reward = tables[arm][counts[arm] - 1]
            prefix.append(arm + 1)
            recurse(depth + 1, counts, max(running_max, reward), prefix)
            prefix.pop()
            counts[arm] -= 1

    recurse(0, [0] * k, -1.0, [])
    return best_j, witness


def regret(trace_j: float, j_oracle: float, epsilon: float = DEFAULT_EPSILON) -> float:
    """Oracle value minus achieved value, clamped at zero.

    A policy beating the oracle beyond tolerance indicates an oracle bug and
    is surfaced as a warning.
    """
    gap = j_oracle - trace_j
    if gap < -epsilon:
        warnings.warn(
            f"policy value {trace_j} exceeds oracle {j_oracle} beyond tolerance", stacklevel=2
        )
    return max(gap, 0.0)


@dataclass
class PolicyResult:
    j_values: list[float] = field(default_factory=list)

    @property
    def j_mean(self) -> float:
        return sum(self.j_values) / len(self.j_values)


@dataclass
class RegretReport:
    """Summary of one experiment on a curve-backed instance."""

    horizon: int | None
    policies: dict[str, PolicyResult]
    j_oracle: float | None = None
    oracle_arm: int | None = None
    regrets: dict[str, float] = field(default_factory=dict)
    gamma: int | None = None
    gamma_per_arm: tuple[int, ...] | None = None
    theorem1_bound: float | None = None
    theorem1_vacuous: bool | None = None
    corollary1_condition_holds: bool | None = None
    avg_policy_regret: float | None = None
    interpretation_notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "policies": {
                name: {"j_mean": res.j_mean, "j_per_replication": res.j_values}
                for name, res in self.policies.items()
            },
            "j_oracle": self.j_oracle,
            "oracle_arm": self.oracle_arm,
            "regrets": self.regrets,
            "gamma": self.gamma,
            "gamma_per_arm": list(self.gamma_per_arm) if self.gamma_per_arm is not None else None,
            "theorem1_bound": self.theorem1_bound,
            "theorem1_vacuous": self.theorem1_vacuous,
            "corollary1_condition_holds": self.corollary1_condition_holds,
            "avg_policy_regret": self.avg_policy_regret,
            "interpretation_notes": self.interpretation_notes,
        }


def build_report(
    instance: InstanceSpec,
    config: BanditConfig,
    results: dict[str, PolicyResult],
) -> RegretReport:
    """Assemble the analytic comparisons available for this instance.

    Oracle-dependent fields need ground-truth curves and a trial-count
    horizon; otherwise they stay None with an explanatory note.
    """
    report = RegretReport(horizon=config.trials, policies=results)
    curves = instance.curves()
    if curves is None:
        report.interpretation_notes.append(
            "no analytic oracle: instance contains arms without ground-truth curves"
        )
        return report
    if config.trials is None:
        report.interpretation_notes.append(
            "no analytic oracle: budget-mode horizon has no closed-form optimum"
        )
        return report
    horizon = config.trials
    k = len(curves)
    oracle_arm, j_oracle = offline_max_run(curves, horizon)
    report.oracle_arm = oracle_arm
    report.j_oracle = j_oracle
    for name, res in results.items():
        report.regrets[name] = regret(res.j_mean, j_oracle)
    gamma_result = compute_gamma(curves, horizon)
    report.gamma = gamma_result.gamma
    report.gamma_per_arm = gamma_result.per_arm
    if not gamma_result.identifiable:
        report.interpretation_notes.append(
            f"arms {list(gamma_result.non_identifiable_arms)} not separated within the "
            "horizon; their separation time is reported as the horizon itself"
        )
    report.theorem1_vacuous = theorem1_is_vacuous(k, gamma_result.gamma, horizon)
    report.theorem1_bound = theorem1_bound(curves, horizon, gamma_result.gamma, k)
    if report.theorem1_vacuous:
        report.interpretation_notes.append(
            "regret bound vacuous: (K-1)*gamma reaches the horizon; reported as 1.0"
        )
    condition, avg_regret = corollary1_check(curves, horizon, k, gamma_result.gamma)
    report.corollary1_condition_holds = condition
    report.avg_policy_regret = avg_regret
    if horizon % k != 0:
        report.interpretation_notes.append(
            "horizon not divisible by the arm count; round-robin regret uses floor(T/K) pulls"
        )
    report.interpretation_notes.append(BOUND_INTERPRETATION_NOTE)
    return report

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from risingbandits import (
    ArmState,
    BanditConfig,
    ConfigurationError,
    CurveArmSpec,
    ExponentialCurve,
    InsufficientHistoryError,
    InstanceSpec,
    cost_aware_upper_bound,
    eliminate,
    growth_rate,
    make_instance,
    offline_max_run,
    rising_bandit_run,
    upper_bound,
)

ARM1 = ExponentialCurve(limit=0.9, initial=0.5, decay=0.5)
ARM2 = ExponentialCurve(limit=0.95, initial=0.3, decay=0.8)


def _arms(*curves, costs=None, seed=0):
    costs = costs or [1.0] * len(curves)
    spec = InstanceSpec([CurveArmSpec(c, cost=k) for c, k in zip(curves, costs)])
    return make_instance(spec, seed)


class TestBanditConfig:
    def test_requires_exactly_one_horizon(self):
        with pytest.raises(ConfigurationError):
            BanditConfig()
        with pytest.raises(ConfigurationError):
            BanditConfig(trials=5, budget=10.0)

    def test_rejects_bad_values(self):
        with pytest.raises(ConfigurationError):
            BanditConfig(trials=0)
        with pytest.raises(ConfigurationError):
            BanditConfig(budget=0.0)
        with pytest.raises(ConfigurationError):
            BanditConfig(trials=5, growth="cubic")
        with pytest.raises(ConfigurationError):
            BanditConfig(trials=5, smooth_window=0)
        with pytest.raises(ConfigurationError):
            BanditConfig(trials=5, epsilon=-1e-9)


class TestGrowthRate:
    def test_last_mode_is_final_increment(self):
        assert growth_rate([0.1, 0.4, 0.5], mode="last") == pytest.approx(0.1)

    def test_smooth_mode_averages_window(self):
        history = [0.0, 0.1, 0.3, 0.6, 1.0]
        assert growth_rate(history, mode="smooth", window=3) == pytest.approx((1.0 - 0.1) / 3)

    def test_smooth_mode_fallback_below_window(self):
        history = [0.2, 0.5, 0.6]
        assert growth_rate(history, mode="smooth", window=7) == pytest.approx((0.6 - 0.2) / 2)

    def test_requires_two_observations(self):
        with pytest.raises(InsufficientHistoryError):
            growth_rate([0.5], mode="last")

    def test_rejects_unknown_mode(self):
        with pytest.raises(ValueError):
            growth_rate([0.1, 0.2], mode="median")

    @settings(max_examples=50, deadline=None)
    @given(
        increments=st.lists(st.floats(0.0, 0.1), min_size=1, max_size=20),
        window=st.integers(1, 10),
    )
    def test_smooth_rate_nonnegative_for_rising_history(self, increments, window):
        history = list(np.cumsum([0.1] + increments))
        assert growth_rate(history, mode="smooth", window=window) >= 0.0


class TestUpperBound:
    def test_linear_extrapolation(self):
        state = ArmState(arm_id=1, history=[0.5, 0.6])
        assert upper_bound(state, t=2, horizon=5, omega=0.1) == pytest.approx(0.9)

    def test_capped_at_one(self):
        state = ArmState(arm_id=1, history=[0.5, 0.9])
        assert upper_bound(state, t=2, horizon=100, omega=0.4) == 1.0

    def test_zero_growth_pins_upper_to_lower(self):
        state = ArmState(arm_id=1, history=[0.9, 0.95])
        assert upper_bound(state, t=3, horizon=500, omega=0.0) == pytest.approx(0.95)

    def test_cold_start_returns_one(self):
        state = ArmState(arm_id=1, history=[0.5])
        assert upper_bound(state, t=1, horizon=5, omega=None) == 1.0

    def test_rejects_step_beyond_horizon(self):
        state = ArmState(arm_id=1, history=[0.5])
        with pytest.raises(ValueError):
            upper_bound(state, t=6, horizon=5, omega=0.1)


class TestCostAwareUpperBound:
    def test_affordable_pulls_scale_extrapolation(self):
        state = ArmState(arm_id=1, pulls=2, history=[0.5, 0.6], total_cost=4.0)
        # Mean cost 2, budget 10 -> five affordable pulls of growth 0.05 each.
        assert cost_aware_upper_bound(state, budget_left=10.0, omega=0.05) == pytest.approx(0.85)

    def test_capped_at_one(self):
        state = ArmState(arm_id=1, pulls=1, history=[0.9], total_cost=1.0)
        assert cost_aware_upper_bound(state, budget_left=100.0, omega=0.5) == 1.0

    def test_cold_start_returns_one(self):
        state = ArmState(arm_id=1, pulls=1, history=[0.5], total_cost=1.0)
        assert cost_aware_upper_bound(state, budget_left=10.0, omega=None) == 1.0


class TestEliminate:
    def _state(self, arm_id, lower, upper):
        return ArmState(arm_id=arm_id, lower=lower, upper=upper)

    def test_drops_dominated_arm(self):
        states = [self._state(1, 0.8, 0.9), self._state(2, 0.3, 0.7)]
        assert eliminate([1, 2], states) == [1]

    def test_keeps_overlapping_arms(self):
        states = [self._state(1, 0.5, 0.9), self._state(2, 0.4, 0.8)]
        assert eliminate([1, 2], states) == [1, 2]

    def test_epsilon_slack_triggers_elimination_on_ties(self):
        states = [self._state(1, 0.7, 1.0), self._state(2, 0.2, 0.7)]
        assert eliminate([1, 2], states, epsilon=1e-12) == [1]

    def test_sweep_uses_snapshot_not_survivors(self):
        # Arm 2 dominates 3, arm 1 dominates 2; decisions are simultaneous,
        # so arm 3 is judged against arm 2 even though arm 2 also leaves.
        states = [self._state(1, 0.8, 1.0), self._state(2, 0.5, 0.7), self._state(3, 0.1, 0.4)]
        assert eliminate([1, 2, 3], states) == [1]

    def test_lowest_id_survives_mutual_dominance(self):
        states = [self._state(1, 0.5, 0.5), self._state(2, 0.5, 0.5)]
        assert eliminate([1, 2], states) == [1]

    def test_inactive_candidates_not_consulted(self):
        states = [self._state(1, 0.9, 1.0), self._state(2, 0.1, 0.2)]
        assert eliminate([2], states) == [2]


class TestRisingBanditRunTrials:
    def test_single_arm_pulled_to_horizon(self):
        trace = rising_bandit_run(_arms(ARM1), BanditConfig(trials=10))
        assert trace.pull_counts == [10]
        assert trace.final_j == ARM1.eval(10)
        assert trace.best_arm == 1

    def test_two_arm_example(self):
        # Frozen from the enumeration-backed oracle run: arm 2 is eliminated
        # after round 2 and arm 1 finishes with its three-pull value.
        trace = rising_bandit_run(_arms(ARM1, ARM2), BanditConfig(trials=5))
        assert trace.pull_counts == [3, 2]
        assert trace.best_arm == 1
        assert trace.final_j == pytest.approx(0.8, abs=1e-12)
        assert trace.candidate_history == [(1, 2), (1, 2), (1,)]

    def test_identical_arms_never_eliminated(self):
        trace = rising_bandit_run(_arms(ARM1, ARM1), BanditConfig(trials=6))
        assert trace.pull_counts == [3, 3]
        assert all(snapshot == (1, 2) for snapshot in trace.candidate_history)
        assert trace.final_j == ARM1.eval(3)

    def test_mid_round_truncation(self):
        # T=5 with two live arms: the last round pulls only the first arm.
        trace = rising_bandit_run(_arms(ARM1, ARM1), BanditConfig(trials=5))
        assert trace.pull_counts == [3, 2]
        assert trace.horizon == 5

    def test_exact_trial_count(self):
        for trials in (1, 2, 7, 13):
            trace = rising_bandit_run(_arms(ARM1, ARM2, ARM1), BanditConfig(trials=trials))
            assert trace.horizon == trials
            assert sum(trace.pull_counts) == trials

    def test_rejects_empty_instance(self):
        with pytest.raises(ConfigurationError):
            rising_bandit_run([], BanditConfig(trials=5))

    def test_best_step_is_earliest_maximum(self):
        trace = rising_bandit_run(_arms(ARM1), BanditConfig(trials=4))
        assert trace.best_step == 4
        assert trace.steps[trace.best_step - 1].reward == trace.final_j


class TestRisingBanditRunBudget:
    def test_budget_never_exceeded(self):
        trace = rising_bandit_run(
            _arms(ARM1, ARM2, costs=[3.0, 2.0]), BanditConfig(budget=20.0)
        )
        assert trace.total_cost <= 20.0 + 1e-12

    def test_unaffordable_arm_skipped_not_fatal(self):
        # Budget 7: arm 1 (cost 5) fits once, then only arm 2 (cost 1) fits.
        trace = rising_bandit_run(
            _arms(ARM1, ARM2, costs=[5.0, 1.0]), BanditConfig(budget=7.0)
        )
        assert trace.pull_counts[0] == 1
        assert trace.pull_counts[1] == 2
        assert trace.total_cost == pytest.approx(7.0)

    def test_cheaper_identical_arm_gets_more_pulls(self):
        trace = rising_bandit_run(
            _arms(ARM1, ARM1, costs=[10.0, 1.0]), BanditConfig(budget=115.0)
        )
        assert trace.pull_counts[1] > trace.pull_counts[0]


class TestOfflineMaxRun:
    def test_two_arm_example(self):
        assert offline_max_run([ARM1, ARM2], 5) == (1, 0.875)

    def test_ties_go_to_lowest_id(self):
        arm, value = offline_max_run([ARM1, ARM1], 8)
        assert arm == 1
        assert value == ARM1.eval(8)

    def test_single_arm(self):
        assert offline_max_run([ARM2], 3) == (1, ARM2.eval(3))

    def test_rejects_degenerate_input(self):
        with pytest.raises(ConfigurationError):
            offline_max_run([], 5)
        with pytest.raises(ValueError):
            offline_max_run([ARM1], 0)

"""Reward shaping, credit assignment, and the three selection rules."""

import math

import numpy as np
import pytest

from aosat.controller import (
    Controller,
    ControllerConfig,
    SlidingWindow,
    compass_reward,
    mab_scores,
    pm_probabilities,
    select_mab,
    select_pm,
    select_wta,
    update_utility,
)

# sqrt(2): projection of the direction (1, 1) onto theta = pi/4 after both
# axes normalize to 1. Frozen from independent evaluation.
SQRT2 = 1.4142135623730951

# 0.5 + 1.0 * sqrt(ln(4) / 1): score of an operator with utility 0.5 played
# once out of four total plays, at c = 1. Frozen from math.sqrt(math.log(4)).
MAB_WORKED = 1.6774100225154747


class TestSlidingWindow:
    def test_eviction_and_aggregates(self):
        w = SlidingWindow(3)
        for v in (1.0, 2.0, 3.0):
            w.push(v)
        assert w.mean() == pytest.approx(2.0)
        assert w.max() == 3.0
        w.push(10.0)  # evicts 1.0
        assert w.values == (2.0, 3.0, 10.0)
        assert w.mean() == pytest.approx(5.0)

    def test_empty_aggregates_are_zero(self):
        w = SlidingWindow(4)
        assert w.mean() == 0.0
        assert w.max() == 0.0
        assert w.aggregate("mean") == 0.0

    def test_capacity_validated(self):
        with pytest.raises(ValueError):
            SlidingWindow(0)

    def test_unknown_aggregate_rejected(self):
        w = SlidingWindow(2)
        with pytest.raises(ValueError):
            w.aggregate("median")

    def test_mean_matches_recomputation(self):
        rng = np.random.default_rng(1)
        w = SlidingWindow(5)
        for _ in range(100):
            w.push(float(rng.normal()))
            assert w.mean() == pytest.approx(np.mean(w.values), abs=1e-12)


class TestCompassReward:
    def test_worked_directions(self):
        opdirs = np.array([[0.0, 1.0]])  # pure quality direction
        assert compass_reward(opdirs, math.pi / 2, min_shift=False)[0] == pytest.approx(1.0)
        assert compass_reward(opdirs, 0.0, min_shift=False)[0] == pytest.approx(0.0, abs=1e-12)
        both = np.array([[1.0, 1.0]])
        assert compass_reward(both, math.pi / 4, min_shift=False)[0] == pytest.approx(SQRT2)

    def test_min_shift_floors_at_zero(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            opdirs = rng.normal(size=(6, 2))
            r = compass_reward(opdirs, float(rng.uniform(0, math.pi / 2)))
            assert r.min() == pytest.approx(0.0, abs=1e-15)
            assert (r >= -1e-15).all()

    def test_axis_scale_invariance(self):
        # Per-axis normalization makes rewards invariant to positive
        # rescaling of either axis.
        rng = np.random.default_rng(5)
        opdirs = rng.normal(size=(5, 2))
        base = compass_reward(opdirs, 0.7)
        scaled = opdirs * np.array([13.0, 0.004])
        assert np.allclose(compass_reward(scaled, 0.7), base, atol=1e-12)

    def test_zero_axis_is_safe(self):
        opdirs = np.array([[0.0, 3.0], [0.0, 1.0]])
        r = compass_reward(opdirs, math.pi / 2, min_shift=False)
        assert np.isfinite(r).all()
        assert r[0] == pytest.approx(1.0)

    def test_single_operator_reward_shifts_to_zero(self):
        r = compass_reward(np.array([[0.4, 0.9]]), 1.0)
        assert r[0] == pytest.approx(0.0, abs=1e-15)

    def test_theta_ordering_prefers_quality_at_high_angle(self):
        opdirs = np.array([[1.0, 0.0], [0.0, 1.0]])  # diversity op, quality op
        r_quality = compass_reward(opdirs, math.pi / 2)
        r_diversity = compass_reward(opdirs, 0.0)
        assert r_quality[1] > r_quality[0]
        assert r_diversity[0] > r_diversity[1]

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            compass_reward(np.zeros((3,)), 0.5)


class TestUtility:
    def test_extreme_learning_rates(self):
        assert update_utility(2.0, 10.0, 1.0) == 10.0
        assert update_utility(2.0, 10.0, 0.0) == 2.0
        assert update_utility(2.0, 4.0, 0.5) == 3.0

    def test_mean_schedule_recovers_arithmetic_mean(self):
        values = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0]
        u = 0.0
        for t, r in enumerate(values):
            u = update_utility(u, r, 1.0 / (t + 1))
        assert u == pytest.approx(np.mean(values), abs=1e-12)


class TestProbabilityMatching:
    def test_worked_example(self):
        probs = pm_probabilities([1.0, 0.0], 0.1)
        assert probs == pytest.approx([0.9, 0.1])

    def test_rows_sum_to_one_and_respect_floor(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            n = int(rng.integers(2, 21))
            credits = rng.uniform(0, 5, size=n)
            p_min = float(rng.uniform(0, 1.0 / n))
            probs = pm_probabilities(credits, p_min)
            assert probs.sum() == pytest.approx(1.0, abs=1e-12)
            assert (probs >= p_min - 1e-12).all()

    def test_zero_credits_give_uniform(self):
        probs = pm_probabilities([0.0, 0.0, 0.0, 0.0], 0.05)
        assert probs == pytest.approx([0.25] * 4)

    def test_floor_at_reciprocal_n_is_uniform(self):
        probs = pm_probabilities([9.0, 1.0, 0.0], 1.0 / 3.0)
        assert probs == pytest.approx([1 / 3] * 3)

    def test_negative_credit_rejected(self):
        with pytest.raises(ValueError):
            pm_probabilities([1.0, -0.5], 0.05)

    def test_zero_floor_starves_creditless_operator(self):
        rng = np.random.default_rng(11)
        picks = [select_pm([1.0, 0.0], 0.0, rng) for _ in range(1000)]
        assert set(picks) == {0}

    def test_selection_frequency_tracks_probabilities(self):
        rng = np.random.default_rng(13)
        counts = np.zeros(3)
        for _ in range(20_000):
            counts[select_pm([3.0, 1.0, 0.0], 0.1, rng)] += 1
        freq = counts / counts.sum()
        expect = pm_probabilities([3.0, 1.0, 0.0], 0.1)
        assert np.allclose(freq, expect, atol=0.02)


class TestWinnerTakeAll:
    def test_fixed_point_reached(self):
        # With p_min = 0.05 and 5 operators the winner's share converges to
        # p_max = 1 - 4 * 0.05 = 0.8.
        probs = np.full(5, 0.2)
        credits = np.array([0.0, 3.0, 0.0, 0.0, 0.0])
        rng = np.random.default_rng(0)
        for step in range(200):
            _, probs = select_wta(probs, credits, beta=0.8, p_min=0.05, rng=rng)
            if abs(probs[1] - 0.8) < 1e-6:
                break
        assert abs(probs[1] - 0.8) < 1e-6
        assert probs.sum() == pytest.approx(1.0, abs=1e-9)

    def test_beta_zero_changes_nothing(self):
        probs = np.array([0.7, 0.3])
        _, after = select_wta(probs, [0.0, 5.0], beta=0.0, p_min=0.05,
                              rng=np.random.default_rng(1))
        assert after == pytest.approx([0.7, 0.3])

    def test_single_update_interpolates(self):
        probs = np.array([0.5, 0.5])
        _, after = select_wta(probs, [1.0, 0.0], beta=0.5, p_min=0.1,
                              rng=np.random.default_rng(2))
        # winner: 0.5 + 0.5 * (0.9 - 0.5); loser: 0.5 + 0.5 * (0.1 - 0.5)
        assert after == pytest.approx([0.7, 0.3])

    def test_tied_credits_favor_lowest_index(self):
        probs = np.full(3, 1 / 3)
        _, after = select_wta(probs, [2.0, 2.0, 0.0], beta=0.5, p_min=0.05,
                              rng=np.random.default_rng(3))
        assert after[0] > after[1]

    def test_losers_approach_floor(self):
        probs = np.full(4, 0.25)
        credits = np.array([0.0, 0.0, 9.0, 0.0])
        rng = np.random.default_rng(4)
        for _ in range(300):
            _, probs = select_wta(probs, credits, beta=0.8, p_min=0.05, rng=rng)
        assert np.allclose(probs[[0, 1, 3]], 0.05, atol=1e-6)


class TestBandit:
    def test_worked_score(self):
        scores = mab_scores([0.5, 0.2, 0.1, 0.9], [1, 1, 1, 1], 1.0)
        assert scores[0] == pytest.approx(MAB_WORKED, abs=1e-12)

    def test_unplayed_operator_goes_first(self):
        assert select_mab([0.0, 0.9, 0.0], [3, 2, 0], 1.0) == 2
        assert select_mab([0.0, 0.0], [0, 0], 1.0) == 0  # lowest index of the unplayed

    def test_zero_exploration_is_greedy(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            utilities = rng.uniform(0, 1, size=6)
            counts = rng.integers(1, 50, size=6)
            assert select_mab(utilities, counts, 0.0) == int(np.argmax(utilities))

    def test_exploration_term_grows_with_neglect(self):
        # Same utilities, one operator played much less: its bonus dominates.
        scores = mab_scores([0.5, 0.5], [1000, 1], 1.0)
        assert scores[1] > scores[0]

    def test_counts_must_be_positive(self):
        with pytest.raises(ValueError):
            mab_scores([0.1], [0], 1.0)


class TestControllerPipeline:
    def config(self, **kw):
        base = dict(twin=10, tprime_win=10, p_min=0.05, method="pm")
        base.update(kw)
        return ControllerConfig(**base)

    def test_rewarded_operator_dominates_selection(self):
        ctl = Controller(["good", "bad"], self.config())
        rng = np.random.default_rng(0)
        counts = np.zeros(2)
        op = 0
        for _ in range(500):
            dq = 1.0 if op == 0 else 0.0
            op = ctl.step(op, 0.0, dq, math.pi / 2, rng)
            counts[op] += 1
        assert counts[0] > counts[1] * 3

    def test_all_zero_impacts_keep_selection_uniform(self):
        ctl = Controller(["a", "b", "c"], self.config())
        rng = np.random.default_rng(1)
        for op in (0, 1, 2, 0, 1):
            ctl.step(op, 0.0, 0.0, 1.0, rng)
        assert ctl.assign_credits() == pytest.approx([0.0, 0.0, 0.0])
        probs = pm_probabilities(ctl.assign_credits(), 0.05)
        assert probs == pytest.approx([1 / 3] * 3)

    def test_single_operator_short_circuits(self):
        ctl = Controller(["only"], self.config())

        class Boom:
            def __getattr__(self, name):
                raise AssertionError("rng must not be touched")

        assert ctl.step(0, 0.3, 0.4, 1.0, Boom()) == 0

    def test_same_inputs_same_selections(self):
        seq = []
        for _ in range(2):
            ctl = Controller(["a", "b", "c"], self.config(method="wta"))
            rng = np.random.default_rng(5)
            ops = [0]
            for i in range(100):
                ops.append(ctl.step(ops[-1], math.sin(i), math.cos(i), 0.3, rng))
            seq.append(ops)
        assert seq[0] == seq[1]

    def test_mab_method_counts_each_application(self):
        ctl = Controller(["a", "b"], self.config(method="mab"))
        rng = np.random.default_rng(7)
        op = 0
        for _ in range(10):
            op = ctl.step(op, 0.1, 0.1, 0.5, rng)
        applied = sum(s.n_applied for s in ctl.stats)
        assert applied == 10

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ControllerConfig(p_min=0.2).validate(num_operators=20)  # floor above 1/n
        with pytest.raises(ValueError):
            ControllerConfig(twin=0).validate()
        with pytest.raises(ValueError):
            ControllerConfig(fwin="median").validate()
        with pytest.raises(ValueError):
            ControllerConfig(method="greedy").validate()
        with pytest.raises(ValueError):
            ControllerConfig(beta=1.5).validate()
        ControllerConfig(p_min=0.05).validate(num_operators=20)  # exactly 1/n is legal

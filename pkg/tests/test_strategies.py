"""Angle schedules: fixed, ramps, alternation, and the reactive trigger."""

import math

import pytest

from aosat.strategies import (
    STRATEGY_NAMES,
    AlwaysMovingStrategy,
    DecreaseStrategy,
    FixedStrategy,
    IncreaseStrategy,
    ReactiveMovingStrategy,
    SearchObservation,
    StrategyConfig,
    make_strategy,
)

HALF_PI = math.pi / 2


def obs(iteration=0, entropy=1.0, best=5.0, since=0):
    return SearchObservation(iteration, entropy, best, since)


class TestFixed:
    def test_constant(self):
        s = FixedStrategy(0.3)
        assert s.theta_at(obs(0)) == 0.3
        assert s.theta_at(obs(99_999)) == 0.3

    def test_clamped(self):
        assert FixedStrategy(-1.0).theta_at(obs()) == 0.0
        assert FixedStrategy(9.9).theta_at(obs()) == pytest.approx(HALF_PI)


class TestRamps:
    def test_increase_levels(self):
        s = IncreaseStrategy(1000, epochs=10)
        step = HALF_PI / 9
        for k in range(10):
            assert s.theta_at(obs(k * 100)) == pytest.approx(k * step)
            assert s.theta_at(obs(k * 100 + 99)) == pytest.approx(k * step)
        assert s.theta_at(obs(999)) == pytest.approx(HALF_PI)

    def test_increase_single_epoch_sits_in_the_middle(self):
        s = IncreaseStrategy(500, epochs=1)
        for it in (0, 250, 499):
            assert s.theta_at(obs(it)) == pytest.approx(math.pi / 4)

    def test_increase_is_monotone(self):
        s = IncreaseStrategy(730, epochs=7)
        angles = [s.theta_at(obs(i)) for i in range(730)]
        assert all(a <= b + 1e-15 for a, b in zip(angles, angles[1:]))
        assert angles[0] == 0.0
        assert angles[-1] == pytest.approx(HALF_PI)

    def test_decrease_mirrors_increase(self):
        inc = IncreaseStrategy(400, epochs=5)
        dec = DecreaseStrategy(400, epochs=5)
        for i in range(400):
            assert inc.theta_at(obs(i)) + dec.theta_at(obs(i)) == pytest.approx(HALF_PI)

    def test_iterations_beyond_budget_stay_clamped(self):
        s = IncreaseStrategy(100, epochs=4)
        assert s.theta_at(obs(100)) == pytest.approx(HALF_PI)
        assert s.theta_at(obs(5000)) == pytest.approx(HALF_PI)


class TestAlwaysMoving:
    def test_two_epoch_split(self):
        s = AlwaysMovingStrategy(10_000, epochs=2)
        assert s.theta_at(obs(2500)) == 0.0
        assert s.theta_at(obs(7500)) == pytest.approx(HALF_PI)

    def test_alternation_pattern(self):
        s = AlwaysMovingStrategy(1000, epochs=10)
        for k in range(10):
            want = 0.0 if k % 2 == 0 else HALF_PI
            assert s.theta_at(obs(k * 100 + 50)) == pytest.approx(want)


class TestReactiveMoving:
    def test_starts_in_diversity_mode(self):
        s = ReactiveMovingStrategy()
        assert s.theta_at(obs(0, entropy=0.95, since=0)) == 0.0

    def test_low_entropy_switches_to_quality(self):
        s = ReactiveMovingStrategy(entropy_threshold=0.9)
        assert s.theta_at(obs(1, entropy=0.95)) == 0.0
        assert s.theta_at(obs(2, entropy=0.85)) == pytest.approx(HALF_PI)
        # and it holds there while entropy stays low
        assert s.theta_at(obs(3, entropy=0.85)) == pytest.approx(HALF_PI)

    def test_stagnation_fires_and_rearms(self):
        s = ReactiveMovingStrategy(entropy_threshold=0.9, stagnation_limit=200)
        # entropy low the whole time: quality mode until stagnation trips
        assert s.theta_at(obs(10, entropy=0.5, since=199)) == pytest.approx(HALF_PI)
        assert s.theta_at(obs(11, entropy=0.5, since=200)) == 0.0
        # immediately after the trip, low entropy pulls it back up
        assert s.theta_at(obs(12, entropy=0.5, since=201)) == pytest.approx(HALF_PI)
        # the counter must climb another full window before firing again
        assert s.theta_at(obs(13, entropy=0.5, since=399)) == pytest.approx(HALF_PI)
        assert s.theta_at(obs(14, entropy=0.5, since=400)) == 0.0

    def test_improvement_resets_the_window(self):
        s = ReactiveMovingStrategy(stagnation_limit=200)
        s.theta_at(obs(1, entropy=0.5, since=250))  # armed at 200, base moved
        s.theta_at(obs(2, entropy=0.5, since=0))    # improvement: counter resets
        # 200 fresh stagnant iterations fire again
        assert s.theta_at(obs(3, entropy=0.5, since=199)) == pytest.approx(HALF_PI)
        assert s.theta_at(obs(4, entropy=0.5, since=200)) == 0.0

    def test_stagnation_precedence_over_entropy(self):
        s = ReactiveMovingStrategy(stagnation_wins=True)
        assert s.theta_at(obs(5, entropy=0.1, since=200)) == 0.0
        s2 = ReactiveMovingStrategy(stagnation_wins=False)
        assert s2.theta_at(obs(5, entropy=0.1, since=200)) == pytest.approx(HALF_PI)

    def test_inverted_angles(self):
        s = ReactiveMovingStrategy(invert=True)
        assert s.theta_at(obs(0, entropy=0.95)) == pytest.approx(HALF_PI)
        assert s.theta_at(obs(1, entropy=0.5)) == 0.0

    def test_high_entropy_no_stagnation_stays_put(self):
        s = ReactiveMovingStrategy()
        for i in range(100):
            assert s.theta_at(obs(i, entropy=0.99, since=i % 50)) == 0.0


class TestFactory:
    def test_all_names_build(self):
        for name in STRATEGY_NAMES:
            s = make_strategy(name, 1000)
            theta = s.theta_at(obs(10))
            assert 0.0 <= theta <= HALF_PI

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            make_strategy("chaotic", 1000)

    def test_config_builds_equivalent_strategy(self):
        cfg = StrategyConfig(name="increase", epochs=4)
        direct = IncreaseStrategy(800, epochs=4)
        built = cfg.build(800)
        for i in (0, 199, 400, 799):
            assert built.theta_at(obs(i)) == direct.theta_at(obs(i))

    def test_fixed_theta_passthrough(self):
        cfg = StrategyConfig(name="fixed", theta=0.25)
        assert cfg.build(10).theta_at(obs(3)) == 0.25

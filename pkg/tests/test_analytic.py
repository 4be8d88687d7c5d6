"""Tests for the closed-form models."""

import math

import numpy as np
import pytest

from sweetspot.analytic import (
    batching_race_to_halt_metrics,
    constrained_power,
    delay_moments,
    exceptional_first_service_response,
    flow_split_metrics,
    immediate_shutdown_metrics,
    mm1_metrics,
    off_fraction,
    optimal_flow_split,
    power_minimizing_frequency,
    race_to_halt_metrics,
    tau_c_for_budget,
    threshold_metrics,
)
from sweetspot.errors import (
    BudgetTooLooseError,
    DomainError,
    InfeasibleBudgetError,
    UnstableSystemError,
)
from sweetspot.models import DelayMoments, Policy, ServerParams, Workload

FUZZ_POINTS = 1000
EXACT = 1e-12


@pytest.fixture
def low_load():
    """P0=150, C=70, mu=1, lambda=0.1 at full speed."""
    return ServerParams(p0=150.0, c=70.0, mu=1.0), Workload(0.1)


def fuzz_cases(seed=20120101, points=FUZZ_POINTS):
    """Random stable configurations with utilization in [0.05, 0.95]."""
    rng = np.random.default_rng(seed)
    for _ in range(points):
        p0 = rng.uniform(1.0, 300.0)
        c = rng.uniform(0.0, 150.0)
        mu = rng.uniform(0.1, 10.0)
        f = rng.uniform(0.05, 1.0)
        rho = rng.uniform(0.05, 0.95)
        lam = rho * mu * f
        tau_c = rng.uniform(0.0, 20.0) / lam
        tau_s = rng.uniform(0.0, 20.0) / lam
        tau_w = rng.uniform(0.0, 20.0) / lam
        yield ServerParams(p0=p0, c=c, mu=mu, f=f), Workload(lam), tau_c, tau_s, tau_w


class TestMM1:
    def test_always_on_metrics(self, low_load):
        s, w = low_load

        metrics = mm1_metrics(s, w)

        assert metrics.response == pytest.approx(1.0 / 0.9)
        assert metrics.power == pytest.approx(220.0)

    def test_unstable_raises(self):
        s = ServerParams(p0=150.0, c=70.0, mu=1.0, f=0.5)

        with pytest.raises(UnstableSystemError):
            mm1_metrics(s, Workload(0.5))


class TestDelayMoments:
    def test_never_has_no_delay(self):
        moments = delay_moments(Policy.never(), Workload(0.1))

        assert moments == DelayMoments(mean=0.0, second_moment=0.0)

    def test_threshold_delay(self):
        moments = delay_moments(Policy(tau_c=5.0, tau_s=10.0), Workload(0.1))

        assert moments.mean == pytest.approx(10.0 * math.exp(-0.5))
        assert moments.second_moment == pytest.approx(100.0 * math.exp(-0.5))

    def test_batching_adds_hold_to_delay(self):
        moments = delay_moments(Policy(tau_c=0.0, tau_s=10.0, tau_w=10.0), Workload(0.1))

        assert moments.mean == pytest.approx(20.0)
        assert moments.second_moment == pytest.approx(400.0)


class TestExceptionalFirstService:
    def test_zero_delay_is_mm1(self, low_load):
        s, w = low_load

        response = exceptional_first_service_response(s, w, DelayMoments(0.0, 0.0))

        assert response == pytest.approx(1.0 / 0.9, rel=EXACT)

    def test_deterministic_service_halves_queueing(self, low_load):
        s, w = low_load
        exponential = exceptional_first_service_response(s, w, DelayMoments(0.0, 0.0))

        deterministic = exceptional_first_service_response(s, w, DelayMoments(0.0, 0.0), cs2=0.0)

        queueing = exponential - 1.0
        assert deterministic == pytest.approx(1.0 + queueing / 2.0)

    def test_negative_cs2_raises(self, low_load):
        s, w = low_load

        with pytest.raises(DomainError):
            exceptional_first_service_response(s, w, DelayMoments(0.0, 0.0), cs2=-1.0)


class TestThresholdMetrics:
    def test_threshold_example(self, low_load):
        s, w = low_load

        metrics = threshold_metrics(s, w, Policy(tau_c=5.0, tau_s=10.0))

        assert metrics.response == pytest.approx(6.7742, rel=1e-4)
        assert metrics.power == pytest.approx(145.25, rel=1e-4)

    def test_batching_example(self, low_load):
        s, w = low_load

        metrics = threshold_metrics(s, w, Policy(tau_c=0.0, tau_s=10.0, tau_w=10.0))

        assert metrics.response == pytest.approx(14.4444, rel=1e-4)
        assert metrics.power == pytest.approx(88.0, rel=1e-9)

    def test_never_is_mm1(self, low_load):
        s, w = low_load

        assert threshold_metrics(s, w, Policy.never()) == mm1_metrics(s, w)

    def test_unstable_raises(self):
        s = ServerParams(p0=150.0, c=70.0, mu=1.0, f=0.1)

        with pytest.raises(UnstableSystemError):
            threshold_metrics(s, Workload(0.1), Policy(tau_c=0.0))

    def test_power_falls_as_threshold_shortens(self, low_load):
        s, w = low_load
        powers = [threshold_metrics(s, w, Policy(tau_c=t, tau_s=10.0)).power for t in (0, 1, 5, 20, 100)]

        assert powers == sorted(powers)

    def test_large_threshold_approaches_always_on(self, low_load):
        s, w = low_load

        metrics = threshold_metrics(s, w, Policy(tau_c=1000.0, tau_s=10.0))

        assert metrics.response == pytest.approx(1.0 / 0.9, rel=1e-9)
        assert metrics.power == pytest.approx(220.0, rel=1e-9)


class TestReductions:
    def test_plain_threshold_matches_direct_formula(self):
        for s, w, tau_c, tau_s, _ in fuzz_cases():
            lam, rho = w.lam, w.lam / s.service_rate
            survival = math.exp(-lam * tau_c)
            expected_response = 1.0 / (s.service_rate - lam) + (2 * tau_s + lam * tau_s ** 2) / (
                2 * (math.exp(lam * tau_c) + lam * tau_s)
            )
            expected_power = s.active_power * (
                1.0 - survival * (1.0 - rho) / (1.0 + lam * tau_s * survival)
            )

            metrics = threshold_metrics(s, w, Policy(tau_c=tau_c, tau_s=tau_s))

            assert metrics.response == pytest.approx(expected_response, rel=EXACT)
            assert metrics.power == pytest.approx(expected_power, rel=EXACT)

    def test_batching_matches_direct_formula(self):
        for s, w, tau_c, tau_s, tau_w in fuzz_cases(seed=7):
            lam, rho = w.lam, w.lam / s.service_rate
            d = tau_s + tau_w
            survival = math.exp(-lam * tau_c)
            expected_power = s.active_power * (
                1.0 - survival * (1.0 + lam * tau_w) * (1.0 - rho) / (1.0 + lam * d * survival)
            )

            metrics = threshold_metrics(s, w, Policy(tau_c=tau_c, tau_s=tau_s, tau_w=tau_w))

            assert metrics.power == pytest.approx(expected_power, rel=EXACT)

    def test_zero_hold_is_plain_threshold(self):
        for s, w, tau_c, tau_s, _ in fuzz_cases(seed=11):
            batching = threshold_metrics(s, w, Policy(tau_c=tau_c, tau_s=tau_s, tau_w=0.0))
            plain = threshold_metrics(s, w, Policy(tau_c=tau_c, tau_s=tau_s))

            assert batching == plain

    def test_never_is_mm1(self):
        for s, w, _, tau_s, tau_w in fuzz_cases(seed=13):
            metrics = threshold_metrics(s, w, Policy(tau_c=None, tau_s=tau_s, tau_w=tau_w))

            assert metrics.response == pytest.approx(1.0 / (s.service_rate - w.lam), rel=EXACT)
            assert metrics.power == pytest.approx(s.active_power, rel=EXACT)

    def test_free_immediate_shutdown(self):
        for s, w, _, _, _ in fuzz_cases(seed=17):
            metrics = threshold_metrics(s, w, Policy(tau_c=0.0, tau_s=0.0))
            expected = immediate_shutdown_metrics(s, w)

            assert metrics.response == pytest.approx(expected.response, rel=EXACT)
            assert metrics.power == pytest.approx(expected.power, rel=EXACT)

    def test_race_to_halt(self):
        for s, w, _, tau_s, _ in fuzz_cases(seed=19):
            full = s.with_frequency(1.0)
            if w.lam >= full.mu:
                continue
            metrics = race_to_halt_metrics(s, w, tau_s)
            expected = threshold_metrics(full, w, Policy(tau_c=0.0, tau_s=tau_s))

            assert metrics.response == pytest.approx(expected.response, rel=EXACT)
            assert metrics.power == pytest.approx(expected.power, rel=EXACT)


class TestOffFraction:
    def test_never_is_zero(self, low_load):
        s, w = low_load

        assert off_fraction(s, w, Policy.never()) == 0.0

    def test_power_is_active_power_times_on_fraction(self):
        for s, w, tau_c, tau_s, tau_w in fuzz_cases(seed=23):
            p = Policy(tau_c=tau_c, tau_s=tau_s, tau_w=tau_w)

            power = threshold_metrics(s, w, p).power
            off = off_fraction(s, w, p)

            assert power == pytest.approx(s.active_power * (1.0 - off), rel=EXACT)

    def test_free_immediate_shutdown_is_idle_share(self, low_load):
        s, w = low_load

        assert off_fraction(s, w, Policy(tau_c=0.0)) == pytest.approx(0.9)


class TestRaceToHalt:
    def test_example(self, low_load):
        s, w = low_load

        metrics = race_to_halt_metrics(s, w, 10.0)

        assert metrics.response == pytest.approx(8.6111, rel=1e-4)
        assert metrics.power == pytest.approx(121.0, rel=1e-9)

    def test_ignores_frequency(self, low_load):
        s, w = low_load

        assert race_to_halt_metrics(s.with_frequency(0.3), w, 10.0) == race_to_halt_metrics(s, w, 10.0)

    def test_negative_wake_up_raises(self, low_load):
        s, w = low_load

        with pytest.raises(DomainError):
            race_to_halt_metrics(s, w, -1.0)

    def test_batching_variant_without_hold(self, low_load):
        s, w = low_load

        metrics = batching_race_to_halt_metrics(s, w, 10.0, 0.0)

        assert metrics.response == pytest.approx(race_to_halt_metrics(s, w, 10.0).response, rel=EXACT)

    def test_batching_variant_example(self, low_load):
        s, w = low_load

        metrics = batching_race_to_halt_metrics(s, w, 10.0, 10.0)

        assert metrics.response == pytest.approx(14.4444, rel=1e-4)
        assert metrics.power == pytest.approx(88.0, rel=1e-9)

    def test_batching_variant_is_immediate_shutdown_with_hold(self):
        for s, w, _, tau_s, tau_w in fuzz_cases(seed=29, points=100):
            full = s.with_frequency(1.0)
            metrics = batching_race_to_halt_metrics(s, w, tau_s, tau_w)
            expected = threshold_metrics(full, w, Policy(tau_c=0.0, tau_s=tau_s, tau_w=tau_w))

            assert metrics == expected


class TestBudgetInversion:
    def test_round_trip(self, low_load):
        s, w = low_load
        budget = threshold_metrics(s, w, Policy(tau_c=5.0, tau_s=10.0)).response

        tau_c = tau_c_for_budget(s, w, 10.0, budget)

        assert tau_c == pytest.approx(5.0, rel=1e-9)

    def test_round_trip_fuzz(self):
        for s, w, tau_c, tau_s, tau_w in fuzz_cases(seed=29, points=200):
            if tau_s + tau_w == 0:
                continue
            p = Policy(tau_c=tau_c, tau_s=tau_s, tau_w=tau_w)
            budget = threshold_metrics(s, w, p).response
            if budget - 1.0 / (s.service_rate - w.lam) < 1e-9 * budget:
                continue

            solved = tau_c_for_budget(s, w, tau_s, budget, tau_w=tau_w)
            metrics = threshold_metrics(s, w, Policy(tau_c=solved, tau_s=tau_s, tau_w=tau_w))

            assert metrics.response == pytest.approx(budget, rel=1e-9)

    def test_constrained_power_matches_threshold_power(self, low_load):
        s, w = low_load
        metrics = threshold_metrics(s, w, Policy(tau_c=5.0, tau_s=10.0))

        power = constrained_power(s, w, 10.0, metrics.response)

        assert power == pytest.approx(metrics.power, rel=1e-9)

    def test_constrained_power_with_batching(self, low_load):
        s, w = low_load
        p = Policy(tau_c=3.0, tau_s=10.0, tau_w=5.0)
        metrics = threshold_metrics(s, w, p)

        power = constrained_power(s, w, 10.0, metrics.response, tau_w=5.0)

        assert power == pytest.approx(metrics.power, rel=1e-9)

    def test_budget_below_floor_is_infeasible(self, low_load):
        s, w = low_load

        with pytest.raises(InfeasibleBudgetError):
            tau_c_for_budget(s, w, 10.0, 1.0)

    def test_budget_at_floor_is_infeasible(self, low_load):
        s, w = low_load

        with pytest.raises(InfeasibleBudgetError):
            constrained_power(s, w, 10.0, 1.0 / 0.9)

    def test_budget_beyond_race_to_halt_is_too_loose(self, low_load):
        s, w = low_load

        with pytest.raises(BudgetTooLooseError):
            tau_c_for_budget(s, w, 10.0, 20.0)

    def test_infinite_budget_is_too_loose(self, low_load):
        s, w = low_load

        with pytest.raises(BudgetTooLooseError):
            tau_c_for_budget(s, w, 10.0, math.inf)

    def test_race_to_halt_budget_gives_zero_threshold(self, low_load):
        s, w = low_load
        budget = threshold_metrics(s, w, Policy(tau_c=0.0, tau_s=10.0)).response * (1.0 - 1e-12)

        assert tau_c_for_budget(s, w, 10.0, budget) == pytest.approx(0.0, abs=1e-6)

    def test_constrained_power_needs_wake_up_delay(self, low_load):
        s, w = low_load

        with pytest.raises(DomainError):
            constrained_power(s, w, 0.0, 5.0)


class TestSweetSpotFrequency:
    @pytest.mark.parametrize("c, expected", [(70.0, 0.6157), (10.0, 0.32183)])
    def test_closed_form(self, c, expected):
        s = ServerParams(p0=150.0, c=c, mu=1.0)

        assert power_minimizing_frequency(s) == pytest.approx(expected, rel=1e-4)

    @pytest.mark.parametrize("c", [10.0, 70.0])
    def test_grid_minimizer_matches_stationary_point(self, c):
        s = ServerParams(p0=150.0, c=c, mu=1.0)
        w = Workload(0.1)
        grid = np.arange(120, 1001) / 1000.0

        powers = [immediate_shutdown_metrics(s.with_frequency(f), w).power for f in grid]
        best = grid[int(np.argmin(powers))]

        assert abs(best - power_minimizing_frequency(s)) <= 2e-3

    def test_capped_at_full_speed(self):
        s = ServerParams(p0=10.0, c=100.0, mu=1.0)

        assert power_minimizing_frequency(s) == 1.0

    def test_needs_positive_powers(self):
        with pytest.raises(DomainError):
            power_minimizing_frequency(ServerParams(p0=150.0, c=0.0, mu=1.0))


class TestFlowSplit:
    def test_metrics(self):
        s = ServerParams(p0=150.0, c=10.0, mu=1.0, f=0.5)

        metrics = flow_split_metrics(s, Workload(0.7), 2)

        assert metrics.response == pytest.approx(1.0 / (0.5 - 0.35))
        assert metrics.power == pytest.approx(2 * (150.0 * 0.125 + 10.0))

    def test_single_server_is_mm1(self, low_load):
        s, w = low_load

        assert flow_split_metrics(s, w, 1) == mm1_metrics(s, w)

    @pytest.mark.parametrize("n", [0, -1, 2.5, True])
    def test_bad_plant_size_raises(self, low_load, n):
        s, w = low_load

        with pytest.raises(DomainError):
            flow_split_metrics(s, w, n)

    def test_unstable_split_raises(self):
        s = ServerParams(p0=150.0, c=10.0, mu=1.0, f=0.3)

        with pytest.raises(UnstableSystemError):
            flow_split_metrics(s, Workload(0.7), 2)

    def test_optimal_plant_size(self):
        s = ServerParams(p0=150.0, c=10.0, mu=1.0)

        optimum = optimal_flow_split(s, Workload(0.7))

        assert optimum.f_real == pytest.approx(0.32183, rel=1e-4)
        assert optimum.n_real == pytest.approx(2.175, rel=1e-3)
        assert optimum.n == 2
        assert optimum.f == pytest.approx(0.35)
        assert optimum.power >= optimum.relaxed_power
        assert optimum.relaxed_power == pytest.approx(2.17506 * 15.0, rel=1e-4)

    def test_clamped_optimum_is_stable(self):
        s = ServerParams(p0=150.0, c=10.0, mu=1.0)
        w = Workload(0.7)

        optimum = optimal_flow_split(s, w)
        metrics = flow_split_metrics(s.with_frequency(optimum.f), w, optimum.n)

        assert optimum.f > w.lam / (optimum.n * s.mu)
        assert metrics.power == pytest.approx(optimum.power, rel=1e-9)
        assert metrics.response > 0.0

"""Mode-train construction, capacity counting, and matched-filter scoring."""

import math

import numpy as np
import pytest

from afc.multimode import (SLOT_FACTOR, CapacityError, ModeTrain,
                           make_mode_train, matched_filter_efficiencies,
                           mode_capacity)

TWO_PI = 2.0 * math.pi

BIG_GAMMA = TWO_PI * 1.2e6
DELTA = TWO_PI * 20e3


class TestModeCapacity:
    def test_europium_scale_numbers(self):
        n, n_peaks, approx = mode_capacity(TWO_PI * 12e6, TWO_PI * 20e3)
        assert n == 100
        assert n_peaks == pytest.approx(600.0, rel=1e-12)
        assert approx == pytest.approx(100.0, rel=1e-12)

    def test_desk_scale_numbers(self):
        n, n_peaks, _ = mode_capacity(BIG_GAMMA, DELTA)
        assert n == 10
        assert n_peaks == pytest.approx(60.0, rel=1e-12)

    def test_dead_time_reduces_count(self):
        period = TWO_PI / DELTA
        tau = SLOT_FACTOR / BIG_GAMMA
        n, _, _ = mode_capacity(BIG_GAMMA, DELTA, T0=3.2 * tau)
        assert n == 6
        n, _, _ = mode_capacity(BIG_GAMMA, DELTA, T0=period)
        assert n == 0

    def test_rejects_bad_arguments(self):
        with pytest.raises(CapacityError):
            mode_capacity(1.0, 2.0)
        with pytest.raises(CapacityError):
            mode_capacity(BIG_GAMMA, DELTA, T0=-1.0)


class TestMakeModeTrain:
    def test_slot_and_centers(self):
        train = make_mode_train(10, BIG_GAMMA, DELTA)
        assert train.slot == pytest.approx(SLOT_FACTOR / BIG_GAMMA, rel=1e-12)
        assert np.all(np.diff(train.centers) > 0)
        assert train.centers[0] == pytest.approx(0.5 * train.slot, rel=1e-12)
        assert train.total_duration == pytest.approx(10 * train.slot,
                                                     rel=1e-12)
        assert train.fwhm < train.slot

    def test_capacity_is_the_fitting_limit(self):
        n, _, _ = mode_capacity(BIG_GAMMA, DELTA)
        make_mode_train(n, BIG_GAMMA, DELTA)
        with pytest.raises(CapacityError):
            make_mode_train(n + 1, BIG_GAMMA, DELTA)

    def test_amplitude_validation(self):
        with pytest.raises(CapacityError):
            make_mode_train(4, BIG_GAMMA, DELTA, amplitudes=np.ones(3))

    def test_envelope_superposes_modes(self):
        train = make_mode_train(3, BIG_GAMMA, DELTA,
                                amplitudes=[1.0, 0.0, 0.5])
        dt = train.fwhm / 24.0
        n = int(train.total_duration / dt)
        env = train.envelope(0.0, dt, n)
        m0 = train.mode(0, 0.0, dt, n)
        m2 = train.mode(2, 0.0, dt, n)
        np.testing.assert_allclose(env.samples, m0.samples + m2.samples,
                                   atol=1e-12)


class TestMatchedFilter:
    def synthetic_output(self, train, gain):
        """Ideal echo: the train delayed by one period and scaled."""
        period = TWO_PI / train.delta
        dt = train.fwhm / 24.0
        t0 = 0.0
        n = int(math.ceil((train.total_duration + period
                           + 2.0 * train.slot) / dt))
        # Evaluate the train one period in the past, then relabel the
        # grid: the samples then sit one period late.
        env = train.envelope(t0 - period, dt, n)
        from afc.solver import FieldEnvelope
        return FieldEnvelope(t0, dt, gain * env.samples)

    def test_recovers_uniform_efficiency(self):
        train = make_mode_train(5, BIG_GAMMA, DELTA)
        gain = 0.9 * np.exp(0.3j)
        report = matched_filter_efficiencies(
            self.synthetic_output(train, gain), train)
        np.testing.assert_allclose(report.per_mode_eta, 0.81, rtol=1e-3)
        assert report.uniformity_std < 1e-3

    def test_crosstalk_small_for_clean_echo(self):
        train = make_mode_train(5, BIG_GAMMA, DELTA)
        report = matched_filter_efficiencies(
            self.synthetic_output(train, 1.0), train)
        assert report.max_crosstalk < 1e-3

    def test_centroids_fifo(self):
        train = make_mode_train(5, BIG_GAMMA, DELTA)
        report = matched_filter_efficiencies(
            self.synthetic_output(train, 1.0), train)
        period = TWO_PI / train.delta
        np.testing.assert_allclose(report.centroids_out,
                                   train.centers + period, rtol=1e-4)
        assert np.all(np.diff(report.centroids_out) > 0)

    def test_warns_on_overlapping_templates(self):
        base = make_mode_train(4, BIG_GAMMA, DELTA)
        tight = ModeTrain(n_modes=4, slot=base.slot, centers=base.centers,
                          fwhm=1.2 * base.slot, amplitudes=base.amplitudes,
                          total_duration=base.total_duration,
                          delta=base.delta, big_gamma=base.big_gamma)
        with pytest.warns(UserWarning, match="overlap"):
            matched_filter_efficiencies(self.synthetic_output(tight, 1.0),
                                        tight)


class TestStoredTrain:
    def test_per_mode_efficiency(self, eu_scaled):
        _, _, _, report = eu_scaled
        assert abs(report.per_mode_eta.mean() - 0.905) < 0.03
        assert report.uniformity_std < 0.01

    def test_fifo_ordering(self, eu_scaled):
        _, _, _, report = eu_scaled
        assert np.all(np.diff(report.centroids_out) > 0)

    def test_crosstalk(self, eu_scaled):
        _, _, _, report = eu_scaled
        assert report.max_crosstalk < 1e-4

    def test_run_in_regime(self, eu_scaled):
        _, _, result, _ = eu_scaled
        assert result.in_regime
        assert result.energy_balance_residual < 0.01

    def test_echo_slots_line_up(self, eu_scaled):
        _, train, _, report = eu_scaled
        period = TWO_PI / train.delta
        drift = report.centroids_out - (train.centers + period)
        # The finite comb bandwidth advances the echo slightly; it must
        # stay well inside a slot.
        assert np.max(np.abs(drift)) < 0.1 * train.slot

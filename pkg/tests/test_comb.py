"""Comb density, Fourier transform, and discretization tests.

Reference numbers were frozen from 30-digit arbitrary-precision
evaluations of the defining sums and integrals.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from afc.comb import (FWHM_SIGMA, CombConfigError, CombParams, comb_density,
                      comb_ft, discretize_comb, effective_depth, finesse_of)

REF = CombParams(delta=1.0, gamma_tilde=0.02, big_gamma=10.0)


class TestCombParams:
    def test_finesse_definition(self):
        # F = delta / (sqrt(8 ln 2) gamma_tilde)
        assert finesse_of(REF) == pytest.approx(
            1.0 / (math.sqrt(8.0 * math.log(2.0)) * 0.02), rel=1e-12)

    def test_fwhm(self):
        assert REF.fwhm == pytest.approx(FWHM_SIGMA * 0.02, rel=1e-12)

    def test_from_finesse_roundtrip(self):
        p = CombParams.from_finesse(delta=1.0, finesse=8.0, big_gamma=10.0)
        assert p.finesse == pytest.approx(8.0, rel=1e-12)

    def test_well_separated(self):
        assert REF.well_separated
        assert not CombParams(delta=1.0, gamma_tilde=0.2,
                              big_gamma=10.0).well_separated

    @pytest.mark.parametrize("kwargs", [
        dict(delta=0.0, gamma_tilde=0.02, big_gamma=10.0),
        dict(delta=1.0, gamma_tilde=-1.0, big_gamma=10.0),
        dict(delta=1.0, gamma_tilde=0.02, big_gamma=10.0, peak_depth=-1.0),
        dict(delta=1.0, gamma_tilde=0.02, big_gamma=10.0, envelope="oval"),
        dict(delta=1.0, gamma_tilde=0.5, big_gamma=10.0),  # finesse <= 1
    ])
    def test_rejects_bad_parameters(self, kwargs):
        with pytest.raises(CombConfigError):
            CombParams(**kwargs)


class TestDensity:
    @pytest.mark.parametrize("x, expected", [
        (0.0, 1.0),
        (0.02, 0.60652944665252706),
        (0.25, 1.1765432167120658e-34),
        (1.0, 0.99501247919268231),
        (5.0, 0.8824969025845954),
    ])
    def test_reference_values(self, x, expected):
        assert comb_density(x, REF) == pytest.approx(expected, rel=1e-12,
                                                     abs=1e-300)

    def test_offset_translates_density(self):
        shifted = CombParams(delta=1.0, gamma_tilde=0.02, big_gamma=10.0,
                             delta0=0.3)
        x = np.linspace(-3.0, 3.0, 601)
        np.testing.assert_allclose(comb_density(x + 0.3, shifted),
                                   comb_density(x, REF), rtol=1e-12)

    def test_square_envelope_cuts_off(self):
        p = CombParams(delta=1.0, gamma_tilde=0.02, big_gamma=10.0,
                       envelope="square")
        assert comb_density(4.0, p) == pytest.approx(1.0, rel=1e-10)
        assert comb_density(6.0, p) == 0.0

    def test_vectorized_matches_scalar(self):
        x = np.array([0.0, 0.4, 1.0])
        vec = comb_density(x, REF)
        assert vec.shape == (3,)
        for xi, vi in zip(x, vec):
            assert comb_density(float(xi), REF) == vi

    @given(st.floats(-20.0, 20.0))
    @settings(max_examples=60, deadline=None)
    def test_density_non_negative(self, x):
        assert comb_density(x, REF) >= 0.0

    @given(st.integers(-8, 8))
    @settings(max_examples=20, deadline=None)
    def test_line_centers_are_local_maxima(self, j):
        c = float(j) * REF.delta
        assert comb_density(c, REF) >= comb_density(c + 0.3 * REF.delta, REF)
        assert comb_density(c, REF) >= comb_density(c - 0.3 * REF.delta, REF)


class TestEffectiveDepth:
    def test_duty_cycle_factor(self):
        # d_tilde = d/F * sqrt(pi / (4 ln 2))
        assert effective_depth(1.0, 1.0) == pytest.approx(
            1.0644670194312262, rel=1e-14)

    def test_scaling(self):
        assert effective_depth(40.0, 10.0) == pytest.approx(
            4.0 * effective_depth(10.0, 10.0), rel=1e-13)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            effective_depth(-1.0, 5.0)
        with pytest.raises(ValueError):
            effective_depth(1.0, 0.0)


class TestFourierTransform:
    @pytest.mark.parametrize("t, expected_abs", [
        (0.0, 1.2566370614359163),
        (0.5, 4.6830504920290831e-6),
        (2.0 * math.pi, 1.2467541205283732),
    ])
    def test_reference_magnitudes(self, t, expected_abs):
        assert abs(comb_ft(t, REF)) == pytest.approx(expected_abs, rel=1e-9)

    def test_offset_reference_value(self):
        shifted = CombParams(delta=1.0, gamma_tilde=0.02, big_gamma=10.0,
                             delta0=0.3)
        v = comb_ft(2.0 * math.pi, shifted)
        assert v.real == pytest.approx(-0.38526821105025882, rel=1e-9)
        assert v.imag == pytest.approx(-1.1857336305463426, rel=1e-9)

    def test_echo_recurrence_strength(self):
        # First temporal recurrence carries nearly the full t = 0 weight.
        ratio = abs(comb_ft(2.0 * math.pi, REF)) / abs(comb_ft(0.0, REF))
        assert 0.9 < ratio < 1.0

    def test_quadrature_route_agrees(self):
        t = np.array([0.0, 0.5, 2.0 * math.pi, 4.0 * math.pi])
        a = comb_ft(t, REF, method="analytic")
        q = comb_ft(t, REF, method="quadrature")
        scale = abs(a[0])
        assert np.max(np.abs(a - q)) < 1e-6 * scale

    @given(finesse=st.floats(3.0, 15.0), ratio=st.floats(8.0, 25.0),
           frac=st.floats(0.0, 1.0), periods=st.floats(0.0, 2.0))
    @settings(max_examples=20, deadline=None)
    def test_duality_property(self, finesse, ratio, frac, periods):
        p = CombParams.from_finesse(delta=1.0, finesse=finesse,
                                    big_gamma=ratio, delta0=frac)
        t = periods * 2.0 * math.pi
        a = comb_ft(t, p, method="analytic")
        q = comb_ft(t, p, method="quadrature")
        scale = abs(comb_ft(0.0, p, method="analytic"))
        assert abs(a - q) < 1e-6 * scale

    def test_square_envelope_needs_quadrature(self):
        p = CombParams(delta=1.0, gamma_tilde=0.02, big_gamma=10.0,
                       envelope="square")
        with pytest.raises(ValueError):
            comb_ft(0.0, p, method="analytic")
        assert abs(comb_ft(0.0, p, method="quadrature")) > 0.0

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError):
            comb_ft(0.0, REF, method="magic")


class TestDiscretization:
    def test_weights_integrate_the_density(self):
        comb = discretize_comb(REF)
        # Adaptive quadrature over the whole band struggles with dozens of
        # narrow lines; integrate line by line instead.
        centers = np.unique(np.rint(comb.detunings / REF.delta)) * REF.delta
        target = sum(quad(lambda x: comb_density(x, REF),
                          c - 0.5 * REF.delta, c + 0.5 * REF.delta,
                          epsabs=1e-13)[0]
                     for c in centers)
        assert comb.weights.sum() == pytest.approx(target, rel=1e-6)

    def test_detunings_sorted_and_weights_positive(self):
        comb = discretize_comb(REF)
        assert np.all(np.diff(comb.detunings) > 0)
        assert np.all(comb.weights > 0)

    def test_node_count(self):
        comb = discretize_comb(REF, nodes_per_peak=9)
        assert comb.detunings.size == comb.n_peaks * 9

    def test_peak_cutoff_trims_lines(self):
        wide = discretize_comb(REF, peak_cutoff=1e-4)
        narrow = discretize_comb(REF, peak_cutoff=1e-1)
        assert narrow.n_peaks < wide.n_peaks

    def test_offset_moves_nodes(self):
        shifted = CombParams(delta=1.0, gamma_tilde=0.02, big_gamma=10.0,
                             delta0=0.3)
        comb = discretize_comb(shifted)
        j = np.rint((comb.detunings - 0.3) / shifted.delta)
        residual = comb.detunings - 0.3 - j * shifted.delta
        assert np.max(np.abs(residual)) < 4.0 * shifted.gamma_tilde

    def test_rejects_degenerate_requests(self):
        with pytest.raises(CombConfigError):
            discretize_comb(REF, nodes_per_peak=3)
        with pytest.raises(CombConfigError):
            discretize_comb(REF, peak_cutoff=2.0)
        tiny = CombParams(delta=1.0, gamma_tilde=0.02, big_gamma=0.4,
                          envelope="square")
        with pytest.raises(CombConfigError):
            discretize_comb(tiny)

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oamspdc.analysis import (SpectrumFit, central_peak_half_width, default_background,
                              effective_dimension, fit_lorentzian, fit_lorentzian_weights,
                              predicted_angle_curve, spectrum_fwhm)
from oamspdc.core import (AngularMask, CoincidenceCurve, EdgeTruncationError, InvalidArgument,
                          InvalidCurve, OamSpectrum, make_lorentzian_spectrum,
                          make_single_mode_spectrum, make_uniform_spectrum)
from oamspdc.projection import fourier_relation_vs_rotation
from oamspdc.synthetic import PoissonSampler, add_background

FOUR_SLIT = AngularMask.n_slits(4, 7.0)
GRID = np.arange(-45.0, 45.0 + 1e-9, 0.1)


def lorentz_participation_ratio(fwhm, l_max):
    """Direct summation, written out independently of the package."""
    g2 = (fwhm / 2) ** 2
    w = [1.0 / (l * l + g2) for l in range(-l_max, l_max + 1)]
    total = math.fsum(w)
    return 1.0 / math.fsum((x / total) ** 2 for x in w)


@pytest.mark.parametrize("fwhm", [10, 20])
def test_spectrum_fwhm_of_lorentzian(fwhm):
    assert spectrum_fwhm(make_lorentzian_spectrum(fwhm, 30)) == pytest.approx(fwhm, abs=0.1)


def test_spectrum_fwhm_edge_truncation():
    with pytest.raises(EdgeTruncationError):
        spectrum_fwhm(make_uniform_spectrum(20))
    with pytest.raises(EdgeTruncationError):
        spectrum_fwhm(make_lorentzian_spectrum(80, 10))


def test_spectrum_fwhm_uses_outermost_crossing():
    # bimodal weights with a dip below half maximum between the lobes
    w = np.array([0, 0.1, 1.0, 0.3, 0.2, 0.3, 1.0, 0.1, 0])
    spec = OamSpectrum.from_weights(-4, 4, w)
    left = -3 + (0.5 - 0.1) / 0.9
    assert spectrum_fwhm(spec) == pytest.approx(2 * abs(left), rel=1e-12)


@pytest.mark.parametrize("fwhm", [3.0, 10.0, 20.0, 37.5])
def test_fit_lorentzian_noiseless(fwhm):
    fit = fit_lorentzian(make_lorentzian_spectrum(fwhm, 60))
    assert fit.fwhm_l == pytest.approx(fwhm, rel=1e-6)
    assert fit.fwhm_l == 2 * fit.gamma
    assert not fit.at_bound


def test_fit_lorentzian_poisson_monte_carlo():
    spec = make_lorentzian_spectrum(20, 30)
    hits = 0
    for seed in range(100):
        counts = PoissonSampler(seed).draws(spec.weights * 1e4)
        fit = fit_lorentzian_weights(spec.ls, counts)
        hits += abs(fit.gamma - 10) <= 1.0
    assert hits >= 95


def test_fit_lorentzian_mismatch_is_visible():
    fit = fit_lorentzian(make_uniform_spectrum(30))
    good = fit_lorentzian(make_lorentzian_spectrum(20, 30))
    assert fit.at_bound
    assert fit.relative_residual > 0.1
    assert fit.residual_rms > 1e10 * good.residual_rms
    with pytest.raises(InvalidArgument):
        fit_lorentzian_weights([0, 1, 2, 3], [1, 1, 1, 1])


def test_half_width_of_triangle():
    x = np.arange(-30, 30.5, 0.5)
    tri = CoincidenceCurve("delta_phi_deg", x, np.clip(1 - np.abs(x) / 10, 0, None))
    assert central_peak_half_width(tri, 0.0) == pytest.approx(5.0, abs=1e-12)
    x = 0.7 * np.arange(-42, 43)  # crossings fall between samples
    tri = CoincidenceCurve("delta_phi_deg", x, np.clip(1 - np.abs(x) / 10, 0, None))
    assert central_peak_half_width(tri, 0.0) == pytest.approx(5.0, abs=1e-12)


def test_half_width_invariances():
    x = np.arange(-40, 40.25, 0.25)
    base = np.exp(-np.abs(x) / 6) + 0.05 * np.cos(np.deg2rad(4 * x)) ** 2
    curve = CoincidenceCurve("delta_phi_deg", x, base / base.max())
    w = central_peak_half_width(curve, 0.0)
    scaled = CoincidenceCurve("delta_phi_deg", x, 7.5 * curve.p)
    assert central_peak_half_width(scaled, 0.0) == pytest.approx(w, rel=1e-12)
    for rate in (0.1, 0.5, 2.0):
        noisy = add_background(curve, rate)
        assert central_peak_half_width(noisy, rate / (1 + rate)) == pytest.approx(w, rel=1e-9)


def test_half_width_rejects_bad_curves():
    x = np.arange(-10, 11.0)
    with pytest.raises(InvalidCurve):
        central_peak_half_width(CoincidenceCurve("l_signal", x, np.ones_like(x)))
    with pytest.raises(InvalidCurve):  # peak away from zero
        central_peak_half_width(CoincidenceCurve("delta_phi_deg", x, np.exp(-(x - 6) ** 2)), 0.0)
    with pytest.raises(InvalidCurve):  # crossing outside grid
        central_peak_half_width(CoincidenceCurve("delta_phi_deg", x, np.exp(-x ** 2 / 1e4)), 0.0)
    with pytest.raises(InvalidArgument):
        central_peak_half_width(CoincidenceCurve("delta_phi_deg", x, np.exp(-x ** 2)), 1.0)


def test_default_background_is_lowest_decile():
    x = np.arange(20.0)
    p = np.linspace(0.1, 1.0, 20)
    curve = CoincidenceCurve("delta_phi_deg", x, p)
    assert default_background(curve) == pytest.approx(np.mean(p[:2]))


def test_reference_angular_widths_fourier_route():
    w10 = central_peak_half_width(fourier_relation_vs_rotation(make_lorentzian_spectrum(10), FOUR_SLIT, GRID), 0.0)
    w20 = central_peak_half_width(fourier_relation_vs_rotation(make_lorentzian_spectrum(20), FOUR_SLIT, GRID), 0.0)
    assert w10 == pytest.approx(12, abs=2)
    assert w20 == pytest.approx(8, abs=2)


def test_predicted_angle_curve_examples():
    fit20 = SpectrumFit(gamma=10.0, residual_rms=0.0)
    w7 = central_peak_half_width(predicted_angle_curve(fit20, FOUR_SLIT, GRID), 0.0)
    assert w7 == pytest.approx(8, abs=2)
    narrow = AngularMask.n_slits(4, 0.5)
    w_narrow = central_peak_half_width(predicted_angle_curve(fit20, narrow, GRID), 0.0)
    assert w_narrow < w7
    fit40 = SpectrumFit(gamma=20.0, residual_rms=0.0)
    assert central_peak_half_width(predicted_angle_curve(fit40, FOUR_SLIT, GRID), 0.0) < w7
    with pytest.raises(InvalidArgument):
        predicted_angle_curve(fit20, FOUR_SLIT, GRID, route="nope")


@pytest.mark.parametrize("route", ["fourier", "projection"])
def test_fourier_duality_monotone(route):
    widths = [central_peak_half_width(predicted_angle_curve(SpectrumFit(f / 2, 0.0), FOUR_SLIT, GRID,
                                                            route=route), 0.0)
              for f in (5, 10, 20, 30)]
    assert all(b < a for a, b in zip(widths, widths[1:])), widths


def test_effective_dimension_examples():
    assert effective_dimension(make_uniform_spectrum(20)) == pytest.approx(41, abs=1e-9)
    assert effective_dimension(make_single_mode_spectrum(0, 5)) == 1.0
    d = effective_dimension(make_lorentzian_spectrum(20, 30))
    assert d == pytest.approx(lorentz_participation_ratio(20, 30), rel=1e-9)
    assert d == pytest.approx(40.5801, abs=1e-4)


@settings(max_examples=100)
@given(st.lists(st.floats(0, 1), min_size=3, max_size=41).filter(lambda w: len(w) % 2 == 1 and sum(w) > 0))
def test_effective_dimension_bounds(w):
    l_max = len(w) // 2
    spec = OamSpectrum.from_weights(-l_max, l_max, w)
    d = effective_dimension(spec)
    n = len(w)
    assert 1 - 1e-9 <= d <= n + 1e-9
    flat = np.allclose(spec.weights, 1 / n, rtol=0, atol=1e-12)
    assert (abs(d - n) < 1e-9) == flat or (flat and abs(d - n) < 1e-6)

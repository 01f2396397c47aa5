import numpy as np
import pytest
from scipy.integrate import quad

from oamspdc.core import (AngularMask, InvalidArgument, ProjectionMode, TwoPhotonState,
                          make_lorentzian_spectrum, make_single_mode_spectrum,
                          make_uniform_spectrum)
from oamspdc.projection import (brute_force_amplitude, brute_force_fourier_relation,
                                coincidence_amplitude, coincidence_vs_rotation,
                                fourier_relation_vs_rotation, mode_coefficient,
                                oam_interference_scan)
from oamspdc import selftest

SQRT_2PI = np.sqrt(2 * np.pi)
FOUR_SLIT = AngularMask.n_slits(4, 7.0)
TWO_SLIT = AngularMask(((0.0, 18.0), (45.0, 18.0)))


def quad_coefficient(mode, l):
    """Adaptive quadrature over each slit; independent of both analytic and trapezoid paths."""
    m = l - mode.carrier_l
    total = 0j
    for c, w in mode.mask.slits:
        lo, hi = np.deg2rad(c - w / 2), np.deg2rad(c + w / 2)
        re = quad(lambda p: np.cos(m * p), lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
        im = quad(lambda p: -np.sin(m * p), lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
        total += re + 1j * im
    return total / SQRT_2PI


def test_full_circle_orthogonality():
    h = ProjectionMode.hologram(0)
    assert mode_coefficient(h, 0) == pytest.approx(SQRT_2PI)
    assert np.all(mode_coefficient(h, np.arange(1, 40)) == 0)


def test_single_slit_dc_term():
    delta = 23.0
    mode = ProjectionMode(AngularMask.single(0, delta))
    assert mode_coefficient(mode, 0) == pytest.approx(np.deg2rad(delta) / SQRT_2PI, rel=1e-15)


def test_four_slit_selection_rule_against_quadrature():
    mode = ProjectionMode(FOUR_SLIT)
    for l in range(-13, 14):
        analytic = mode_coefficient(mode, l)
        assert analytic == pytest.approx(quad_coefficient(mode, l), abs=1e-12)
        if l % 4:
            assert abs(analytic) < 1e-14
        else:
            assert abs(analytic) > 1e-3


@pytest.mark.parametrize("seed", range(5))
def test_mode_coefficient_matches_adaptive_quadrature(seed):
    rng = np.random.default_rng(seed)
    mode = ProjectionMode(selftest.random_mask(rng), int(rng.integers(-4, 5)))
    for l in rng.integers(-30, 31, 8):
        assert mode_coefficient(mode, int(l)) == pytest.approx(quad_coefficient(mode, int(l)), abs=1e-12)


@pytest.mark.parametrize("mask, L", [(TWO_SLIT, 500), (AngularMask.single(10, 60), 500),
                                     (FOUR_SLIT, 2000)])
def test_parseval(mask, L):
    # the 1/L tail grows with the number of slit edges; eight edges on 28 deg need L > 500
    ls = np.arange(-L, L + 1)
    total = np.sum(np.abs(mode_coefficient(ProjectionMode(mask), ls)) ** 2)
    assert total == pytest.approx(np.deg2rad(mask.open_arc_deg), rel=0.01)


def test_carrier_shift_is_exact():
    ls = np.arange(-40, 41)
    for m in (-7, 3, 11):
        a = mode_coefficient(ProjectionMode(TWO_SLIT, m), ls)
        b = mode_coefficient(ProjectionMode(TWO_SLIT, 0), ls - m)
        assert np.array_equal(a, b)


def test_rotation_multiplies_by_phase():
    ls = np.arange(-30, 31)
    theta = 17.3
    for carrier in (0, 4):
        a = mode_coefficient(ProjectionMode(FOUR_SLIT.rotated(theta), carrier), ls)
        b = mode_coefficient(ProjectionMode(FOUR_SLIT, carrier), ls)
        np.testing.assert_allclose(a, b * np.exp(-1j * (ls - carrier) * np.deg2rad(theta)), atol=1e-14)


def test_identical_masks_depend_only_on_relative_rotation():
    state = make_lorentzian_spectrum(10, 30)
    mask = AngularMask.single(0, 18)
    base = coincidence_amplitude(state, ProjectionMode(mask.rotated(30)), ProjectionMode(mask))
    for shift in (11.0, 97.0, 250.0):
        moved = coincidence_amplitude(state, ProjectionMode(mask.rotated(30 + shift)),
                                      ProjectionMode(mask.rotated(shift)))
        assert abs(moved) ** 2 == pytest.approx(abs(base) ** 2, rel=1e-10)


def test_hologram_anti_correlation():
    state = make_uniform_spectrum(20)
    assert abs(coincidence_amplitude(state, ProjectionMode.hologram(3), ProjectionMode.hologram(-3))) ** 2 > 0
    for ls in range(-20, 21):
        for li in range(-20, 21):
            p = abs(coincidence_amplitude(state, ProjectionMode.hologram(ls), ProjectionMode.hologram(li))) ** 2
            if ls != -li:
                assert p <= 1e-12
            else:
                assert p == pytest.approx(2 * np.pi * 2 * np.pi / 41, rel=1e-12)


def test_aligned_slits_maximize_coincidences():
    state = make_uniform_spectrum(20)
    mask = AngularMask.single(0, 18)
    grid = np.arange(-180, 180, 1.0)
    curve = coincidence_vs_rotation(state, mask, 0, 0, grid)
    assert curve.x[np.argmax(curve.p)] == 0
    assert curve.p[curve.x == 0][0] == 1.0


def test_signal_rotation_equals_opposite_idler_rotation_for_even_spectra():
    state = make_lorentzian_spectrum(14, 25)
    mask = AngularMask(((5.0, 12.0), (100.0, 30.0)))
    for dphi in (-33.0, 8.0, 71.0):
        a = coincidence_amplitude(state, ProjectionMode(mask.rotated(dphi), 2), ProjectionMode(mask, -1))
        b = coincidence_amplitude(state, ProjectionMode(mask, 2), ProjectionMode(mask.rotated(-dphi), -1))
        assert abs(a) ** 2 == pytest.approx(abs(b) ** 2, rel=1e-10)


def test_four_slit_curve_is_90_periodic_with_several_maxima():
    state = make_lorentzian_spectrum(10, 30)
    grid = np.arange(-180.0, 180.0, 0.5)
    curve = coincidence_vs_rotation(state, FOUR_SLIT, 0, 0, grid)
    p = curve.p
    shift = int(90 / 0.5)
    np.testing.assert_allclose(p[:-shift], p[shift:], atol=1e-12)
    # principal maxima; truncation at l_max leaves weak side lobes below 0.5
    peaks = [x for i, x in enumerate(curve.x[1:-1], 1)
             if p[i] > p[i - 1] and p[i] > p[i + 1] and p[i] > 0.5]
    assert peaks == [-90.0, 0.0, 90.0]
    assert p[np.argmin(np.abs(curve.x))] == 1.0


def test_offset_single_slits_give_near_zero():
    state = make_uniform_spectrum(30)
    mask = AngularMask.single(0, 18)
    curve = coincidence_vs_rotation(state, mask, 0, 0, [0.0, 45.0])
    assert curve.p[1] < 0.01
    a45 = brute_force_amplitude(state, ProjectionMode(mask.rotated(45)), ProjectionMode(mask), 4096)
    a0 = brute_force_amplitude(state, ProjectionMode(mask), ProjectionMode(mask), 4096)
    assert curve.p[1] == pytest.approx(abs(a45) ** 2 / abs(a0) ** 2, abs=1e-6)


def test_rotation_grid_validation():
    with pytest.raises(InvalidArgument):
        coincidence_vs_rotation(make_uniform_spectrum(3), FOUR_SLIT, 0, 0, [])
    with pytest.raises(InvalidArgument):
        coincidence_vs_rotation(make_uniform_spectrum(3), FOUR_SLIT, 0, 0, [1.0, 0.0])


def test_two_slit_interference_period_eight():
    state = make_uniform_spectrum(30)
    curve = oam_interference_scan(state, TWO_SLIT, TWO_SLIT, 0, np.arange(-20, 21))
    assert curve.x.size == 41
    p = dict(zip(curve.x.astype(int), curve.p))
    # cos(l_s * 45 deg) fringe: dark at l_s = 4 mod 8, bright at multiples of 8
    for dark in (-20, -12, -4, 4, 12, 20):
        assert p[dark] < 1e-3
    for bright, nb in ((0, 4), (8, 4), (16, 4)):
        assert p[bright] > p[bright + nb] and p[bright] > p[bright - nb]
    # oracle on every point
    idler = ProjectionMode(TWO_SLIT, 0)
    ref = np.array([abs(brute_force_amplitude(state, ProjectionMode(TWO_SLIT, int(l)), idler, 4096)) ** 2
                    for l in curve.x])
    np.testing.assert_allclose(curve.p, ref / ref.max(), atol=1e-6)


def test_full_circle_scan_is_a_delta():
    state = make_lorentzian_spectrum(10, 30)
    full = AngularMask.full_circle()
    curve = oam_interference_scan(state, full, full, 0, np.arange(-20, 21))
    assert curve.p[curve.x == 0][0] == 1.0
    assert np.all(curve.p[curve.x != 0] == 0)
    # idler_l = 3 selects the pair (-3, 3)
    curve = oam_interference_scan(state, full, full, 3, np.arange(-20, 21))
    assert curve.x[np.argmax(curve.p)] == -3


def test_interference_scan_validation():
    state = make_uniform_spectrum(5)
    with pytest.raises(InvalidArgument):
        oam_interference_scan(state, TWO_SLIT, TWO_SLIT, 0, [])
    with pytest.raises(InvalidArgument):
        oam_interference_scan(state, TWO_SLIT, TWO_SLIT, 9, np.arange(-3, 4))


def test_brute_force_full_circle_orthogonality():
    state = make_uniform_spectrum(10)
    a = brute_force_amplitude(state, ProjectionMode.hologram(2), ProjectionMode.hologram(-2), 256)
    b = brute_force_amplitude(state, ProjectionMode.hologram(2), ProjectionMode.hologram(2), 256)
    assert a == pytest.approx(coincidence_amplitude(state, ProjectionMode.hologram(2),
                                                    ProjectionMode.hologram(-2)), rel=1e-12)
    assert abs(b) < 1e-12
    with pytest.raises(InvalidArgument):
        brute_force_amplitude(state, ProjectionMode.hologram(0), ProjectionMode.hologram(0), 128)


def test_brute_force_converges_on_dyadic_refinement():
    rng = np.random.default_rng(2)
    state = selftest.random_state(rng)
    sig, idl = ProjectionMode(TWO_SLIT, 3), ProjectionMode(FOUR_SLIT, -1)
    exact = coincidence_amplitude(state, sig, idl)
    errs = [abs(brute_force_amplitude(state, sig, idl, n) - exact) for n in (256, 512, 1024, 2048, 4096)]
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    # second-order rule: error drops ~4x per doubling
    assert errs[-2] / errs[-1] == pytest.approx(4, rel=0.05)


def test_oracle_equivalence_randomized_quick():
    report = selftest.run(n_cases=40, seed=99)
    assert report["passed"], report["failures"]


def test_fourier_relation_matches_angle_space_oracle():
    spec = make_lorentzian_spectrum(20, 30)
    grid = np.arange(-20.0, 20.5, 2.0)
    curve = fourier_relation_vs_rotation(spec, FOUR_SLIT, grid)
    ref = brute_force_fourier_relation(spec, FOUR_SLIT, grid, n_grid=128)
    np.testing.assert_allclose(curve.p, np.clip(ref, 0, None) / ref.max(), atol=2e-5)


def test_fourier_relation_for_product_state_is_flat():
    curve = fourier_relation_vs_rotation(make_single_mode_spectrum(0, 5), FOUR_SLIT, np.arange(-40, 41.0))
    np.testing.assert_allclose(curve.p, 1.0)

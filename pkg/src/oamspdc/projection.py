"""Coincidence amplitudes of the two-photon OAM state on azimuthal analyzer modes.

An analyzer mode is a mask M(phi) times exp(i * carrier * phi). Its circular
Fourier coefficient

    A(l) = (1/sqrt(2 pi)) * integral_mask exp(-i (l - carrier) phi) dphi

couples it to OAM order l. For the state sum_l c_l |l>_s |-l>_i the
coincidence amplitude is sum_l c_l conj(A_s(l)) conj(A_i(-l)).
"""
from __future__ import annotations

import numpy as np

from .core import (AngularMask, CoincidenceCurve, InvalidArgument, InvalidCurve, OamSpectrum,
                   ProjectionMode, as_grid, as_state)

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def _slit_integrals(mask: AngularMask, m: np.ndarray) -> np.ndarray:
    """Integral over the mask of exp(-i m phi), for integer array m."""
    m = np.asarray(m)
    if mask.is_full_circle:
        return np.where(m == 0, 2.0 * np.pi, 0.0).astype(complex)
    mf = m.astype(float)
    zero = mf == 0
    safe = np.where(zero, 1.0, mf)
    out = np.zeros(m.shape, complex)
    for center_deg, width_deg in mask.slits:
        c = np.deg2rad(center_deg)
        d = np.deg2rad(width_deg)
        envelope = np.where(zero, d, 2.0 / safe * np.sin(safe * d / 2.0))
        out += np.exp(-1j * mf * c) * envelope
    return out


def mode_coefficient(mode: ProjectionMode, l):
    """Circular Fourier coefficient of the analyzer mode at OAM order ``l``.

    Accepts a scalar or an integer array.
    """
    l_arr = np.asarray(l)
    m = l_arr - mode.carrier_l
    out = _slit_integrals(mode.mask, m) / _SQRT_2PI
    return complex(out) if out.ndim == 0 else out


def coincidence_amplitude(state, signal: ProjectionMode, idler: ProjectionMode) -> complex:
    """Projection amplitude of the pair state onto signal x idler analyzer modes.

    The sum runs over the state's own l range; |A|^2 is the (unnormalized)
    coincidence probability.
    """
    spec = as_state(state).spectrum
    ls = spec.ls
    a_s = mode_coefficient(signal, ls)
    a_i = mode_coefficient(idler, -ls)
    return complex(np.sum(spec.amplitudes * np.conj(a_s) * np.conj(a_i)))


def _rotation_matrix(ls, carrier, dphi_deg):
    return np.exp(-1j * np.outer(np.deg2rad(dphi_deg), ls - carrier))


def _normalized_curve(label, x, p) -> CoincidenceCurve:
    peak = p.max()
    if not peak > 0:
        raise InvalidCurve("coincidence probability vanishes on the whole grid")
    return CoincidenceCurve(label, x, p / peak)


def coincidence_vs_rotation(state, mask: AngularMask, carrier_s: int, carrier_i: int,
                            dphi_grid) -> CoincidenceCurve:
    """|A|^2 against rotation of the signal mask by Δφ (degrees), unit maximum.

    Rotating a mask by θ multiplies its coefficients by exp(-i (l - carrier) θ).
    """
    grid = as_grid(dphi_grid, "dphi_grid")
    spec = as_state(state).spectrum
    ls = spec.ls
    a_s = mode_coefficient(ProjectionMode(mask, carrier_s), ls)
    a_i = mode_coefficient(ProjectionMode(mask, carrier_i), -ls)
    terms = spec.amplitudes * np.conj(a_s) * np.conj(a_i)
    amps = np.conj(_rotation_matrix(ls, carrier_s, grid)) @ terms
    return _normalized_curve("delta_phi_deg", grid, np.abs(amps) ** 2)


def oam_interference_scan(state, signal_mask: AngularMask, idler_mask: AngularMask,
                          idler_l: int, l_scan) -> CoincidenceCurve:
    """Coincidences against the signal carrier l_s with the idler carrier fixed."""
    scan = np.asarray(l_scan)
    if scan.size == 0:
        raise InvalidArgument("empty l_scan")
    if not np.all(scan == np.round(scan)):
        raise InvalidArgument("l_scan must contain integers")
    scan = as_grid(scan.astype(int), "l_scan").astype(int)
    spec = as_state(state).spectrum
    if not spec.l_min <= idler_l <= spec.l_max:
        raise InvalidArgument(f"idler_l={idler_l} outside state range")
    idler = ProjectionMode(idler_mask, idler_l)
    p = np.array([abs(coincidence_amplitude(spec, ProjectionMode(signal_mask, int(ls)), idler)) ** 2
                  for ls in scan])
    return _normalized_curve("l_signal", scan.astype(float), p)


def fourier_relation_vs_rotation(spectrum: OamSpectrum, mask: AngularMask,
                                 dphi_grid) -> CoincidenceCurve:
    """Angular correlation predicted from the spiral spectrum by the Fourier relation.

    The pair's angular-difference density is taken as the circular Fourier
    transform of the weights P_l; detection through identical masks, one
    rotated by Δφ, then gives sum_l P_l |A(l)|^2 exp(i l Δφ). The slit
    transmission enters through |A(l)|^2. Small negative values from hard
    truncation of P_l are clipped to zero.
    """
    grid = as_grid(dphi_grid, "dphi_grid")
    ls = spectrum.ls
    coeff = np.abs(mode_coefficient(ProjectionMode(mask, 0), ls)) ** 2
    p = np.real(np.conj(_rotation_matrix(ls, 0, grid)) @ (spectrum.weights * coeff))
    return _normalized_curve("delta_phi_deg", grid, np.clip(p, 0.0, None))


# ---------------------------------------------------------------------------
# quadrature oracles


def _slit_nodes(center_deg, width_deg, n_grid):
    c, d = np.deg2rad(center_deg), np.deg2rad(width_deg)
    phi = np.linspace(c - d / 2, c + d / 2, n_grid)
    w = np.full(n_grid, (phi[1] - phi[0]))
    w[0] *= 0.5
    w[-1] *= 0.5
    return phi, w


def _mask_nodes(mask: AngularMask, n_grid: int):
    """Trapezoid nodes and weights, ``n_grid`` points per slit.

    A full circle uses the periodic rule (n_grid points, equal weights).
    """
    if mask.is_full_circle:
        phi = np.arange(n_grid) * (2.0 * np.pi / n_grid)
        return phi, np.full(n_grid, 2.0 * np.pi / n_grid)
    nodes = [_slit_nodes(c, w, n_grid) for c, w in mask.slits]
    return np.concatenate([p for p, _ in nodes]), np.concatenate([w for _, w in nodes])


def quadrature_coefficient(mode: ProjectionMode, ls, n_grid: int = 8192) -> np.ndarray:
    phi, w = _mask_nodes(mode.mask, n_grid)
    m = np.asarray(ls) - mode.carrier_l
    return (np.exp(-1j * np.outer(m, phi)) @ w) / _SQRT_2PI


def brute_force_amplitude(state, signal: ProjectionMode, idler: ProjectionMode,
                          n_grid: int = 8192) -> complex:
    """Same as :func:`coincidence_amplitude` with coefficients from trapezoidal quadrature."""
    if n_grid < 256:
        raise InvalidArgument("n_grid must be >= 256")
    spec = as_state(state).spectrum
    ls = spec.ls
    a_s = quadrature_coefficient(signal, ls, n_grid)
    a_i = quadrature_coefficient(idler, -ls, n_grid)
    return complex(np.sum(spec.amplitudes * np.conj(a_s) * np.conj(a_i)))


def brute_force_fourier_relation(spectrum: OamSpectrum, mask: AngularMask, dphi_grid,
                                 n_grid: int = 256, n_table: int = 40001) -> np.ndarray:
    """Unnormalized Fourier-relation curve by direct double integration in angle.

    Evaluates  integral integral M(phi - Δφ) M(phi') g(phi - phi') dphi dphi'
    with g(x) = (1/2pi) sum_l P_l cos(l x) tabulated on ``n_table`` points over
    one period, so the slit Fourier coefficients never appear. ``n_grid``
    trapezoid nodes per slit.
    """
    grid = as_grid(dphi_grid, "dphi_grid")
    x_table = np.linspace(-np.pi, np.pi, n_table)
    g_table = np.cos(np.outer(x_table, spectrum.ls)) @ spectrum.weights / (2.0 * np.pi)
    phi, w = _mask_nodes(mask, n_grid)
    out = np.empty(grid.size)
    for k, dphi in enumerate(np.deg2rad(grid)):
        diff = (phi[:, None] + dphi) - phi[None, :]
        diff = (diff + np.pi) % (2.0 * np.pi) - np.pi
        out[k] = w @ np.interp(diff, x_table, g_table) @ w
    return out

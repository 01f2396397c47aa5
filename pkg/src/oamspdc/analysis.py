"""Observables extracted from spiral spectra and coincidence curves."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import least_squares

from . import projection
from .core import (DEFAULT_L_MAX, AngularMask, CoincidenceCurve, EdgeTruncationError, FitFailure,
                   InvalidArgument, InvalidCurve, OamSpectrum, make_lorentzian_spectrum)


@dataclass(frozen=True)
class SpectrumFit:
    gamma: float
    residual_rms: float
    scale: float = 1.0
    at_bound: bool = False
    relative_residual: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise InvalidArgument(f"gamma must be positive, got {self.gamma}")

    @property
    def fwhm_l(self) -> float:
        return 2.0 * self.gamma

    def model(self, ls) -> np.ndarray:
        ls = np.asarray(ls, float)
        return self.scale / (ls ** 2 + self.gamma ** 2)


def _interp_crossing(x0, y0, x1, y1, level):
    if y1 == y0:
        return x0
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def spectrum_fwhm(spectrum: OamSpectrum) -> float:
    """Full width at half maximum of P_l in units of l.

    Crossings are linearly interpolated between integer samples; with
    several crossings on one side the outermost is used.
    """
    P = spectrum.weights
    ls = spectrum.ls.astype(float)
    i_max = int(np.argmax(P))
    half = P[i_max] / 2.0
    above = np.nonzero(P >= half)[0]
    lo, hi = above[0], above[-1]
    if lo == 0 or hi == P.size - 1:
        raise EdgeTruncationError("half-maximum crossing not bracketed by the l range")
    left = _interp_crossing(ls[lo - 1], P[lo - 1], ls[lo], P[lo], half)
    right = _interp_crossing(ls[hi], P[hi], ls[hi + 1], P[hi + 1], half)
    return float(right - left)


def fit_lorentzian_weights(ls, weights) -> SpectrumFit:
    """Least-squares fit of P_l ~ s / (l^2 + gamma^2).

    gamma is capped at the largest sampled |l|; a spectrum too flat to show
    its half maximum ends on that cap with ``at_bound`` set and a residual
    (``relative_residual`` = rms / mean P) that makes the mismatch plain.
    """
    ls = np.asarray(ls, float)
    P = np.asarray(weights, float)
    if np.unique(ls).size < 5:
        raise InvalidArgument("need at least 5 distinct l samples")
    total = P.sum()
    if not total > 0:
        raise FitFailure("spectrum has no weight")
    P = P / total
    # seed gamma from the discrete half-width when it is bracketed
    above = np.nonzero(P >= P.max() / 2)[0]
    gamma_max = float(np.max(np.abs(ls)))
    gamma0 = min(max(0.5 * (ls[above[-1]] - ls[above[0]] + 1), 0.5), 0.99 * gamma_max)
    s0 = P.max() * gamma0 ** 2

    def resid(x):
        g, s = x
        return s / (ls ** 2 + g ** 2) - P

    def jac(x):
        g, s = x
        den = ls ** 2 + g ** 2
        return np.column_stack([-2.0 * s * g / den ** 2, 1.0 / den])

    sol = least_squares(resid, [gamma0, s0], jac=jac, method="trf",
                        bounds=([1e-9, 0.0], [gamma_max, np.inf]), x_scale="jac",
                        xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=500)
    if sol.status <= 0:
        raise FitFailure(f"Lorentzian fit did not converge: {sol.message} "
                         f"(gamma={sol.x[0]:.4g}, nfev={sol.nfev})")
    g, s = sol.x
    rms = float(np.sqrt(np.mean(sol.fun ** 2)))
    return SpectrumFit(gamma=float(g), residual_rms=rms, scale=float(s),
                       at_bound=bool(sol.active_mask[0] != 0 or g >= gamma_max * (1 - 1e-9)),
                       relative_residual=rms / float(P.mean()))


def fit_lorentzian(spectrum: OamSpectrum) -> SpectrumFit:
    return fit_lorentzian_weights(spectrum.ls, spectrum.weights)


def default_background(curve: CoincidenceCurve) -> float:
    """Mean of the lowest decile of points, as a fraction of the curve maximum."""
    p = np.sort(curve.p)
    n = max(1, p.size // 10)
    return float(p[:n].mean() / curve.p.max())


def central_peak_half_width(curve: CoincidenceCurve, background: Optional[float] = None) -> float:
    """Half width at half maximum (degrees) of the peak at Δφ = 0.

    ``background`` is a fraction of the curve maximum; it is subtracted and
    the central peak renormalized to one before the half-maximum crossings
    are interpolated on each side. The two half-widths are averaged.
    """
    if curve.scan_label != "delta_phi_deg":
        raise InvalidCurve("central_peak_half_width needs a delta_phi_deg curve")
    if background is None:
        background = default_background(curve)
    if not 0.0 <= background < 1.0:
        raise InvalidArgument("background must lie in [0, 1)")
    x, p = curve.x, curve.p
    i0 = int(np.argmin(np.abs(x)))
    # climb to the local maximum nearest zero
    while 0 < i0 < x.size - 1 and max(p[i0 - 1], p[i0 + 1]) > p[i0]:
        i0 = i0 - 1 if p[i0 - 1] > p[i0 + 1] else i0 + 1
    if i0 == 0 or i0 == x.size - 1:
        raise InvalidCurve("central maximum is not an interior grid point")
    step = np.max(np.diff(x))
    if abs(x[i0]) > step + 1e-12:
        raise InvalidCurve(f"central maximum found at {x[i0]} deg, not at zero")
    b = background * p.max()
    if p[i0] <= b:
        raise InvalidCurve("central peak does not rise above the background")
    q = (p - b) / (p[i0] - b)

    r = i0
    while r < x.size - 1 and q[r + 1] > 0.5:
        r += 1
    if r == x.size - 1:
        raise InvalidCurve("right half-maximum crossing outside the grid")
    right = _interp_crossing(x[r], q[r], x[r + 1], q[r + 1], 0.5)
    k = i0
    while k > 0 and q[k - 1] > 0.5:
        k -= 1
    if k == 0:
        raise InvalidCurve("left half-maximum crossing outside the grid")
    left = _interp_crossing(x[k], q[k], x[k - 1], q[k - 1], 0.5)
    return float(0.5 * ((right - x[i0]) + (x[i0] - left)))


def predicted_angle_curve(fit: SpectrumFit, mask: AngularMask, dphi_grid,
                          l_max: int = DEFAULT_L_MAX, route: str = "fourier") -> CoincidenceCurve:
    """Angular correlation expected from a Lorentzian spectrum fit.

    ``route="fourier"`` transforms the fitted weights into an angular
    density and smears it with the finite slits; ``route="projection"``
    projects the pure state with amplitudes sqrt(P_l) onto the rotated masks.
    """
    spectrum = make_lorentzian_spectrum(fit.fwhm_l, l_max)
    if route == "fourier":
        return projection.fourier_relation_vs_rotation(spectrum, mask, dphi_grid)
    if route == "projection":
        return projection.coincidence_vs_rotation(spectrum, mask, 0, 0, dphi_grid)
    raise InvalidArgument(f"unknown route {route!r}")


def effective_dimension(spectrum: OamSpectrum) -> float:
    """Participation ratio 1 / sum P_l^2."""
    P = spectrum.weights
    return float(1.0 / np.sum(P * P))

"""Far-field SPDC intensity model I(r) = sinc^2(a r^2 / f^2 + alpha) and its fit."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import least_squares

from .core import DegenerateRegime, FitFailure, InvalidArgument, PhaseMatchModel, RadialProfile

_SERIES_CUTOFF = 1e-4
SEED_ALPHAS = (-3.0, -2.0, -1.0, 0.0, 1.0)
MAX_ITERATIONS = 200


def sinc(x):
    """Unnormalized sinc, sin(x)/x, with a Taylor branch near zero."""
    x = np.asarray(x, float)
    small = np.abs(x) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)


def dsinc(x):
    """Derivative of sin(x)/x."""
    x = np.asarray(x, float)
    small = np.abs(x) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    return np.where(small, -x / 3.0 + x ** 3 / 30.0,
                    (np.cos(safe) - np.sin(safe) / safe) / safe)


def _argument(model: PhaseMatchModel, r):
    return model.a * np.asarray(r, float) ** 2 / model.f ** 2 + model.alpha


def intensity(model: PhaseMatchModel, r):
    """Normalized far-field intensity at radius ``r`` (metres) in the lens focal plane."""
    r = np.asarray(r, float)
    if np.any(r < 0):
        raise InvalidArgument("r must be non-negative")
    out = sinc(_argument(model, r)) ** 2
    return float(out) if out.ndim == 0 else out


def physics_to_model(k_p: float, k_s: float, k_i: float, L: float, n: float,
                     f: float) -> PhaseMatchModel:
    """Map wavevector magnitudes (1/m), crystal length and index onto (a, alpha, f).

    alpha = (k_p - k_s - k_i) L / 2 and a = (k_s + k_i) L / (4 n^2).
    """
    for name, v in (("k_p", k_p), ("k_s", k_s), ("k_i", k_i), ("L", L), ("n", n), ("f", f)):
        if not v > 0:
            raise InvalidArgument(f"{name} must be positive, got {v}")
    alpha = (k_p - k_s - k_i) * L / 2.0
    a = (k_s + k_i) * L / (4.0 * n ** 2)
    return PhaseMatchModel(a=a, alpha=alpha, f=f)


def opening_angle(model: PhaseMatchModel) -> float:
    """Half-angle (rad) from the axis to the first intensity minimum.

    The first zero sits where the sinc argument reaches pi, so the angle is
    sqrt((pi - alpha) / a), independent of f.
    """
    if model.alpha <= -np.pi:
        raise DegenerateRegime(
            f"alpha={model.alpha} <= -pi: the on-axis point already lies beyond a sinc zero, "
            "so the first minimum is inside a bright ring")
    return float(np.sqrt((np.pi - model.alpha) / model.a))


def synthesize_profile(model: PhaseMatchModel, r_max: float, n_samples: int) -> RadialProfile:
    if not r_max > 0:
        raise InvalidArgument("r_max must be positive")
    if int(n_samples) != n_samples or n_samples < 2:
        raise InvalidArgument("n_samples must be an integer >= 2")
    r = np.linspace(0.0, r_max, int(n_samples))
    return RadialProfile(r, intensity(model, r))


@dataclass(frozen=True)
class FitReport:
    model: PhaseMatchModel
    residual_rms: float
    iterations: int
    converged: bool
    scale: float = 1.0


def _residuals(params, r2, data, sqrt_w):
    a, alpha, s = params
    return sqrt_w * (s * sinc(a * r2 + alpha) ** 2 - data)


def _jacobian(params, r2, data, sqrt_w):
    a, alpha, s = params
    u = a * r2 + alpha
    sc = sinc(u)
    d_u = 2.0 * s * sc * dsinc(u)
    return np.column_stack([d_u * r2, d_u, sc * sc]) * sqrt_w[:, None]


def fit_phasematch(profile: RadialProfile, f: float, initial: Optional[PhaseMatchModel] = None,
                   poisson_weights: bool = False,
                   max_iterations: int = MAX_ITERATIONS) -> FitReport:
    """Least-squares estimate of (a, alpha) from a radial intensity cut.

    Minimizes sum (s * I_model(r_i) - intensity_i)^2 over (a, alpha, s); the scale
    sits on the model because scaling the data admits the trivial s = 0 fit. Without
    ``initial`` the fit is restarted from alpha in ``SEED_ALPHAS`` and the best
    basin wins; a is seeded from the first deep minimum of the profile.

    ``poisson_weights`` treats intensities as counts with variance max(count, 1).
    """
    if not f > 0:
        raise InvalidArgument("f must be positive")
    r, data = profile.r, profile.intensity
    if r.size < 8:
        raise InvalidArgument("need at least 8 samples")
    if np.ptp(data) == 0:
        raise FitFailure("degenerate profile: all intensities equal")
    peak = data.max()
    if peak <= 0:
        raise FitFailure("profile has no positive intensity")
    # work in dimensionless u = r^2/f^2 scaled by the sampled range so that a ~ O(1..10)
    r2_scale = (r.max() / f) ** 2
    r2 = (r / f) ** 2 / r2_scale
    y = data / peak
    if poisson_weights:
        sqrt_w = 1.0 / np.sqrt(np.maximum(data, 1.0))
        sqrt_w = sqrt_w / sqrt_w.max()
    else:
        sqrt_w = np.ones_like(y)

    if initial is not None:
        starts = [(initial.a * r2_scale, initial.alpha)]
    else:
        starts = [(_seed_a(r2, y, alpha0), alpha0) for alpha0 in SEED_ALPHAS]

    best = None
    last_error = None
    for a0, alpha0 in starts:
        s0 = 1.0
        try:
            sol = least_squares(_residuals, x0=[a0, alpha0, s0], jac=_jacobian,
                                args=(r2, y, sqrt_w), method="trf",
                                bounds=([1e-12, -np.inf, 0.0], [np.inf, np.inf, np.inf]),
                                x_scale="jac", max_nfev=max_iterations,
                                xtol=1e-14, ftol=1e-14, gtol=1e-14)
        except ValueError as exc:  # non-finite residuals at a pathological start
            last_error = exc
            continue
        cost = float(np.sum(sol.fun ** 2))
        if best is None or cost < best[0]:
            best = (cost, sol)
    if best is None:
        raise FitFailure(f"all starts failed: {last_error}")
    cost, sol = best
    a_hat, alpha_hat, s_hat = sol.x
    model = PhaseMatchModel(a=a_hat / r2_scale, alpha=float(alpha_hat), f=f)
    resid = s_hat * peak * intensity(model, r) - data
    return FitReport(model=model, residual_rms=float(np.sqrt(np.mean(resid ** 2))),
                     iterations=int(sol.nfev), converged=bool(sol.status > 0),
                     scale=float(s_hat * peak))


def _seed_a(r2, y, alpha0):
    """Initial a placing the first model zero at the first deep minimum of the data."""
    target = np.pi - alpha0
    # first interior sample below 10% of peak after the global maximum region
    below = np.nonzero(y < 0.1 * y.max())[0]
    after_peak = below[below > np.argmax(y)]
    u_min = r2[after_peak[0]] if after_peak.size else r2[-1] / 2
    if u_min <= 0:
        u_min = r2[-1] / 2
    return max(target, 0.1) / u_min

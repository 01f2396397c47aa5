"""Seeded noise models for synthetic coincidence and CCD data.

Every random draw goes through :class:`PoissonSampler`, whose algorithm is
pinned so seeded outputs do not depend on numpy's own Poisson routine:

* uniforms come from ``numpy.random.PCG64`` seeded with
  ``SeedSequence([seed, stream])``, consumed in blocks of ``BLOCK`` doubles
  from ``Generator.random``;
* lam < 30: sequential-search inversion (one uniform per variate);
* lam >= 30: Hörmann's transformed rejection with squeeze (PTRS), two
  uniforms per attempt.
"""
from __future__ import annotations

import math

import numpy as np

from .core import CoincidenceCurve, InvalidArgument, RadialProfile

BLOCK = 1024
INVERSION_LIMIT = 30.0


class PoissonSampler:
    """Deterministic Poisson variates for one (seed, stream) pair. Not thread-safe."""

    def __init__(self, seed: int, stream: int = 0):
        if not 0 <= int(seed) < 2 ** 64:
            raise InvalidArgument("seed must be a 64-bit unsigned integer")
        ss = np.random.SeedSequence([int(seed), int(stream)])
        self._rng = np.random.Generator(np.random.PCG64(ss))
        self._buf = np.empty(0)
        self._pos = 0

    def uniform(self) -> float:
        if self._pos >= self._buf.size:
            self._buf = self._rng.random(BLOCK)
            self._pos = 0
        u = float(self._buf[self._pos])
        self._pos += 1
        return u

    def _inversion(self, lam: float) -> int:
        u = self.uniform()
        k = 0
        p = math.exp(-lam)
        cdf = p
        while u > cdf:
            k += 1
            p *= lam / k
            cdf += p
            if p == 0.0 and cdf < u:  # rounding left the tail unreachable
                break
        return k

    def _ptrs(self, lam: float) -> int:
        slam = math.sqrt(lam)
        loglam = math.log(lam)
        b = 0.931 + 2.53 * slam
        a = -0.059 + 0.02483 * b
        invalpha = 1.1239 + 1.1328 / (b - 3.4)
        vr = 0.9277 - 3.6224 / (b - 2.0)
        while True:
            U = self.uniform() - 0.5
            V = self.uniform()
            us = 0.5 - abs(U)
            k = math.floor((2.0 * a / us + b) * U + lam + 0.43)
            if us >= 0.07 and V <= vr:
                return k
            if k < 0 or (us < 0.013 and V > us):
                continue
            if (math.log(V) + math.log(invalpha) - math.log(a / (us * us) + b)
                    <= -lam + k * loglam - math.lgamma(k + 1)):
                return k

    def draw(self, lam: float) -> int:
        if lam < 0 or not math.isfinite(lam):
            raise InvalidArgument(f"Poisson mean must be finite and >= 0, got {lam}")
        if lam == 0:
            return 0
        if lam < INVERSION_LIMIT:
            return self._inversion(lam)
        return self._ptrs(lam)

    def draws(self, lams) -> np.ndarray:
        lams = np.asarray(lams, float)
        return np.array([self.draw(x) for x in lams.ravel()], dtype=np.int64).reshape(lams.shape)


def poissonize_curve(curve: CoincidenceCurve, peak_counts: int, seed: int,
                     stream: int = 0) -> CoincidenceCurve:
    """Replace a normalized curve by Poisson counts with mean p * peak_counts."""
    if int(peak_counts) != peak_counts or peak_counts <= 0:
        raise InvalidArgument("peak_counts must be a positive integer")
    counts = PoissonSampler(seed, stream).draws(curve.p * peak_counts)
    top = counts.max()
    p = counts / top if top > 0 else np.zeros(counts.shape)
    return CoincidenceCurve(curve.scan_label, curve.x, p, counts)


def poissonize_profile(profile: RadialProfile, peak_counts: int, seed: int,
                       stream: int = 0) -> RadialProfile:
    """CCD-style radial cut: intensities become counts with the given peak mean."""
    if int(peak_counts) != peak_counts or peak_counts <= 0:
        raise InvalidArgument("peak_counts must be a positive integer")
    top = profile.intensity.max()
    if not top > 0:
        raise InvalidArgument("profile has no positive intensity")
    lam = np.clip(profile.intensity, 0.0, None) / top * peak_counts
    return RadialProfile(profile.r, PoissonSampler(seed, stream).draws(lam).astype(float))


def add_background(curve: CoincidenceCurve, rate: float) -> CoincidenceCurve:
    """Add a flat background ``rate`` (in units of the curve maximum) and renormalize.

    Counts, if any, are dropped since they no longer match ``p``. The
    equivalent declared background for analysis is ``rate / (1 + rate)``.
    """
    if not rate >= 0:
        raise InvalidArgument("background rate must be >= 0")
    if rate == 0:
        return curve
    p = curve.p / curve.p.max() + rate
    return CoincidenceCurve(curve.scan_label, curve.x, p / p.max())

"""Domain types shared across the package.

Angles at the API boundary are in degrees, lengths in metres. Everything
internal to the numerics is radians.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

DEFAULT_L_MAX = 30
NORM_TOL = 1e-9


class InvalidArgument(ValueError):
    pass


class FitFailure(RuntimeError):
    pass


class EdgeTruncationError(ValueError):
    """Half-maximum crossing is not bracketed inside the sampled range."""


class InvalidCurve(ValueError):
    pass


class UndefinedVisibility(ValueError):
    pass


class EmptySubspace(ValueError):
    pass


class DegenerateRegime(ValueError):
    """Opening angle requested where alpha <= -pi (first zero is inside a bright ring)."""


def _frozen(a, dtype=None):
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class OamSpectrum:
    """Two-photon amplitudes c_l over a contiguous OAM range l_min..l_max."""

    l_min: int
    l_max: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not (self.l_min <= 0 <= self.l_max):
            raise InvalidArgument(f"need l_min <= 0 <= l_max, got {self.l_min}, {self.l_max}")
        amps = _frozen(self.amplitudes, complex)
        if amps.shape != (self.l_max - self.l_min + 1,):
            raise InvalidArgument(
                f"expected {self.l_max - self.l_min + 1} amplitudes, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise InvalidArgument("amplitudes must be finite")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidArgument(f"spectrum not normalized: sum |c|^2 = {norm!r}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_weights(cls, l_min: int, l_max: int, weights) -> "OamSpectrum":
        """Build real non-negative amplitudes sqrt(P_l) from unnormalized weights."""
        w = np.asarray(weights, float)
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise InvalidArgument("weights must be finite and non-negative")
        total = w.sum()
        if total <= 0:
            raise InvalidArgument("weights sum to zero")
        return cls(l_min, l_max, np.sqrt(w / total))

    @property
    def ls(self) -> np.ndarray:
        return np.arange(self.l_min, self.l_max + 1)

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def weight(self, l: int) -> float:
        if not self.l_min <= l <= self.l_max:
            return 0.0
        return float(self.weights[l - self.l_min])

    def __eq__(self, other):
        if not isinstance(other, OamSpectrum):
            return NotImplemented
        return (self.l_min == other.l_min and self.l_max == other.l_max
                and np.array_equal(self.amplitudes, other.amplitudes))

    __hash__ = None


@dataclass(frozen=True)
class TwoPhotonState:
    """sum_l c_l |l>_s |-l>_i. The idler index is implied by the signal index."""

    spectrum: OamSpectrum


@dataclass(frozen=True)
class AngularMask:
    """Set of angular slits, each ``(center_deg, width_deg)``."""

    slits: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        slits = tuple((float(c) % 360.0, float(w)) for c, w in self.slits)
        if not slits:
            raise InvalidArgument("mask needs at least one slit")
        for c, w in slits:
            if not (np.isfinite(c) and np.isfinite(w)) or w <= 0:
                raise InvalidArgument(f"bad slit ({c}, {w})")
        total = sum(w for _, w in slits)
        if total > 360.0 + 1e-9:
            raise InvalidArgument(f"total open arc {total} exceeds 360 deg")
        for i in range(len(slits)):
            for j in range(i + 1, len(slits)):
                (c1, w1), (c2, w2) = slits[i], slits[j]
                gap = abs(c1 - c2) % 360.0
                gap = min(gap, 360.0 - gap)
                if gap < (w1 + w2) / 2 - 1e-9:
                    raise InvalidArgument(f"slits {slits[i]} and {slits[j]} overlap")
        object.__setattr__(self, "slits", slits)

    @classmethod
    def full_circle(cls) -> "AngularMask":
        return cls(((0.0, 360.0),))

    @classmethod
    def single(cls, center_deg: float, width_deg: float) -> "AngularMask":
        return cls(((center_deg, width_deg),))

    @classmethod
    def n_slits(cls, n: int, width_deg: float, spacing_deg: Optional[float] = None,
                start_deg: float = 0.0) -> "AngularMask":
        """``n`` equal slits; spacing defaults to an even 360/n split."""
        if n < 1:
            raise InvalidArgument("n must be >= 1")
        spacing = 360.0 / n if spacing_deg is None else spacing_deg
        return cls(tuple((start_deg + k * spacing, width_deg) for k in range(n)))

    @property
    def is_full_circle(self) -> bool:
        return len(self.slits) == 1 and self.slits[0][1] >= 360.0

    @property
    def open_arc_deg(self) -> float:
        return sum(w for _, w in self.slits)

    def rotated(self, angle_deg: float) -> "AngularMask":
        return AngularMask(tuple((c + angle_deg, w) for c, w in self.slits))

    def split(self) -> Tuple["AngularMask", ...]:
        """One single-slit mask per slit, in slit order."""
        return tuple(AngularMask((s,)) for s in self.slits)

    def contains(self, phi_deg) -> np.ndarray:
        phi = np.asarray(phi_deg, float) % 360.0
        inside = np.zeros(phi.shape, bool)
        for c, w in self.slits:
            d = np.abs((phi - c + 180.0) % 360.0 - 180.0)
            inside |= d <= w / 2
        return inside


@dataclass(frozen=True)
class ProjectionMode:
    """Angular mask times an OAM carrier phase exp(i carrier_l phi)."""

    mask: AngularMask
    carrier_l: int = 0

    @classmethod
    def hologram(cls, l: int) -> "ProjectionMode":
        return cls(AngularMask.full_circle(), int(l))

    @classmethod
    def slits(cls, mask: AngularMask) -> "ProjectionMode":
        return cls(mask, 0)


@dataclass(frozen=True)
class PhaseMatchModel:
    a: float
    alpha: float
    f: float

    def __post_init__(self):
        if not (self.a > 0 and np.isfinite(self.a)):
            raise InvalidArgument(f"a must be positive, got {self.a}")
        if not (self.f > 0 and np.isfinite(self.f)):
            raise InvalidArgument(f"f must be positive, got {self.f}")
        if not np.isfinite(self.alpha):
            raise InvalidArgument("alpha must be finite")

    @property
    def collinear(self) -> bool:
        return self.alpha == 0


SCAN_LABELS = ("delta_phi_deg", "l_signal")


@dataclass(frozen=True)
class CoincidenceCurve:
    scan_label: str
    x: np.ndarray
    p: np.ndarray
    counts: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.scan_label not in SCAN_LABELS:
            raise InvalidArgument(f"scan_label must be one of {SCAN_LABELS}")
        x = _frozen(self.x, float)
        p = _frozen(self.p, float)
        if x.ndim != 1 or x.shape != p.shape or x.size == 0:
            raise InvalidArgument("x and p must be equal-length non-empty 1-D arrays")
        if np.any(np.diff(x) <= 0):
            raise InvalidArgument("x must be strictly increasing")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise InvalidArgument("p must be finite and non-negative")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)
        if self.counts is not None:
            counts = _frozen(self.counts, np.int64)
            if counts.shape != x.shape or np.any(counts < 0):
                raise InvalidArgument("counts must be non-negative and aligned with x")
            object.__setattr__(self, "counts", counts)

    def normalized(self) -> "CoincidenceCurve":
        peak = self.p.max()
        if peak <= 0:
            raise InvalidCurve("cannot normalize an all-zero curve")
        return CoincidenceCurve(self.scan_label, self.x, self.p / peak, self.counts)

    def __eq__(self, other):
        if not isinstance(other, CoincidenceCurve):
            return NotImplemented
        same_counts = (self.counts is None and other.counts is None) or (
            self.counts is not None and other.counts is not None
            and np.array_equal(self.counts, other.counts))
        return (self.scan_label == other.scan_label and np.array_equal(self.x, other.x)
                and np.array_equal(self.p, other.p) and same_counts)

    __hash__ = None


@dataclass(frozen=True)
class RadialProfile:
    r: np.ndarray
    intensity: np.ndarray

    def __post_init__(self):
        r = _frozen(self.r, float)
        inten = _frozen(self.intensity, float)
        if r.ndim != 1 or r.shape != inten.shape:
            raise InvalidArgument("r and intensity must be equal-length 1-D arrays")
        if np.any(r < 0) or np.any(np.diff(r) <= 0):
            raise InvalidArgument("r must be non-negative and strictly increasing")
        if not np.all(np.isfinite(inten)):
            raise InvalidArgument("intensities must be finite")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "intensity", inten)

    def __eq__(self, other):
        if not isinstance(other, RadialProfile):
            return NotImplemented
        return np.array_equal(self.r, other.r) and np.array_equal(self.intensity, other.intensity)

    __hash__ = None


@dataclass(frozen=True)
class EtendueBudget:
    area: float
    solid_angle: float
    wavelength: float

    def __post_init__(self):
        for name in ("area", "solid_angle", "wavelength"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise InvalidArgument(f"{name} must be positive and finite, got {v}")


@dataclass(frozen=True)
class QubitDensityMatrix:
    """Pure two-qubit state in the {slit 1, slit 2} angular basis.

    ``amplitudes`` is ordered (11, 12, 21, 22) with the signal slit first;
    ``entries`` is the matching 4x4 projector.
    """

    amplitudes: np.ndarray
    entries: np.ndarray = field(init=False)

    def __post_init__(self):
        amps = _frozen(self.amplitudes, complex)
        if amps.shape != (4,):
            raise InvalidArgument("expected a 4-vector")
        if abs(np.vdot(amps, amps).real - 1.0) > NORM_TOL:
            raise InvalidArgument("amplitudes not normalized")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "entries", _frozen(np.outer(amps, amps.conj())))

    def reduced(self, which: str = "signal") -> np.ndarray:
        """2x2 reduced density matrix of one photon."""
        m = self.amplitudes.reshape(2, 2)
        if which == "signal":
            return m @ m.conj().T
        if which == "idler":
            return m.T @ m.conj()
        raise InvalidArgument("which must be 'signal' or 'idler'")


def make_lorentzian_spectrum(fwhm_l: float, l_max: int = DEFAULT_L_MAX) -> OamSpectrum:
    """Spectrum with Lorentzian weights P_l ~ 1/(l^2 + gamma^2), gamma = fwhm_l/2."""
    if not fwhm_l > 0:
        raise InvalidArgument(f"fwhm_l must be positive, got {fwhm_l}")
    if int(l_max) != l_max or l_max < 1:
        raise InvalidArgument(f"l_max must be a positive integer, got {l_max}")
    l_max = int(l_max)
    gamma = fwhm_l / 2.0
    ls = np.arange(-l_max, l_max + 1)
    amps = np.sqrt(1.0 / (ls.astype(float) ** 2 + gamma ** 2))
    amps /= np.sqrt(np.sum(amps ** 2))
    # enforce exact evenness after floating-point normalization
    amps = 0.5 * (amps + amps[::-1])
    return OamSpectrum(-l_max, l_max, amps)


def make_uniform_spectrum(l_max: int = DEFAULT_L_MAX) -> OamSpectrum:
    if int(l_max) != l_max or l_max < 1:
        raise InvalidArgument(f"l_max must be a positive integer, got {l_max}")
    l_max = int(l_max)
    n = 2 * l_max + 1
    return OamSpectrum(-l_max, l_max, np.full(n, 1.0 / np.sqrt(n)))


def make_single_mode_spectrum(l: int = 0, l_max: int = 0) -> OamSpectrum:
    """All weight on one OAM order; a product state."""
    l_max = max(int(l_max), abs(int(l)))
    amps = np.zeros(2 * l_max + 1)
    amps[l + l_max] = 1.0
    return OamSpectrum(-l_max, l_max, amps)


def as_state(state_or_spectrum) -> TwoPhotonState:
    if isinstance(state_or_spectrum, TwoPhotonState):
        return state_or_spectrum
    if isinstance(state_or_spectrum, OamSpectrum):
        return TwoPhotonState(state_or_spectrum)
    raise InvalidArgument(f"expected TwoPhotonState or OamSpectrum, got {type(state_or_spectrum)}")


def as_grid(values: Sequence[float], what: str = "grid") -> np.ndarray:
    g = np.asarray(values, float).ravel()
    if g.size == 0:
        raise InvalidArgument(f"empty {what}")
    if np.any(np.diff(g) <= 0):
        raise InvalidArgument(f"{what} must be strictly increasing")
    return g

"""Étendue bookkeeping for matching detection optics to the SPDC source."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EtendueBudget, InvalidArgument

KLYSHKO_RTOL = 1e-9


def etendue(budget: EtendueBudget) -> float:
    """E = A * Omega in m^2 sr."""
    return budget.area * budget.solid_angle


def mode_count(budget: EtendueBudget) -> float:
    """Number of transverse modes E / lambda^2."""
    return etendue(budget) / budget.wavelength ** 2


def solid_angle_from_half_angle(theta: float) -> float:
    """Solid angle of a cone of half-angle ``theta`` (rad): 2 pi (1 - cos theta).

    For small cones this approaches pi * theta**2.
    """
    if not 0.0 < theta < np.pi / 2:
        raise InvalidArgument(f"half-angle must lie in (0, pi/2), got {theta}")
    # 1 - cos(theta) = 2 sin^2(theta/2) avoids cancellation for tiny theta
    return float(4.0 * np.pi * np.sin(theta / 2.0) ** 2)


def beam_area(waist: float) -> float:
    if not waist > 0:
        raise InvalidArgument("waist must be positive")
    return float(np.pi * waist ** 2)


@dataclass(frozen=True)
class KlyshkoResult:
    passed: bool
    margin: float

    def __bool__(self):
        return self.passed


def klyshko_check(generation: EtendueBudget, detection: EtendueBudget) -> KlyshkoResult:
    """Detection must accept at least the generated étendue (equality passes)."""
    margin = etendue(detection) / etendue(generation)
    return KlyshkoResult(passed=bool(margin >= 1.0 - KLYSHKO_RTOL), margin=float(margin))

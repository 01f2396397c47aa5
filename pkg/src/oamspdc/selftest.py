"""Randomized agreement checks between the analytic kernel and the quadrature oracle."""
from __future__ import annotations

import numpy as np

from .core import AngularMask, InvalidArgument, OamSpectrum, ProjectionMode, TwoPhotonState
from .projection import brute_force_amplitude, coincidence_amplitude, mode_coefficient

REL_TOL = 1e-6
N_GRID = 8192


def random_mask(rng: np.random.Generator, max_slits: int = 4, max_width: float = 40.0) -> AngularMask:
    """Random non-overlapping slits (rejection-sampled)."""
    while True:
        n = int(rng.integers(1, max_slits + 1))
        slits = tuple((float(rng.uniform(0, 360)), float(rng.uniform(2.0, max_width)))
                      for _ in range(n))
        try:
            return AngularMask(slits)
        except InvalidArgument:
            continue


def random_state(rng: np.random.Generator, l_max_range=(5, 25)) -> TwoPhotonState:
    l_max = int(rng.integers(l_max_range[0], l_max_range[1] + 1))
    amps = rng.normal(size=2 * l_max + 1) + 1j * rng.normal(size=2 * l_max + 1)
    return TwoPhotonState(OamSpectrum(-l_max, l_max, amps / np.linalg.norm(amps)))


def random_mode(rng: np.random.Generator) -> ProjectionMode:
    carrier = int(rng.integers(-5, 6))
    if rng.random() < 0.1:
        return ProjectionMode.hologram(carrier)
    return ProjectionMode(random_mask(rng), carrier)


def amplitude_scale(state: TwoPhotonState, signal: ProjectionMode, idler: ProjectionMode) -> float:
    """sum_l |c_l A_s(l) A_i(-l)|: the size of the coincidence sum before cancellation."""
    spec = state.spectrum
    return float(np.sum(np.abs(spec.amplitudes * mode_coefficient(signal, spec.ls)
                               * mode_coefficient(idler, -spec.ls))))


def compare(state, signal, idler, n_grid: int = N_GRID) -> float:
    """Oracle disagreement relative to :func:`amplitude_scale`."""
    exact = coincidence_amplitude(state, signal, idler)
    oracle = brute_force_amplitude(state, signal, idler, n_grid)
    scale = amplitude_scale(state, signal, idler)
    if scale == 0:
        return abs(exact - oracle)
    return abs(exact - oracle) / scale


def run(n_cases: int = 200, seed: int = 0, n_grid: int = N_GRID) -> dict:
    rng = np.random.default_rng(seed)
    errors = []
    failures = []
    for k in range(n_cases):
        state = random_state(rng)
        signal, idler = random_mode(rng), random_mode(rng)
        err = compare(state, signal, idler, n_grid)
        errors.append(err)
        if not err <= REL_TOL:
            failures.append({"case": k, "rel_error": err})
    return {"n_cases": n_cases, "seed": seed, "n_grid": n_grid, "max_rel_error": max(errors),
            "tolerance": REL_TOL, "passed": not failures, "failures": failures}

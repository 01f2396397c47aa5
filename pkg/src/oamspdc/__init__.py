"""Two-photon OAM entanglement from SPDC: spiral spectra, angular correlations,
phase-matching fits, concurrence and étendue bookkeeping."""

__version__ = "0.1.0"

from .core import (AngularMask, CoincidenceCurve, EtendueBudget, OamSpectrum, PhaseMatchModel,
                   ProjectionMode, QubitDensityMatrix, RadialProfile, TwoPhotonState,
                   make_lorentzian_spectrum, make_single_mode_spectrum, make_uniform_spectrum)

__all__ = [
    "AngularMask", "CoincidenceCurve", "EtendueBudget", "OamSpectrum", "PhaseMatchModel",
    "ProjectionMode", "QubitDensityMatrix", "RadialProfile", "TwoPhotonState",
    "make_lorentzian_spectrum", "make_single_mode_spectrum", "make_uniform_spectrum",
]

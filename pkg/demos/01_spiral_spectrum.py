"""
Spiral spectra and how many modes they carry
============================================

A Lorentzian spiral spectrum P_l ~ 1/(l^2 + gamma^2) is what the angular
correlation data are fitted with. Here we build two of them, read back
their width, fit them, and count modes with the participation ratio.
"""

import numpy as np

from oamspdc import make_lorentzian_spectrum, make_uniform_spectrum
from oamspdc.analysis import effective_dimension, fit_lorentzian, spectrum_fwhm

for fwhm in (10, 20):
    spec = make_lorentzian_spectrum(fwhm, l_max=30)
    fit = fit_lorentzian(spec)
    print(f"FWHM {fwhm:>2}: measured {spectrum_fwhm(spec):6.3f}, "
          f"fitted {fit.fwhm_l:6.3f}, D_eff {effective_dimension(spec):6.2f}")

# the weights near the centre, for a feel of the shape
spec = make_lorentzian_spectrum(20, 30)
for l in range(0, 31, 5):
    print(f"  l = {l:>2}  P = {spec.weight(l):.4f}")

# a flat spectrum counts every mode
print("uniform, l_max = 20:", effective_dimension(make_uniform_spectrum(20)))

# a flat spectrum is a poor Lorentzian; the fit says so
fit = fit_lorentzian(make_uniform_spectrum(30))
print(f"Lorentzian fit to a flat spectrum: gamma at bound = {fit.at_bound}, "
      f"relative residual = {fit.relative_residual:.2f}")
print("total weight check:", np.isclose(spec.weights.sum(), 1.0))

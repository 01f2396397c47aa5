"""
Angle and OAM are Fourier partners
==================================

Rotating one four-slit mask against the other traces out the angular
correlation. A wider spiral spectrum gives a narrower central peak.
"""

import numpy as np

from oamspdc import AngularMask, make_lorentzian_spectrum
from oamspdc.analysis import central_peak_half_width
from oamspdc.projection import coincidence_vs_rotation, fourier_relation_vs_rotation
from oamspdc.synthetic import poissonize_curve

mask = AngularMask.n_slits(4, width_deg=7.0, spacing_deg=90.0)
grid = np.arange(-45.0, 45.05, 0.1)

for fwhm in (5, 10, 20, 30):
    spec = make_lorentzian_spectrum(fwhm, 30)
    fourier = fourier_relation_vs_rotation(spec, mask, grid)
    pure = coincidence_vs_rotation(spec, mask, 0, 0, grid)
    print(f"FWHM {fwhm:>2}: half-width {central_peak_half_width(fourier, 0.0):5.2f} deg "
          f"(pure-state projection {central_peak_half_width(pure, 0.0):5.2f} deg)")

# the four-fold repetition of the mask shows up as peaks every 90 deg
wide = np.arange(-180.0, 180.0, 1.0)
curve = fourier_relation_vs_rotation(make_lorentzian_spectrum(10, 30), mask, wide)
print("peaks near:", wide[curve.p > 0.99])

# what a detector would record at 1e4 counts on the peak
counts = poissonize_curve(curve, 10_000, seed=3)
print("counts around 0 deg:", counts.counts[175:186])

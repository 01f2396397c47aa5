"""
Far-field phase matching and its fit
====================================

The down-converted cone has intensity sinc^2(a r^2/f^2 + alpha). We turn
crystal parameters into (a, alpha), look at the opening angle, add shot
noise and fit the profile back.
"""

import numpy as np

from oamspdc import PhaseMatchModel
from oamspdc.phasematch import fit_phasematch, opening_angle, synthesize_profile
from oamspdc.synthetic import poissonize_profile

# 5 mm crystal, n = 1.66, degenerate 710 nm photons
L, n, lam, f = 5e-3, 1.66, 710e-9, 0.3
a = np.pi * L / (n * lam)
print(f"a = {a:.1f}")

for alpha in (0.0, -2.2):
    model = PhaseMatchModel(a, alpha, f)
    theta = opening_angle(model)
    print(f"alpha = {alpha:+.1f}: first minimum at {np.rad2deg(theta):.3f} deg")

ratio = opening_angle(PhaseMatchModel(a, -2.2, f)) / opening_angle(PhaseMatchModel(a, 0.0, f))
print(f"ratio {ratio:.6f}, expected {np.sqrt((np.pi + 2.2) / np.pi):.6f}")

# a noisy measurement of the alpha = -2.2 ring, then the fit
model = PhaseMatchModel(a, -2.2, f)
clean = synthesize_profile(model, 2.5 * opening_angle(model) * f, 200)
noisy = poissonize_profile(clean, peak_counts=100_000, seed=1)
report = fit_phasematch(noisy, f)
print(f"fit: a = {report.model.a:.1f}, alpha = {report.model.alpha:+.3f}, "
      f"converged = {report.converged} after {report.iterations} evaluations")

"""
Mode counting from the étendue
==============================

Area times solid angle, divided by lambda^2, estimates how many transverse
modes the source fills. The Klyshko picture says the detection side needs
at least that much étendue to see them all.
"""

import numpy as np

from oamspdc import EtendueBudget
from oamspdc.etendue import beam_area, etendue, klyshko_check, mode_count, solid_angle_from_half_angle

lam = 710e-9
area = beam_area(500e-6)
omega = solid_angle_from_half_angle(np.deg2rad(0.9))
source = EtendueBudget(area, omega, lam)
print(f"area {area:.3e} m^2, solid angle {omega:.3e} sr")
print(f"E = {etendue(source):.3e} m^2 sr, N = {mode_count(source):.0f} modes")

for half_angle in (0.45, 0.9, 1.8):
    det = EtendueBudget(area, solid_angle_from_half_angle(np.deg2rad(half_angle)), lam)
    check = klyshko_check(source, det)
    print(f"detector half-angle {half_angle:4.2f} deg: margin {check.margin:5.2f}, "
          f"{'ok' if check.passed else 'clips modes'}")

"""Guided-particle kinematics across the velocity range.

A particle bouncing at light speed between two walls w apart advances
along the guide at v = c sin(phi).  This sweep shows how the clock and
wave frequencies split symmetrically around the cutoff f0 = m0 c^2 / h
(their product stays f0^2 exactly), how the phase velocity diverges at
rest while v * v_phase = c^2 holds everywhere else, and how the guide
wavelength shrinks with speed.
"""

import numpy as np

from solitonlab import electron_constants, guide_width, kinematic_state

k = electron_constants()

print(f"electron cutoff frequency f0 = {k.cutoff_frequency:.6e} Hz")
print(f"guide width w = h/(2 m0 c)   = {guide_width(k.m0):.6e} m  (half the Compton wavelength)")
print()
header = f"{'v/c':>6} {'f_clock/f0':>11} {'f_wave/f0':>10} {'V_phase/c':>10} " \
         f"{'lambda/2w':>10} {'L_zigzag/w':>11} {'v*V_ph/c^2':>11}"
print(header)
print("-" * len(header))
for beta in (0.0, 0.1, 0.3, 0.6, 0.8, 0.95, 0.999):
    s = kinematic_state(beta * k.c)
    v_phase = "inf" if s.v_phase is None else f"{s.v_phase / k.c:10.4f}"
    identity = "-" if s.v_phase is None else f"{s.v * s.v_phase / k.c**2:11.9f}"
    print(f"{beta:6.3f} {s.f_clock / s.f0:11.6f} {s.f_wave / s.f0:10.6f} {v_phase:>10} "
          f"{s.lambda_guide / (2 * s.w):10.6f} {s.l_zigzag / s.w:11.6f} {identity:>11}")

print()
print("frequency product check over a fine sweep:")
worst = max(abs(kinematic_state(b * k.c).f_clock * kinematic_state(b * k.c).f_wave
                / kinematic_state(b * k.c).f0**2 - 1.0)
            for b in np.linspace(0.001, 0.999, 200))
print(f"  max |f_clock * f_wave / f0^2 - 1| = {worst:.2e}")

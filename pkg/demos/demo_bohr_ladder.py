"""Circular-orbit quantization from the phase-accordance law.

Balancing the Coulomb attraction against the centrifugal force and
imposing angular momentum N hbar gives the classical orbit ladder.  The
wave picture adds a consistency law: the particle's internal clock phase
and the guided wave's phase agree at every point of the path.  After a
full revolution the particle must run an extra arc (time tau) before the
joint phase recurs; counting clock cycles over that arc recovers the
integer N -- exactly, once the reciprocal Lorentz factor is kept, and up
to an O(alpha^2) gap if the orbit inputs stay nonrelativistic.
"""

from solitonlab import bohr_orbit, bohr_phase_accordance, electron_constants

k = electron_constants()

print(f"{'N':>3} {'radius (m)':>12} {'energy (eV)':>12} {'v/c':>10} "
      f"{'L_orbit/lambda':>14} {'tau/T':>12} {'gap':>10}")
for n in range(1, 11):
    orbit = bohr_orbit(n)
    accord = bohr_phase_accordance(n)
    print(f"{n:3d} {orbit.radius:12.5e} {orbit.energy / k.eV:12.6f} "
          f"{orbit.velocity / k.c:10.3e} "
          f"{orbit.orbit_length / orbit.de_broglie_wavelength:14.9f} "
          f"{accord.tau / orbit.period:12.5e} {accord.nonrelativistic_gap:10.2e}")

print()
accord = bohr_phase_accordance(1)
print("first orbit details:")
print(f"  extra-arc time tau = {accord.tau:.5e} s "
      f"(tau/T = alpha^2/(1 - alpha^2) = {accord.tau / bohr_orbit(1).period:.5e})")
print(f"  clock cycles over the arc = {accord.phase_quanta:.12f}")
print(f"  residual against N/gamma (exact relativistic form): "
      f"{accord.quantization_residual:.2e}")
print(f"  gap against the integer N (nonrelativistic orbit inputs): "
      f"{accord.nonrelativistic_gap:.2e}  -- reported, not hidden")
print(f"  wave/clock phase accordance along the path: max mismatch "
      f"{accord.max_phase_mismatch:.2e}")

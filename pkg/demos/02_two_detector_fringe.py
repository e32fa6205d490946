"""Two thermal sources, one right and one left circular, two linear analysers.

Neither detector's count rate nor its self-correlation depends on the
analyser angles, yet the cross-correlation C oscillates between 1 and 2 with
the geometric phase.  Moving a detector shifts the fringe through the
ordinary propagation phase instead.
"""

import numpy as np

from hbtphase import Geometry, canonical_setup, closed_form_coincidence, coincidence, mean_count, self_correlation

geometry = Geometry.symmetric(source_separation=0.1, detector_separation=0.0, distance=1e5, wavelength=5e-7)

print("analyser sweep at zero baseline")
for phi34 in np.linspace(0, np.pi / 2, 7):
    setup = canonical_setup(geometry, phi34, 0.0, n_b=0.1)
    print(f"  phi34 = {phi34:5.3f}  <N3> l^2 = {mean_count(setup, 0) * 1e10:.4f}"
          f"  g2(3,3) = {self_correlation(setup, 0):.4f}  C = {coincidence(setup):.6f}"
          f"  closed form = {closed_form_coincidence(geometry, phi34):.6f}")

period = geometry.wavelength * geometry.distance / geometry.source_separation
print(f"\nbaseline sweep at phi34 = 0 (fringe period lambda l / d_S = {period:.3f} m)")
for d_d in np.linspace(0, period, 5):
    g = Geometry.symmetric(0.1, d_d, 1e5, 5e-7)
    print(f"  d_D = {d_d:5.3f} m  C = {coincidence(canonical_setup(g, 0.0, 0.0, n_b=0.1)):.6f}")

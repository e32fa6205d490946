"""Three polarised slits seen by three unpolarised detectors.

Single-photon patterns obey two-slit separability (the Sorkin residue is
zero), but the three-photon correlation carries the Pancharatnam phase of the
triangle spanned by the slit analysers.  Inclusion-exclusion over blocked
slits isolates that term and the propagation phases are divided out.
"""

import numpy as np

from hbtphase.multislit import default_three_slit_geometry, geometric_isolation, triangle_solid_angle, triple_setup
from hbtphase.polarization import PoincarePoint, projector_from_poincare

geometry = default_three_slit_geometry()
a, b = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])

print(f"{'tilt/deg':>9} {'Omega/2':>10} {'recovered':>10}")
# at 90 deg C would sit opposite B and the geodesic B-C is undefined
for tilt in np.radians([10, 30, 50, 70, 85]):
    c = np.array([0.0, -np.sin(tilt), np.cos(tilt)])
    analysers = [projector_from_poincare(PoincarePoint(*v)) for v in (a, b, c)]
    setup = triple_setup(geometry, analysers, occupations=0.5)
    print(f"{np.degrees(tilt):9.1f} {triangle_solid_angle(setup) / 2:10.6f} {geometric_isolation(setup):10.6f}")

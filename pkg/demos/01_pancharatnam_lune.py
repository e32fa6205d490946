"""Pancharatnam phase of the R -> phi3 -> L -> phi4 analyser circuit.

The four projections trace a lune on the Poincaré sphere.  The trace of the
projector product has modulus 1/4 and argument equal to half the lune's
solid angle, i.e. twice the angle between the two linear analysers.
"""

import numpy as np

from hbtphase.polarization import (
    geodesic_polygon_solid_angle,
    lune_circuit,
    pancharatnam_trace,
    poincare_of_projector,
)

print(f"{'phi34/deg':>10} {'|Tr|':>8} {'arg Tr':>10} {'Omega/2':>10}")
for phi34 in np.radians([0, 15, 30, 45, 60, 89]):
    circuit = lune_circuit(phi34, 0.0)
    trace = pancharatnam_trace(circuit)
    omega = geodesic_polygon_solid_angle([poincare_of_projector(p) for p in circuit])
    print(f"{np.degrees(phi34):10.1f} {abs(trace):8.4f} {np.angle(trace):10.6f} {omega / 2:10.6f}")

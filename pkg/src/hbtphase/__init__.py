"""Pancharatnam phases in thermal-light intensity interferometry.

Submodules
----------
polarization
    Jones states, projectors, Poincaré-sphere geometry, Pancharatnam traces.
optics
    Source/detector geometry and propagation amplitudes.
correlator
    Normally ordered photon-count moments of thermal sources via permanents.
fock_oracle
    Brute-force truncated-Fock cross-check of the correlator.
entanglement
    Orbital entanglement controlled by a geometric phase.
multislit
    Three-slit, three-detector geometric phase.
cli
    ``hbtphase`` command-line front end.
"""

from .correlator import (
    ExperimentSetup,
    canonical_setup,
    coincidence,
    detector_coherence_matrix,
    mean_count,
    normally_ordered_moment,
    self_correlation,
    wick_expansion,
)
from .entanglement import (
    LONG,
    SHORT,
    OrbitalState,
    chsh_max,
    output_state,
    reduced_density,
    von_neumann_entropy,
)
from .errors import CapacityError, DegenerateError, FarFieldError, HBTPhaseError, InvalidState
from .fock_oracle import fock_oracle_moment
from .multislit import geometric_isolation, sorkin_parameter, triple_coincidence, triple_setup
from .optics import Geometry, closed_form_coincidence, propagation_matrix
from .permanent import permanent_ryser
from .polarization import (
    PoincarePoint,
    PolarizationState,
    Projector,
    circular_state,
    geodesic_polygon_solid_angle,
    linear_state,
    pancharatnam_phase,
    pancharatnam_trace,
    poincare_of,
    projector_of,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "DegenerateError", "ExperimentSetup", "FarFieldError", "Geometry",
    "HBTPhaseError", "InvalidState", "LONG", "OrbitalState", "PoincarePoint",
    "PolarizationState", "Projector", "SHORT", "canonical_setup", "chsh_max",
    "circular_state", "closed_form_coincidence", "coincidence", "detector_coherence_matrix",
    "fock_oracle_moment", "geodesic_polygon_solid_angle", "geometric_isolation",
    "linear_state", "mean_count", "normally_ordered_moment", "output_state",
    "pancharatnam_phase", "pancharatnam_trace", "permanent_ryser", "poincare_of",
    "projector_of", "propagation_matrix", "reduced_density", "self_correlation",
    "sorkin_parameter", "triple_coincidence", "triple_setup", "von_neumann_entropy",
    "wick_expansion",
]

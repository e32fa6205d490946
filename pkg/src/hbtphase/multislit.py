"""Three slits, three thermal beams, three unpolarised detectors.

Single-particle probabilities obey two-slit separability exactly.  The
three-photon correlation ``<:N_4 N_5 N_6:>`` does not: its 3-cycle Wick
terms carry the Pancharatnam phase of the triangle formed by the three slit
analysers on the Poincaré sphere.
"""

from __future__ import annotations

from itertools import combinations, permutations
from typing import Callable, Sequence

import numpy as np

from .correlator import ExperimentSetup, detector_coherence_matrix, normally_ordered_moment
from .errors import DegenerateError, InvalidState
from .optics import Geometry, linearized_propagation_matrix
from .polarization import (
    Projector,
    geodesic_polygon_solid_angle,
    pancharatnam_trace,
    poincare_of_projector,
)

DETECTOR_CYCLE = (1, 2, 0)  # detector b hands its annihilator to detector DETECTOR_CYCLE[b]


def sorkin_parameter(psi_a: complex, psi_b: complex, psi_c: complex) -> float:
    """Three-slit inclusion-exclusion residual ``P_ABC - P_AB - P_BC - P_CA + P_A + P_B + P_C``."""
    def prob(*amps: complex) -> float:
        return abs(sum(amps)) ** 2

    return (prob(psi_a, psi_b, psi_c)
            - prob(psi_a, psi_b) - prob(psi_b, psi_c) - prob(psi_c, psi_a)
            + prob(psi_a) + prob(psi_b) + prob(psi_c))


def default_three_slit_geometry(wavelength: float = 500e-9) -> Geometry:
    """Reference layout used by the CLI.

    Slits ~2 cm apart in an irregular triangle, detectors 10 km away and
    ~3 cm apart.  The layout is deliberately asymmetric so that the two
    orientations of the slit triangle pick up distinct propagation factors
    (needed by :func:`geometric_isolation`), propagation phases are of order
    one radian at 500 nm, and ``l / max(d) ~ 3e5`` keeps the linearised
    far-field phases accurate to ~1e-11 rad.
    """
    mm = 1e-3
    return Geometry(
        source_positions=[[0.0, 0.0, 0.0], [20 * mm, 4 * mm, 0.0], [6 * mm, 18 * mm, 0.0]],
        detector_positions=[[0.0, 0.0, 1e4], [26 * mm, 8 * mm, 1e4], [4 * mm, 34 * mm, 1e4]],
        wavelength=wavelength,
        distance=1e4,
    )


def triple_setup(
    geometry: Geometry,
    analysers: Sequence[Projector],
    occupations: float | Sequence[float] = 1.0,
    **kwargs,
) -> ExperimentSetup:
    """Three analysed slits seen by three unpolarised detectors."""
    setup = ExperimentSetup(
        geometry=geometry,
        source_analysers=tuple(analysers),
        detector_analysers=(Projector.identity(),) * 3,
        occupations=occupations,
        **kwargs,
    )
    check_triple_setup(setup)
    return setup


def check_triple_setup(setup: ExperimentSetup) -> None:
    if setup.geometry.n_sources != 3 or setup.geometry.n_detectors != 3:
        raise InvalidState("three-slit setups need 3 sources and 3 detectors")
    if not all(p.is_identity for p in setup.detector_analysers):
        raise InvalidState("three-slit detectors must be unpolarised")
    if any(p.is_identity for p in setup.source_analysers):
        raise InvalidState("slit analysers must be rank-one projectors")


def triple_coincidence(setup: ExperimentSetup) -> float:
    """``<:N_4 N_5 N_6:>`` from the permanent engine."""
    check_triple_setup(setup)
    return normally_ordered_moment(setup, (0, 1, 2))


def triple_moment_terms(setup: ExperimentSetup) -> dict[str, float]:
    """Split ``<:N_4 N_5 N_6:>`` by the cycle type of the Wick pairing.

    ``pedestal`` collects the identity pairing (product of mean counts),
    ``pairwise`` the three transpositions (two-detector fringes) and
    ``cyclic`` the two 3-cycles.  The parts add up to
    :func:`triple_coincidence`.
    """
    check_triple_setup(setup)
    g = detector_coherence_matrix(setup).entries
    parts = {"pedestal": 0j, "pairwise": 0j, "cyclic": 0j}
    for sigma in permutations(range(3)):
        fixed = sum(sigma[b] == b for b in range(3))
        key = {3: "pedestal", 1: "pairwise", 0: "cyclic"}[fixed]
        parts[key] += _pairing_sum(g, sigma)
    return {k: float(v.real) for k, v in parts.items()}


def _pairing_sum(g: np.ndarray, sigma: Sequence[int]) -> complex:
    # sum over polarisations of prod_b G[(b, alpha_b), (sigma b, alpha_{sigma b})]
    total = 0j
    for alphas in np.ndindex(2, 2, 2):
        term = 1 + 0j
        for b in range(3):
            term *= g[2 * b + alphas[b], 2 * sigma[b] + alphas[sigma[b]]]
        total += term
    return total


def cyclic_amplitude(setup: ExperimentSetup) -> complex:
    """Complex 3-cycle Wick term for the detector cycle 4 -> 5 -> 6 -> 4.

    The cyclic part of the triple moment is twice its real part.
    """
    check_triple_setup(setup)
    g = detector_coherence_matrix(setup).entries
    return _pairing_sum(g, DETECTOR_CYCLE)


def three_source_part(setup: ExperimentSetup, quantity: Callable[[ExperimentSetup], complex]) -> complex:
    """Inclusion-exclusion over which sources are lit.

    ``quantity`` is evaluated with every nonempty subset of sources active
    (the others blocked, ``n = 0``).  The alternating sum keeps exactly the
    contributions that need all three sources at once.
    """
    n = setup.geometry.n_sources
    occ = np.asarray(setup.occupations)
    total = 0j
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            mask = np.zeros(n)
            mask[list(subset)] = 1.0
            total += (-1) ** (n - size) * quantity(setup.with_occupations(occ * mask))
    return total


def _triangle_points(setup: ExperimentSetup) -> np.ndarray:
    return np.array([poincare_of_projector(p).as_array() for p in setup.source_analysers])


def triangle_is_degenerate(setup: ExperimentSetup, atol: float = 1e-12) -> bool:
    """True when the slit analysers occupy fewer than three distinct sphere points."""
    pts = _triangle_points(setup)
    return any(np.linalg.norm(pts[i] - pts[j]) <= atol for i, j in combinations(range(3), 2))


def triangle_solid_angle(setup: ExperimentSetup) -> float:
    pts = [poincare_of_projector(p) for p in setup.source_analysers]
    return geodesic_polygon_solid_angle(pts)


def _orientation_factors(setup: ExperimentSetup) -> tuple[complex, complex]:
    """Propagation weights of the two triangle orientations in the cyclic amplitude.

    Assigning slit ``pi[b]`` to detector ``b`` contributes
    ``prod_b n * conj(u[b, pi_b]) u[cycle(b), pi_b]`` times the overlap
    product around the slit cycle it induces.  Even assignments traverse the
    triangle A -> C -> B (conjugate trace), odd ones A -> B -> C.
    """
    u = linearized_propagation_matrix(setup.geometry)
    occ = np.prod(setup.occupations)
    even, odd = 0j, 0j
    for perm in permutations(range(3)):
        w = occ
        for b in range(3):
            w *= np.conj(u[b, perm[b]]) * u[DETECTOR_CYCLE[b], perm[b]]
        if _parity(perm):
            odd += w
        else:
            even += w
    return even, odd


def _parity(perm: Sequence[int]) -> int:
    inversions = sum(perm[i] > perm[j] for i in range(3) for j in range(i + 1, 3))
    return inversions % 2


def geometric_isolation(setup: ExperimentSetup, conditioning: float = 1e-6) -> float:
    """Geometric phase ``Omega_ABC / 2`` recovered from the three-photon correlator.

    The cyclic Wick amplitude is isolated by inclusion-exclusion over lit
    slits.  It equals ``a conj(T) + b T`` where ``T = Tr[P_A P_B P_C]`` and
    the weights ``a, b`` depend only on propagation (linearised far-field
    phases).  Solving the 2x2 real system for ``T`` and taking its argument
    removes the propagation phases.  Degenerate triangles return ``0.0``.

    Raises :class:`DegenerateError` when two analysers are orthogonal, or
    when the geometry gives both triangle orientations equal weight
    (``|a| == |b|``), in which case the sign of the phase is unobservable.
    """
    check_triple_setup(setup)
    if pancharatnam_trace(setup.source_analysers) == 0:
        raise DegenerateError("two slit analysers are orthogonal; the triangle phase is undefined")
    if triangle_is_degenerate(setup):
        return 0.0
    z = three_source_part(setup, cyclic_amplitude)
    a, b = _orientation_factors(setup)
    det = abs(b) ** 2 - abs(a) ** 2
    if abs(det) <= conditioning * (abs(a) ** 2 + abs(b) ** 2):
        raise DegenerateError("propagation factors do not distinguish the triangle orientations")
    # z = a conj(T) + b T  and  conj(z) = conj(a) T + conj(b) conj(T)
    trace = (np.conj(b) * z - a * np.conj(z)) / det
    return float(np.angle(trace))

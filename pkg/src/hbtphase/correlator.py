"""Thermal-light photon-count moments through Wick's theorem.

Each source ``s`` emits two independent thermal polarisation modes with
``<a_s^{+g} a_s^{g'}> = delta_{gg'} n_s``.  A detector mode is the linear
combination

    a_b^alpha = sum_s u_bs (P_b P_s)^{alpha gamma} a_s^gamma,

so first-order correlations between detector modes form the coherence
matrix ``G = conj(M) diag(n) M^T`` with ``M[(b, alpha), (s, gamma)] = u_bs
(P_b P_s)^{alpha gamma}``.  For a Gaussian state with no coherent amplitude,
a normally ordered moment of number operators is a sum of permanents of
submatrices of ``G``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Literal, Sequence

import numpy as np

from .errors import DegenerateError, InvalidState
from .optics import Geometry, propagation_matrix
from .permanent import DEFAULT_MAX_SIZE, permanent_ryser
from .polarization import Projector, circular_state, linear_state, projector_of


@dataclass(frozen=True, eq=False)
class ExperimentSetup:
    """Geometry, analysers and thermal occupations of one experiment.

    ``occupations[s]`` is the Bose occupation ``n_B`` of each polarisation
    mode of source ``s``.  ``time_phase`` is ``omega t`` in the propagation
    factors; every correlator here is independent of it.
    """

    geometry: Geometry
    source_analysers: tuple[Projector, ...]
    detector_analysers: tuple[Projector, ...]
    occupations: tuple[float, ...]
    propagation: Literal["far_field", "exact"] = "far_field"
    time_phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "source_analysers", tuple(self.source_analysers))
        object.__setattr__(self, "detector_analysers", tuple(self.detector_analysers))
        occ = tuple(float(n) for n in np.atleast_1d(self.occupations))
        if len(occ) == 1 and self.geometry.n_sources > 1:
            occ = occ * self.geometry.n_sources
        object.__setattr__(self, "occupations", occ)
        if len(self.source_analysers) != self.geometry.n_sources:
            raise InvalidState("one analyser per source is required")
        if len(self.detector_analysers) != self.geometry.n_detectors:
            raise InvalidState("one analyser per detector is required")
        if len(occ) != self.geometry.n_sources:
            raise InvalidState("one occupation per source is required")
        if any(not np.isfinite(n) or n < 0 for n in occ):
            raise InvalidState(f"occupations must be finite and >= 0, got {occ}")

    def replace(self, **changes) -> "ExperimentSetup":
        fields = dict(
            geometry=self.geometry,
            source_analysers=self.source_analysers,
            detector_analysers=self.detector_analysers,
            occupations=self.occupations,
            propagation=self.propagation,
            time_phase=self.time_phase,
        )
        fields.update(changes)
        return ExperimentSetup(**fields)

    def with_occupations(self, occupations: Sequence[float]) -> "ExperimentSetup":
        return self.replace(occupations=tuple(occupations))


def canonical_setup(
    geometry: Geometry,
    phi3: float = 0.0,
    phi4: float = 0.0,
    n_b: float = 1.0,
    **kwargs,
) -> ExperimentSetup:
    """Right/left circular sources seen through linear analysers at ``phi3``, ``phi4``."""
    return ExperimentSetup(
        geometry=geometry,
        source_analysers=(projector_of(circular_state("right")),
                          projector_of(circular_state("left"))),
        detector_analysers=(projector_of(linear_state(phi3)),
                            projector_of(linear_state(phi4))),
        occupations=(n_b, n_b),
        **kwargs,
    )


@dataclass(frozen=True, eq=False)
class CoherenceMatrix:
    """``<a_i^+ a_j>`` over composite modes ``i = 2 * detector + polarisation``."""

    entries: np.ndarray
    n_detectors: int = field(default=0)

    def block(self, b: int, b2: int | None = None) -> np.ndarray:
        b2 = b if b2 is None else b2
        return self.entries[2 * b:2 * b + 2, 2 * b2:2 * b2 + 2]

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        scale = max(1.0, np.abs(self.entries).max())
        return np.allclose(self.entries, self.entries.conj().T, rtol=0, atol=atol * scale)

    def is_psd(self, atol: float = 1e-10) -> bool:
        scale = max(np.abs(self.entries).max(), np.finfo(float).tiny)
        return bool(np.linalg.eigvalsh(self.entries).min() >= -atol * scale)


def source_to_detector_modes(setup: ExperimentSetup) -> np.ndarray:
    """``M[(b, alpha), (s, gamma)] = u_bs (P_b P_s)^{alpha gamma}``."""
    u = propagation_matrix(setup.geometry, setup.propagation, setup.time_phase)
    n_det, n_src = u.shape
    m = np.zeros((2 * n_det, 2 * n_src), dtype=complex)
    for b, p_b in enumerate(setup.detector_analysers):
        for s, p_s in enumerate(setup.source_analysers):
            m[2 * b:2 * b + 2, 2 * s:2 * s + 2] = u[b, s] * (p_b.matrix @ p_s.matrix)
    return m


def detector_coherence_matrix(setup: ExperimentSetup) -> CoherenceMatrix:
    m = source_to_detector_modes(setup)
    weights = np.repeat(setup.occupations, 2)
    g = (m.conj() * weights) @ m.T
    # exact Hermitian symmetrisation: G is Hermitian by construction
    g = 0.5 * (g + g.conj().T)
    return CoherenceMatrix(g, n_detectors=setup.geometry.n_detectors)


def mean_count(setup: ExperimentSetup, detector: int) -> float:
    """``<N_b>``: trace of detector ``b``'s polarisation block of ``G``."""
    _check_detector(setup, detector)
    g = detector_coherence_matrix(setup)
    return float(np.trace(g.block(detector)).real)


def _check_detector(setup: ExperimentSetup, detector: int) -> None:
    if not 0 <= detector < setup.geometry.n_detectors:
        raise InvalidState(f"detector index {detector} out of range")


def moment_from_coherence(
    g: np.ndarray, detectors: Sequence[int], max_order: int = DEFAULT_MAX_SIZE
) -> complex:
    """Sum over polarisation assignments of permanents of ``G`` submatrices.

    Repeated detectors repeat their composite rows and columns.  Returns the
    raw complex value; callers check the imaginary residue.
    """
    detectors = list(detectors)
    total = 0j
    for alphas in product((0, 1), repeat=len(detectors)):
        idx = [2 * b + a for b, a in zip(detectors, alphas)]
        total += permanent_ryser(g[np.ix_(idx, idx)], max_size=max_order)
    return total


def normally_ordered_moment(
    setup: ExperimentSetup,
    detectors: Sequence[int],
    max_order: int = DEFAULT_MAX_SIZE,
) -> float:
    """``<: N_b1 N_b2 ... N_bk :>`` for a multiset of detector indices."""
    detectors = list(detectors)
    if not detectors:
        raise InvalidState("detector multiset must be nonempty")
    for b in detectors:
        _check_detector(setup, b)
    g = detector_coherence_matrix(setup).entries
    value = moment_from_coherence(g, detectors, max_order)
    scale = abs(value.real) + float(np.trace(g).real) ** len(detectors)
    if abs(value.imag) > 1e-10 * scale:
        raise ArithmeticError(f"moment has imaginary residue {value.imag:.3e}")
    return float(value.real)


def _normalised(setup: ExperimentSetup, detectors: Sequence[int]) -> float:
    counts = [mean_count(setup, b) for b in detectors]
    scale = max(setup.occupations) / setup.geometry.distance**2
    if any(c <= 1e-14 * scale for c in counts):
        raise DegenerateError(f"zero mean count in detectors {list(detectors)}; normalisation undefined")
    return normally_ordered_moment(setup, detectors) / float(np.prod(counts))


def coincidence(setup: ExperimentSetup, detectors: tuple[int, int] = (0, 1)) -> float:
    """``<:N_3 N_4:> / (<N_3><N_4>)`` for a detector pair."""
    if len(detectors) != 2:
        raise InvalidState("coincidence needs exactly two detectors")
    return _normalised(setup, detectors)


def self_correlation(setup: ExperimentSetup, detector: int) -> float:
    """``<:N_b N_b:> / <N_b>^2``."""
    return _normalised(setup, (detector, detector))


@dataclass(frozen=True)
class WickTerm:
    """One of the 16 terms of ``<:N_b N_b':>`` after expanding the brackets.

    ``sources`` lists the source feeding, in order, the creation and
    annihilation factor of ``N_b`` and then of ``N_b'``.
    """

    sources: tuple[int, int, int, int]
    value: complex
    structurally_zero: bool


def wick_expansion(setup: ExperimentSetup, detectors: tuple[int, int] = (0, 1)) -> list[WickTerm]:
    """Expand ``<:N_b N_b':>`` bracket by bracket for a two-source setup.

    Writing ``N_b = (sum_s A_bs^+)(sum_s A_bs)`` with ``A_bs`` the part of
    the detector field coming from source ``s``, the product of the four
    brackets has ``2^4`` terms.  Each term's thermal expectation is its two
    Wick pairings; a pairing of a creator from source ``s`` with an
    annihilator from source ``s' != s`` vanishes identically because the
    sources are independent.  A term is structurally zero when both of its
    pairings contain such a cross-source contraction.
    """
    b1, b2 = detectors
    n_src = setup.geometry.n_sources
    m = source_to_detector_modes(setup)
    occ = setup.occupations

    def contraction(row_c: int, src_c: int, row_a: int, src_a: int) -> complex:
        # <A^+_{row_c, src_c} . A_{row_a, src_a}> summed over the source polarisation
        if src_c != src_a:
            return 0j
        blk_c = m[row_c, 2 * src_c:2 * src_c + 2]
        blk_a = m[row_a, 2 * src_a:2 * src_a + 2]
        return occ[src_c] * np.dot(blk_c.conj(), blk_a)

    terms = []
    for s in product(range(n_src), repeat=4):
        c1, a1, c2, a2 = s
        value = 0j
        for alpha, beta in product((0, 1), repeat=2):
            r1, r2 = 2 * b1 + alpha, 2 * b2 + beta
            # <: A+_{r1 c1} A_{r1 a1} A+_{r2 c2} A_{r2 a2} :>
            value += (contraction(r1, c1, r1, a1) * contraction(r2, c2, r2, a2)
                      + contraction(r1, c1, r2, a2) * contraction(r2, c2, r1, a1))
        zero = not ((c1 == a1 and c2 == a2) or (c1 == a2 and c2 == a1))
        terms.append(WickTerm(sources=s, value=complex(value), structurally_zero=zero))
    return terms

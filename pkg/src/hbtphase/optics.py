"""Source/detector layout, propagation amplitudes and the closed-form fringe.

Indices are zero-based throughout: detector 0 and 1 are the detectors the
two-photon experiment labels 3 and 4, source 0 and 1 are the right- and
left-circular thermal sources.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Literal

import numpy as np

from .errors import FarFieldError, InvalidState
from .polarization import lune_solid_angle

DEFAULT_FAR_FIELD_RATIO = 100.0


def _frozen_points(points) -> np.ndarray:
    arr = np.array(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise InvalidState(f"positions must have shape (n, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidState("positions must be finite")
    arr.setflags(write=False)
    return arr


def _max_separation(points: np.ndarray) -> float:
    if len(points) < 2:
        return 0.0
    return max(np.linalg.norm(a - b) for a, b in combinations(points, 2))


@dataclass(frozen=True, eq=False)
class Geometry:
    """Positions in metres; ``distance`` is the nominal source-detector distance ``l``.

    ``far_field_ratio`` sets the far-field validity criterion
    ``l >= far_field_ratio * max(d_S, d_D)``.
    """

    source_positions: np.ndarray
    detector_positions: np.ndarray
    wavelength: float
    distance: float
    far_field_ratio: float = DEFAULT_FAR_FIELD_RATIO

    def __post_init__(self):
        src = _frozen_points(self.source_positions)
        det = _frozen_points(self.detector_positions)
        object.__setattr__(self, "source_positions", src)
        object.__setattr__(self, "detector_positions", det)
        if not self.wavelength > 0:
            raise InvalidState("wavelength must be positive")
        if not self.distance > 0:
            raise InvalidState("nominal distance must be positive")
        for b, r_b in enumerate(det):
            for s, r_s in enumerate(src):
                if np.linalg.norm(r_b - r_s) == 0:
                    raise InvalidState(f"detector {b} coincides with source {s}")

    @classmethod
    def symmetric(
        cls,
        source_separation: float,
        detector_separation: float,
        distance: float,
        wavelength: float,
        **kwargs,
    ) -> "Geometry":
        """Two sources on the x axis at z = 0 facing two detectors at z = l.

        Detector 0 sits at ``+d_D/2`` and detector 1 at ``-d_D/2`` so the
        baseline vector ``r_0 - r_1`` points along +x; source 0 is at
        ``-d_S/2``.
        """
        half_s, half_d = source_separation / 2, detector_separation / 2
        return cls(
            source_positions=[[-half_s, 0.0, 0.0], [half_s, 0.0, 0.0]],
            detector_positions=[[half_d, 0.0, distance], [-half_d, 0.0, distance]],
            wavelength=wavelength,
            distance=distance,
            **kwargs,
        )

    @property
    def n_sources(self) -> int:
        return len(self.source_positions)

    @property
    def n_detectors(self) -> int:
        return len(self.detector_positions)

    @property
    def wavenumber(self) -> float:
        return 2.0 * np.pi / self.wavelength

    @property
    def source_separation(self) -> float:
        return _max_separation(self.source_positions)

    @property
    def detector_separation(self) -> float:
        return _max_separation(self.detector_positions)

    @property
    def is_far_field(self) -> bool:
        extent = max(self.source_separation, self.detector_separation)
        return self.distance >= self.far_field_ratio * extent

    def with_wavelength(self, wavelength: float) -> "Geometry":
        return Geometry(self.source_positions, self.detector_positions, wavelength,
                        self.distance, self.far_field_ratio)

    def path_excess(self) -> tuple[np.ndarray, float]:
        """Source-detector distances as ``(|r_b - r_s| - L0, L0)``.

        ``L0`` is the centroid-to-centroid distance.  The excess is computed
        from offsets about the centroids, so it stays accurate when ``l`` is
        many orders of magnitude larger than the apertures.
        """
        c_s = self.source_positions.mean(axis=0)
        c_d = self.detector_positions.mean(axis=0)
        axis = c_d - c_s
        ref = np.linalg.norm(axis)
        # delta[b, s] = (r_b - c_d) - (r_s - c_s)
        delta = (self.detector_positions - c_d)[:, None, :] - (self.source_positions - c_s)[None, :, :]
        rho = axis + delta
        dist = np.linalg.norm(rho, axis=-1)
        excess = (2.0 * delta @ axis + np.einsum("bsi,bsi->bs", delta, delta)) / (dist + ref)
        return excess, ref


def propagation_matrix(
    geometry: Geometry,
    mode: Literal["far_field", "exact"] = "far_field",
    time_phase: float = 0.0,
) -> np.ndarray:
    """All amplitudes ``u[b, s]`` (units 1/m) as a detector x source array.

    ``far_field`` uses ``1/l`` for the modulus, ``exact`` uses ``1/|r_b - r_s|``;
    both carry the phase ``k |r_b - r_s| - time_phase``.  ``time_phase`` stands
    for ``omega t`` and defaults to zero: it cancels in every equal-time
    correlator.
    """
    excess, ref = geometry.path_excess()
    k = geometry.wavenumber
    common = np.exp(1j * (np.fmod(k * ref, 2.0 * np.pi) - time_phase))
    phase = np.exp(1j * k * excess) * common
    if mode == "far_field":
        modulus = 1.0 / geometry.distance
    elif mode == "exact":
        modulus = 1.0 / (ref + excess)
    else:
        raise InvalidState(f"unknown propagation mode {mode!r}")
    return modulus * phase


def propagation_amplitude(
    geometry: Geometry,
    detector: int,
    source: int,
    mode: Literal["far_field", "exact"] = "far_field",
) -> complex:
    """``u_{bs}``: amplitude picked up from source ``source`` to detector ``detector``."""
    if not (0 <= detector < geometry.n_detectors and 0 <= source < geometry.n_sources):
        raise InvalidState(f"index out of range: detector={detector}, source={source}")
    return complex(propagation_matrix(geometry, mode)[detector, source])


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def linearized_propagation_phase(
    geometry: Geometry,
    form: Literal["detector", "source"] = "detector",
) -> float:
    """Leading-order far-field phase of the exchange term.

    ``detector`` form: ``d_D . (k_1 - k_0)`` with ``d_D = r_det0 - r_det1``
    and ``k_s`` the wavevector from source ``s`` toward the detector
    centroid.  ``source`` form: the same quantity with the roles of sources
    and detectors exchanged, ``(q_0 - q_1) . (r_src0 - r_src1)`` with ``q_b``
    the wavevector from the source centroid toward detector ``b``.
    """
    _require_pair(geometry)
    k = geometry.wavenumber
    src, det = geometry.source_positions, geometry.detector_positions
    if form == "detector":
        centroid = det.mean(axis=0)
        k_vec = [k * _unit(centroid - r_s) for r_s in src]
        return float(np.dot(det[0] - det[1], k_vec[1] - k_vec[0]))
    if form == "source":
        centroid = src.mean(axis=0)
        q_vec = [k * _unit(r_b - centroid) for r_b in det]
        return float(np.dot(q_vec[0] - q_vec[1], src[0] - src[1]))
    raise InvalidState(f"unknown form {form!r}")


def linearized_propagation_matrix(geometry: Geometry) -> np.ndarray:
    """Far-field amplitudes ``(1/l) exp(i k_s . (r_b - c_D))``.

    ``k_s`` points from source ``s`` to the detector centroid ``c_D``.
    Phases that depend on the source or the detector alone are dropped;
    they cancel in every closed cycle of source-detector pairs.
    """
    k = geometry.wavenumber
    det = geometry.detector_positions
    centroid = det.mean(axis=0)
    k_vec = np.array([k * _unit(centroid - r_s) for r_s in geometry.source_positions])
    phase = (det - centroid) @ k_vec.T
    return np.exp(1j * phase) / geometry.distance


def _require_pair(geometry: Geometry) -> None:
    if geometry.n_sources != 2 or geometry.n_detectors != 2:
        raise InvalidState("the two-photon fringe needs exactly two sources and two detectors")


def closed_form_coincidence(geometry: Geometry, phi34: float) -> float:
    """Far-field coincidence ``3/2 + 1/2 cos(propagation + Omega/2)``.

    ``phi34`` is the angle of detector 0's linear analyser relative to
    detector 1's; ``Omega`` is the signed solid angle of the lune traced by
    the analyser circuit.
    """
    _require_pair(geometry)
    if not geometry.is_far_field:
        raise FarFieldError(
            f"l = {geometry.distance:g} m is not >= {geometry.far_field_ratio:g} x "
            f"max(d_S, d_D) = {max(geometry.source_separation, geometry.detector_separation):g} m"
        )
    half_omega = 0.5 * lune_solid_angle(phi34, 0.0)
    return 1.5 + 0.5 * np.cos(linearized_propagation_phase(geometry) + half_omega)

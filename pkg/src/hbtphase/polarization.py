"""Jones vectors, analyser projectors and Poincaré-sphere geometry.

Conventions (fixed here and nowhere else):

* Jones vectors are written in the {horizontal, vertical} basis.
* Right circular light is ``(1, -1j) / sqrt(2)``; left is ``(1, +1j) / sqrt(2)``.
* The Stokes map uses the Pauli triple ``(Z, -X, -Y)``.  It sends right
  circular light to the north pole ``(0, 0, 1)``, horizontal light to
  ``(1, 0, 0)`` and ``linear_state(theta)`` to the equatorial point at
  azimuth ``-2 theta``.  The triple obeys the Pauli algebra, so the map is a
  proper rotation of the usual Bloch picture and the identity

      arg Tr[P_1 P_2 ... P_n] = (signed geodesic solid angle) / 2   (mod 2 pi)

  holds with right-hand-rule orientation of the vertex list.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DegenerateError, InvalidState

ATOL = 1e-12

_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
STOKES_BASIS = (_Z, -_X, -_Y)


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class PolarizationState:
    """Normalised Jones vector."""

    components: np.ndarray

    def __post_init__(self):
        vec = _frozen(self.components).reshape(-1)
        if vec.shape != (2,):
            raise InvalidState(f"Jones vector must have 2 components, got {vec.shape}")
        if not np.all(np.isfinite(vec)):
            raise InvalidState("Jones vector has non-finite components")
        if abs(np.linalg.norm(vec) - 1.0) > ATOL:
            raise InvalidState(f"Jones vector is not normalised: |v| = {np.linalg.norm(vec)!r}")
        object.__setattr__(self, "components", vec)

    @classmethod
    def from_unnormalised(cls, components) -> "PolarizationState":
        vec = np.asarray(components, dtype=complex)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise InvalidState("cannot normalise the zero vector")
        return cls(vec / norm)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.components, dtype=dtype)


@dataclass(frozen=True, eq=False)
class Projector:
    """Hermitian idempotent 2x2 analyser matrix.

    Every analyser in the package is rank one, except the unpolarised
    detector which is the identity and carries ``is_identity=True``.
    """

    matrix: np.ndarray
    is_identity: bool = False

    def __post_init__(self):
        mat = _frozen(self.matrix)
        if mat.shape != (2, 2):
            raise InvalidState(f"projector must be 2x2, got {mat.shape}")
        if not np.allclose(mat, mat.conj().T, rtol=0, atol=ATOL):
            raise InvalidState("projector is not Hermitian")
        if not np.allclose(mat @ mat, mat, rtol=0, atol=ATOL):
            raise InvalidState("projector is not idempotent")
        expected_trace = 2.0 if self.is_identity else 1.0
        if abs(np.trace(mat) - expected_trace) > ATOL:
            raise InvalidState(
                f"projector trace {np.trace(mat).real:.3g} != {expected_trace:g}"
            )
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def identity(cls) -> "Projector":
        """The unpolarised (pass-everything) analyser."""
        return cls(np.eye(2), is_identity=True)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True)
class PoincarePoint:
    s1: float
    s2: float
    s3: float

    def __post_init__(self):
        for name in ("s1", "s2", "s3"):
            object.__setattr__(self, name, float(getattr(self, name)))
        norm2 = self.s1**2 + self.s2**2 + self.s3**2
        if abs(norm2 - 1.0) > 1e-10:
            raise InvalidState(f"Stokes vector is not on the unit sphere: |s|^2 = {norm2!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.s1, self.s2, self.s3])


def linear_state(angle: float) -> PolarizationState:
    """Linear polarisation at ``angle`` radians from horizontal."""
    if not np.isfinite(angle):
        raise InvalidState("angle must be finite")
    return PolarizationState([np.cos(angle), np.sin(angle)])


def circular_state(handedness: Literal["right", "left"]) -> PolarizationState:
    if handedness == "right":
        return PolarizationState(np.array([1, -1j]) / np.sqrt(2))
    if handedness == "left":
        return PolarizationState(np.array([1, 1j]) / np.sqrt(2))
    raise InvalidState(f"handedness must be 'right' or 'left', not {handedness!r}")


def inner_product(a: PolarizationState, b: PolarizationState) -> complex:
    """``<a|b>``, antilinear in the first argument."""
    return complex(np.vdot(a.components, b.components))


def projector_of(state: PolarizationState) -> Projector:
    vec = state.components
    return Projector(np.outer(vec, vec.conj()))


def _stokes(matrix_or_vector: np.ndarray, rank_one_projector: bool) -> np.ndarray:
    if rank_one_projector:
        return np.array([np.trace(matrix_or_vector @ t).real for t in STOKES_BASIS])
    vec = matrix_or_vector
    return np.array([np.vdot(vec, t @ vec).real for t in STOKES_BASIS])


def poincare_of(state: PolarizationState) -> PoincarePoint:
    s = _stokes(state.components, rank_one_projector=False)
    return PoincarePoint(*(s / np.linalg.norm(s)))


def poincare_of_projector(projector: Projector) -> PoincarePoint:
    """Stokes point of a rank-one analyser."""
    if projector.is_identity:
        raise InvalidState("the unpolarised analyser has no point on the sphere")
    s = _stokes(projector.matrix, rank_one_projector=True)
    return PoincarePoint(*(s / np.linalg.norm(s)))


def projector_from_poincare(point: PoincarePoint) -> Projector:
    """Inverse of :func:`poincare_of_projector`: ``(1 + s . tau) / 2``."""
    s = point.as_array()
    mat = 0.5 * (np.eye(2) + sum(si * t for si, t in zip(s, STOKES_BASIS)))
    return Projector(mat)


def _as_matrices(projectors: Sequence[Projector]) -> list[np.ndarray]:
    return [p.matrix if isinstance(p, Projector) else np.asarray(p, dtype=complex)
            for p in projectors]


def is_degenerate_circuit(projectors: Sequence[Projector], atol: float = ATOL) -> bool:
    """True when two cyclically consecutive analysers are orthogonal."""
    mats = _as_matrices(projectors)
    n = len(mats)
    return any(abs(np.trace(mats[k] @ mats[(k + 1) % n])) <= atol for k in range(n))


def pancharatnam_trace(projectors: Sequence[Projector], *, strict: bool = False) -> complex:
    """Trace of the closed projection sequence ``P_1 P_2 ... P_n P_1``.

    The modulus is the product of overlap moduli ``|<psi_k|psi_k+1>|`` and
    the argument is the Pancharatnam phase of the circuit.  When two
    consecutive states are orthogonal the phase is undefined: the function
    returns exactly ``0j`` or, with ``strict=True``, raises
    :class:`DegenerateError`.
    """
    if len(projectors) < 2:
        raise InvalidState("a circuit needs at least two projectors")
    mats = _as_matrices(projectors)
    if is_degenerate_circuit(projectors):
        if strict:
            raise DegenerateError("consecutive analysers are orthogonal; phase undefined")
        return 0j
    product = np.eye(2, dtype=complex)
    for m in mats + mats[:1]:
        product = product @ m
    return complex(np.trace(product))


def pancharatnam_phase(projectors: Sequence[Projector]) -> float:
    """Argument of :func:`pancharatnam_trace`; raises on degenerate circuits."""
    return float(np.angle(pancharatnam_trace(projectors, strict=True)))


def _triangle_solid_angle(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    # Van Oosterom & Strackee; exact half-angle form, valid unless a pair is antipodal
    num = np.dot(a, np.cross(b, c))
    den = 1.0 + np.dot(a, b) + np.dot(b, c) + np.dot(c, a)
    return 2.0 * np.arctan2(num, den)


_REFERENCE_CANDIDATES = np.array(
    [
        [1.0, 0.0, 0.0], [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0], [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0], [0.0, 0.0, -1.0],
        [0.48, 0.6, 0.64], [-0.6, 0.64, -0.48],
    ]
)


def _fan_reference(vertices: np.ndarray) -> np.ndarray:
    # Any apex works mod 4 pi as long as it is not antipodal to a vertex;
    # pick the one farthest from every antipode.
    candidates = list(_REFERENCE_CANDIDATES)
    centroid = vertices.sum(axis=0)
    if np.linalg.norm(centroid) > 1e-6:
        candidates.insert(0, centroid / np.linalg.norm(centroid))
    margins = [np.min(1.0 + vertices @ r) for r in candidates]
    return candidates[int(np.argmax(margins))]


def geodesic_polygon_solid_angle(vertices: Sequence[PoincarePoint]) -> float:
    """Signed solid angle (steradians) of a closed geodesic polygon.

    Positive for counter-clockwise circuits seen from outside the sphere.
    The value is fixed only modulo 4 pi; it is returned reduced into
    ``(-4 pi, 4 pi)`` by an odd reduction so that reversing the vertex order
    negates it.
    """
    if len(vertices) < 2:
        raise InvalidState("a polygon needs at least two vertices")
    pts = np.array([v.as_array() if isinstance(v, PoincarePoint) else np.asarray(v, float)
                    for v in vertices], dtype=float)
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    n = len(pts)
    for k in range(n):
        if np.dot(pts[k], pts[(k + 1) % n]) <= -1.0 + 1e-12:
            raise DegenerateError(f"vertices {k} and {(k + 1) % n} are antipodal; geodesic undefined")
    ref = _fan_reference(pts)
    total = sum(_triangle_solid_angle(ref, pts[k], pts[(k + 1) % n]) for k in range(n))
    return float(np.fmod(total, 4.0 * np.pi))


def lune_circuit(phi3: float, phi4: float) -> list[Projector]:
    """Analyser sequence ``R -> 3 -> L -> 4`` traced by an HBT photon pair."""
    return [
        projector_of(circular_state("right")),
        projector_of(linear_state(phi3)),
        projector_of(circular_state("left")),
        projector_of(linear_state(phi4)),
    ]


def lune_solid_angle(phi3: float, phi4: float) -> float:
    verts = [poincare_of_projector(p) for p in lune_circuit(phi3, phi4)]
    return geodesic_polygon_solid_angle(verts)

"""Parameter sweeps and their CSV representation."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .correlator import canonical_setup, coincidence, mean_count
from .entanglement import OrbitalState, output_state, reduced_density, von_neumann_entropy
from .errors import DegenerateError
from .fock_oracle import fock_oracle_moment
from .multislit import default_three_slit_geometry, triple_coincidence, triple_setup
from .optics import Geometry, closed_form_coincidence
from .polarization import PoincarePoint, projector_from_poincare

CSV_HEADER = ("sweep_var", "value", "engine", "closed_form", "oracle", "abs_dev")
CLOSED_FORM_TOL = 1e-9
ORACLE_RTOL = 1e-3


@dataclass(frozen=True)
class SweepRow:
    sweep_var: str
    value: float
    engine: float
    closed_form: float | None = None
    oracle: float | None = None
    oracle_error: float | None = None

    @property
    def abs_dev(self) -> float | None:
        if self.closed_form is not None:
            return abs(self.engine - self.closed_form)
        if self.oracle is not None:
            return abs(self.engine - self.oracle)
        return None

    def failure(self) -> str | None:
        """Reason this row fails its numerical check, if any."""
        if self.closed_form is not None and abs(self.engine - self.closed_form) > CLOSED_FORM_TOL:
            return (f"{self.sweep_var}={self.value!r}: engine {self.engine!r} differs from "
                    f"closed form {self.closed_form!r} by more than {CLOSED_FORM_TOL:g}")
        if self.oracle is not None:
            allowed = max(ORACLE_RTOL * abs(self.engine), self.oracle_error or 0.0)
            if abs(self.engine - self.oracle) > allowed:
                return (f"{self.sweep_var}={self.value!r}: oracle {self.oracle!r} differs from "
                        f"engine {self.engine!r} by more than {allowed:.3g}")
        return None


@dataclass
class SweepResult:
    config: RunConfig
    rows: list[SweepRow] = field(default_factory=list)

    @property
    def failures(self) -> list[str]:
        return [msg for msg in (row.failure() for row in self.rows) if msg]


class SweepRowError(DegenerateError):
    """A degenerate configuration was hit at a particular sweep value."""


def _geometry(config: RunConfig, detector_separation: float | None = None) -> Geometry:
    d_d = config.detector_separation if detector_separation is None else detector_separation
    return Geometry.symmetric(config.source_separation, d_d, config.distance,
                              config.wavelength, far_field_ratio=config.far_field_ratio)


def _oracle_coincidence(setup, n_max: int) -> tuple[float, float]:
    pair = fock_oracle_moment(setup, (0, 1), n_max)
    m3 = fock_oracle_moment(setup, (0,), n_max)
    m4 = fock_oracle_moment(setup, (1,), n_max)
    value = pair.value / (m3.value * m4.value)
    coarse = pair.coarse_value / (m3.coarse_value * m4.coarse_value)
    return value, abs(value - coarse)


def _two_detector_row(config: RunConfig, value: float) -> SweepRow:
    phi4 = config.angle(config.phi4)
    if config.sweep == "phi34":
        phi34 = config.angle(value)
        geometry = _geometry(config)
    else:
        phi34 = config.angle(config.phi3) - phi4
        geometry = _geometry(config, detector_separation=value)
    setup = canonical_setup(geometry, phi4 + phi34, phi4, n_b=config.n_b[0],
                            propagation=config.propagation)
    if len(config.n_b) > 1:
        setup = setup.with_occupations(config.n_b)
    engine = coincidence(setup)
    closed = None
    if geometry.is_far_field and len(set(setup.occupations)) == 1:
        closed = float(closed_form_coincidence(geometry, phi34))
    oracle = oracle_err = None
    if config.oracle:
        oracle, oracle_err = _oracle_coincidence(setup, config.nmax)
    return SweepRow(config.sweep, value, engine, closed, oracle, oracle_err)


def _entanglement_row(config: RunConfig, value: float) -> SweepRow:
    phi = OrbitalState.from_unnormalised(*config.orbital_phi)
    psi = OrbitalState.from_unnormalised(*config.orbital_psi)
    state = output_state(phi, psi, config.angle(value))
    return SweepRow("omega", value, von_neumann_entropy(reduced_density(state, "three")))


def _unit(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=float)
    return v / np.linalg.norm(v)


def _rotated(vec, axis, angle: float) -> PoincarePoint:
    """Rodrigues rotation of ``vec`` by ``angle`` about ``axis``."""
    v, k = _unit(vec), _unit(axis)
    out = (v * math.cos(angle) + np.cross(k, v) * math.sin(angle)
           + k * np.dot(k, v) * (1 - math.cos(angle)))
    return PoincarePoint(*_unit(out))


def three_slit_setup(config: RunConfig, rotation: float = 0.0):
    """Default slit layout with analyser C turned by ``rotation`` about analyser A's Stokes axis.

    The rotation keeps the A-C side of the triangle fixed in length while the
    enclosed solid angle changes.
    """
    geometry = default_three_slit_geometry(config.wavelength)
    a = config.analyser_a
    points = [PoincarePoint(*_unit(a)), PoincarePoint(*_unit(config.analyser_b)),
              _rotated(config.analyser_c, a, rotation)]
    analysers = [projector_from_poincare(p) for p in points]
    occupations = config.n_b if len(config.n_b) == 3 else config.n_b[0]
    return triple_setup(geometry, analysers, occupations, propagation=config.propagation)


def _three_slit_row(config: RunConfig, value: float) -> SweepRow:
    setup = three_slit_setup(config, config.angle(value))
    counts = [mean_count(setup, b) for b in range(3)]
    norm = float(np.prod(counts))
    if norm <= 0:
        raise DegenerateError("a detector receives no light")
    engine = triple_coincidence(setup) / norm
    oracle = oracle_err = None
    if config.oracle:
        res = fock_oracle_moment(setup, (0, 1, 2), config.nmax)
        oracle, oracle_err = res.value / norm, res.truncation_error / norm
    return SweepRow("rotation", value, engine, None, oracle, oracle_err)


_ROW_BUILDERS = {
    "two-detector": _two_detector_row,
    "entanglement": _entanglement_row,
    "three-slit": _three_slit_row,
}


def run_sweep(config: RunConfig) -> SweepResult:
    """Evaluate every grid point of the configured sweep, in order."""
    build = _ROW_BUILDERS[config.experiment]
    result = SweepResult(config)
    for value in config.sweep_values():
        try:
            result.rows.append(build(config, value))
        except DegenerateError as exc:
            raise SweepRowError(f"{config.sweep}={value!r}: {exc}") from exc
    return result


def _fmt(x: float | None) -> str:
    return "" if x is None else format(x, ".12g")


def to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in result.rows:
        writer.writerow([row.sweep_var, _fmt(row.value), _fmt(row.engine),
                         _fmt(row.closed_form), _fmt(row.oracle), _fmt(row.abs_dev)])
    return buf.getvalue()

"""End-to-end invariant suite used by ``hbtphase selfcheck``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .correlator import (
    canonical_setup,
    coincidence,
    mean_count,
    normally_ordered_moment,
    self_correlation,
)
from .entanglement import LONG, SHORT, output_state, reduced_density, von_neumann_entropy
from .fock_oracle import fock_oracle_moment
from .multislit import default_three_slit_geometry, geometric_isolation, sorkin_parameter, triple_setup
from .optics import Geometry, closed_form_coincidence
from .polarization import (
    PoincarePoint,
    circular_state,
    geodesic_polygon_solid_angle,
    linear_state,
    pancharatnam_trace,
    poincare_of_projector,
    projector_from_poincare,
    projector_of,
)

FAULTS = ("handedness",)


@dataclass
class CheckOutcome:
    name: str
    status: str  # "pass", "fail" or "skip"
    detail: str = ""

    def line(self) -> str:
        return f"{self.status.upper():4s}  {self.name}: {self.detail}"


@dataclass
class SelfCheckReport:
    outcomes: list[CheckOutcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(o.status != "fail" for o in self.outcomes)

    def summary(self) -> str:
        counts = {s: sum(o.status == s for o in self.outcomes) for s in ("pass", "fail", "skip")}
        lines = [o.line() for o in self.outcomes]
        lines.append(f"{counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped")
        return "\n".join(lines)


def _wrap(x: float, period: float) -> float:
    return (x + period / 2) % period - period / 2


def _fringe_geometry(d_d: float) -> Geometry:
    # l / max(d) >= 1e5 keeps the leading-order fringe formula accurate to < 1e-10
    return Geometry.symmetric(0.1, d_d, 1e5, 5e-7)


def check_trace_identity(inject_fault: str | None = None) -> CheckOutcome:
    worst_mod = worst_phase = 0.0
    right = circular_state("left" if inject_fault == "handedness" else "right")
    for phi3 in np.linspace(0, math.pi, 20, endpoint=False):
        for phi4 in np.linspace(0, math.pi, 10, endpoint=False):
            circuit = [projector_of(right), projector_of(linear_state(phi3)),
                       projector_of(circular_state("left")), projector_of(linear_state(phi4))]
            # Poincare images always use the documented convention
            sphere = [projector_of(circular_state("right")), circuit[1],
                      projector_of(circular_state("left")), circuit[3]]
            trace = pancharatnam_trace(circuit)
            omega = geodesic_polygon_solid_angle([poincare_of_projector(p) for p in sphere])
            worst_mod = max(worst_mod, abs(abs(trace) - 0.25))
            worst_phase = max(worst_phase, abs(_wrap(2 * np.angle(trace) - omega, 4 * math.pi)))
    ok = worst_mod <= 1e-12 and worst_phase <= 1e-9
    return CheckOutcome("trace/solid-angle identity", "pass" if ok else "fail",
                        f"max ||Tr|-1/4| = {worst_mod:.2e}, max phase mismatch = {worst_phase:.2e}")


def check_closed_form() -> CheckOutcome:
    worst = 0.0
    for d_d in np.linspace(0.0, 1.0, 10):
        geometry = _fringe_geometry(d_d)
        for phi34 in np.linspace(0, math.pi, 10, endpoint=False):
            engine = coincidence(canonical_setup(geometry, phi34, 0.0, n_b=0.1))
            worst = max(worst, abs(engine - closed_form_coincidence(geometry, phi34)))
    return CheckOutcome("engine vs closed-form fringe", "pass" if worst <= 1e-9 else "fail",
                        f"max |C - C_closed| = {worst:.2e} over 100 configurations")


def check_mean_counts() -> CheckOutcome:
    geometry = _fringe_geometry(0.3)
    worst = max(abs(mean_count(canonical_setup(geometry, p, 0.2, n_b=0.1), b) / (0.1 / 1e10) - 1)
                for p in np.linspace(0, math.pi, 8) for b in (0, 1))
    return CheckOutcome("mean counts n_B / l^2", "pass" if worst <= 1e-12 else "fail",
                        f"max relative deviation {worst:.2e}")


def check_self_correlation_flat() -> CheckOutcome:
    geometry = _fringe_geometry(0.3)
    phis = np.linspace(0, math.pi, 64, endpoint=False)
    selfs = [self_correlation(canonical_setup(geometry, 0.0, -p, n_b=0.1), 0) for p in phis]
    counts = [mean_count(canonical_setup(geometry, 0.0, -p, n_b=0.1), 0) * 1e10 / 0.1 for p in phis]
    spread = max(np.ptp(selfs), np.ptp(counts))
    return CheckOutcome("self-correlation and counts flat in phi34", "pass" if spread <= 1e-12 else "fail",
                        f"peak-to-peak {spread:.2e}")


def check_oracle(enabled: bool) -> CheckOutcome:
    if not enabled:
        return CheckOutcome("Fock oracle agreement", "skip", "oracle disabled")
    rng = np.random.default_rng(20240607)
    worst = 0.0
    for _ in range(3):
        geometry = _fringe_geometry(rng.uniform(0, 1.0))
        setup = canonical_setup(geometry, rng.uniform(0, math.pi), rng.uniform(0, math.pi), n_b=0.1)
        engine = normally_ordered_moment(setup, (0, 1))
        oracle = fock_oracle_moment(setup, (0, 1), 6)
        worst = max(worst, abs(oracle.value / engine - 1))
    return CheckOutcome("Fock oracle agreement", "pass" if worst <= 1e-3 else "fail",
                        f"max relative deviation of <:N3 N4:> {worst:.2e} (n_max = 6)")


def check_sorkin() -> CheckOutcome:
    rng = np.random.default_rng(7)
    amps = rng.normal(size=(1000, 3)) + 1j * rng.normal(size=(1000, 3))
    worst = max(abs(sorkin_parameter(*row)) for row in amps)
    return CheckOutcome("single-particle two-slit separability", "pass" if worst <= 1e-12 else "fail",
                        f"max |epsilon| = {worst:.2e}")


def check_triangle_phase() -> CheckOutcome:
    analysers = [projector_from_poincare(PoincarePoint(*v)) for v in np.eye(3)]
    phase = geometric_isolation(triple_setup(default_three_slit_geometry(), analysers, 0.5))
    err = abs(phase - math.pi / 4)
    return CheckOutcome("three-slit octant phase", "pass" if err <= 1e-9 else "fail",
                        f"Omega/2 = {phase:.12f} (expected pi/4, error {err:.2e})")


def check_entanglement() -> CheckOutcome:
    omegas = np.linspace(0, 4 * math.pi, 33)
    worst = max(abs(von_neumann_entropy(reduced_density(output_state(SHORT, LONG, om), "three")) - 1)
                for om in omegas)
    return CheckOutcome("orthogonal-input entropy = 1 bit", "pass" if worst <= 1e-10 else "fail",
                        f"max deviation {worst:.2e}")


def run_selfcheck(oracle: bool = True, inject_fault: str | None = None,
                  echo: Callable[[str], None] | None = None) -> SelfCheckReport:
    """Run every check; failures are reported, never raised.

    ``inject_fault="handedness"`` swaps the right-circular analyser for a
    left-circular one in the trace computation only, which must make the
    trace/solid-angle check fail.
    """
    if inject_fault is not None and inject_fault not in FAULTS:
        raise ValueError(f"unknown fault {inject_fault!r}")
    checks = [
        lambda: check_trace_identity(inject_fault),
        check_closed_form,
        check_mean_counts,
        check_self_correlation_flat,
        lambda: check_oracle(oracle),
        check_sorkin,
        check_triangle_phase,
        check_entanglement,
    ]
    report = SelfCheckReport()
    for check in checks:
        try:
            outcome = check()
        except Exception as exc:  # a crashing check is a failed check
            outcome = CheckOutcome(getattr(check, "__name__", "check"), "fail", f"raised {exc!r}")
        report.outcomes.append(outcome)
        if echo is not None:
            echo(outcome.line())
    return report

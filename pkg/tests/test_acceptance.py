"""Acceptance criteria 1-10, each at its stated tolerance.

Run ``pytest tests/test_acceptance.py -v``; a PASS/FAIL line per criterion
is printed in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from hbtphase.cli import main
from hbtphase.correlator import (
    ExperimentSetup,
    canonical_setup,
    coincidence,
    mean_count,
    self_correlation,
    wick_expansion,
)
from hbtphase.entanglement import (
    LONG,
    SHORT,
    OrbitalState,
    TwoPhotonOrbitalState,
    chsh_max,
    entropy_sweep,
    output_state,
    reduced_density,
    von_neumann_entropy,
)
from hbtphase.fock_oracle import fock_oracle_moment
from hbtphase.multislit import default_three_slit_geometry, geometric_isolation, sorkin_parameter, triple_setup
from hbtphase.optics import Geometry, closed_form_coincidence, linearized_propagation_phase, propagation_matrix
from hbtphase.polarization import (
    PoincarePoint,
    PolarizationState,
    geodesic_polygon_solid_angle,
    lune_circuit,
    pancharatnam_trace,
    poincare_of_projector,
    projector_from_poincare,
    projector_of,
)

N_B = 0.1
DEEP = dict(distance=1e5, wavelength=5e-7)


def wrapped(x, period):
    r = x % period
    return min(r, period - r)


@pytest.mark.criterion(1)
def test_trace_identity(criterion):
    start = time.perf_counter()
    worst_mod = worst_phase = 0.0
    for phi3 in np.linspace(0, math.pi, 20, endpoint=False):
        for phi4 in np.linspace(0, math.pi, 10, endpoint=False):
            circuit = lune_circuit(phi3, phi4)
            trace = pancharatnam_trace(circuit)
            omega = geodesic_polygon_solid_angle([poincare_of_projector(p) for p in circuit])
            worst_mod = max(worst_mod, abs(abs(trace) - 0.25))
            worst_phase = max(worst_phase, wrapped(2 * np.angle(trace) - omega, 4 * math.pi))
    elapsed = time.perf_counter() - start
    criterion.append(f"max mod err {worst_mod:.1e}, max phase err {worst_phase:.1e}, {elapsed:.2f} s")
    assert worst_mod <= 1e-12
    assert worst_phase <= 1e-9
    assert elapsed < 1.0


@pytest.mark.criterion(2)
def test_closed_form_fringe(criterion):
    start = time.perf_counter()
    worst, count = 0.0, 0
    for d_d in np.linspace(0.0, 1.0, 11):
        geometry = Geometry.symmetric(0.1, d_d, **DEEP)
        for phi3, phi4 in zip(np.linspace(0, math.pi, 10), np.linspace(0.4, -1.0, 10)):
            engine = coincidence(canonical_setup(geometry, phi3, phi4, n_b=N_B))
            worst = max(worst, abs(engine - closed_form_coincidence(geometry, phi3 - phi4)))
            count += 1
    # zero total phase: the analyser term cancels the propagation term
    peak = 0.0
    for d_d in np.linspace(0.0, 1.0, 11):
        geometry = Geometry.symmetric(0.1, d_d, **DEEP)
        phi34 = -linearized_propagation_phase(geometry) / 2
        peak = max(peak, abs(coincidence(canonical_setup(geometry, phi34, 0.0, n_b=N_B)) - 2.0))
    elapsed = time.perf_counter() - start
    criterion.append(f"{count} configs, max dev {worst:.1e}, |C-2| at zero phase {peak:.1e}, {elapsed:.2f} s")
    assert count >= 100
    assert worst <= 1e-9
    assert peak <= 1e-9
    assert elapsed < 5.0


@pytest.mark.criterion(3)
def test_mean_counts(criterion):
    worst = 0.0
    for d_d in (0.0, 0.3, 1.0):
        geometry = Geometry.symmetric(0.1, d_d, **DEEP)
        for phi3, phi4 in [(0, 0), (0.3, 1.1), (2.0, -0.5)]:
            setup = canonical_setup(geometry, phi3, phi4, n_b=N_B)
            for b in (0, 1):
                worst = max(worst, abs(mean_count(setup, b) / (N_B / DEEP["distance"] ** 2) - 1))
    criterion.append(f"max relative dev {worst:.1e}")
    assert worst <= 1e-12


@pytest.mark.criterion(4)
def test_wick_structure(criterion):
    setup = canonical_setup(Geometry.symmetric(0.1, 0.3, **DEEP), 0.7, 0.2, n_b=N_B)
    terms = wick_expansion(setup)
    zeros = sum(t.structurally_zero for t in terms)
    criterion.append(f"{len(terms)} terms, {zeros} vanish")
    assert len(terms) == 16
    assert zeros == 10
    assert all(t.value == 0 for t in terms if t.structurally_zero)


@pytest.mark.criterion(5)
def test_nonlocality(criterion):
    # zero baseline phase so the grid lands on both fringe extremes
    geometry = Geometry.symmetric(0.1, 0.0, **DEEP)
    phis = np.linspace(0, math.pi, 64, endpoint=False)
    setups = [canonical_setup(geometry, p, 0.0, n_b=N_B) for p in phis]
    counts = np.array([[mean_count(s, b) for b in (0, 1)] for s in setups]) / (N_B / DEEP["distance"] ** 2)
    selfs = np.array([[self_correlation(s, b) for b in (0, 1)] for s in setups])
    cross = np.array([coincidence(s) for s in setups])
    flat = max(np.ptp(counts, axis=0).max(), np.ptp(selfs, axis=0).max())
    criterion.append(f"flatness {flat:.1e}, fringe amplitude {np.ptp(cross):.12f}")
    assert flat <= 1e-12
    assert abs(np.ptp(cross) - 1.0) <= 1e-9


@pytest.mark.criterion(6)
def test_oracle_equivalence(criterion):
    rng = np.random.default_rng(6)
    start = time.perf_counter()
    worst_mean = worst_coinc = 0.0
    for _ in range(10):
        geometry = Geometry(rng.normal(scale=0.05, size=(2, 3)),
                            rng.normal(scale=0.05, size=(2, 3)) + [0, 0, 1.0], 1e-2, 1.0)
        analysers = [projector_of(PolarizationState.from_unnormalised(rng.normal(size=2) + 1j * rng.normal(size=2)))
                     for _ in range(4)]
        setup = ExperimentSetup(geometry, analysers[:2], analysers[2:], N_B, propagation="exact")
        means = []
        for b in (0, 1):
            oracle = fock_oracle_moment(setup, [b], 6).value
            worst_mean = max(worst_mean, abs(oracle / mean_count(setup, b) - 1))
            means.append(oracle)
        oracle_c = fock_oracle_moment(setup, [0, 1], 6).value / (means[0] * means[1])
        worst_coinc = max(worst_coinc, abs(oracle_c / coincidence(setup) - 1))
    elapsed = time.perf_counter() - start
    criterion.append(f"mean-count rel err {worst_mean:.2e} (limit 1e-6), coincidence rel err "
                     f"{worst_coinc:.1e}, {elapsed:.1f} s")
    assert worst_coinc <= 1e-3
    assert elapsed < 60
    assert worst_mean <= 1e-6


@pytest.mark.criterion(7)
def test_achromaticity(criterion):
    def fringe(geometry):
        # complex second harmonic of C(phi34): C = 3/2 + Re(A exp(2 i phi34))
        phis = np.linspace(0, math.pi, 16, endpoint=False)
        c = np.array([coincidence(canonical_setup(geometry, p, 0.0, n_b=N_B)) for p in phis])
        amp = 2 * np.mean((c - 1.5) * np.exp(-2j * phis))
        residual = np.max(np.abs(c - 1.5 - (amp * np.exp(2j * phis)).real))
        return amp, residual

    def propagation_term(geometry):
        u = propagation_matrix(geometry)
        return np.angle(np.conj(u[0, 0]) * u[0, 1] * np.conj(u[1, 1]) * u[1, 0])

    base = Geometry.symmetric(0.1, 0.37, **DEEP)
    doubled = base.with_wavelength(2 * base.wavelength)
    (a1, r1), (a2, r2) = fringe(base), fringe(doubled)
    shift = np.angle(a2 / a1)
    expected = propagation_term(doubled) - propagation_term(base)
    mismatch = wrapped(shift - expected, 2 * math.pi)
    criterion.append(f"shift mismatch {mismatch:.1e}, phi34 residuals {r1:.1e}/{r2:.1e}")
    assert mismatch <= 1e-9
    # the analyser term is exactly exp(2 i phi34) at both wavelengths
    assert max(r1, r2) <= 1e-12
    assert abs(abs(a1) - 0.5) <= 1e-12 and abs(abs(a2) - 0.5) <= 1e-12


@pytest.mark.criterion(8)
def test_entanglement(criterion):
    omegas = np.linspace(0, 4 * math.pi, 101)
    orth = entropy_sweep(SHORT, LONG, omegas)
    psi = OrbitalState.from_unnormalised(1, 1)
    partial = entropy_sweep(SHORT, psi, omegas[:-1])
    assert abs(abs(np.vdot(SHORT.amplitudes, psi.amplitudes)) - 1 / math.sqrt(2)) < 1e-15
    rng = np.random.default_rng(8)
    mismatches = 0
    for _ in range(100):
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        state = TwoPhotonOrbitalState(v / np.linalg.norm(v))
        entropy = von_neumann_entropy(reduced_density(state, "three"))
        mismatches += (chsh_max(state) > 2) != (entropy > 1e-9)
    criterion.append(f"orthogonal dev {np.max(np.abs(orth - 1)):.1e}, partial range {np.ptp(partial):.3f} bits, "
                     f"CHSH mismatches {mismatches}")
    assert np.max(np.abs(orth - 1)) <= 1e-10
    assert np.ptp(partial) > 0.05
    assert mismatches == 0


@pytest.mark.criterion(9)
def test_three_slit(criterion):
    rng = np.random.default_rng(9)
    amps = rng.normal(size=(1000, 3)) + 1j * rng.normal(size=(1000, 3))
    sorkin = max(abs(sorkin_parameter(*row)) for row in amps)
    geometry = default_three_slit_geometry()
    octant = [projector_from_poincare(PoincarePoint(*v)) for v in np.eye(3)]
    phase = geometric_isolation(triple_setup(geometry, octant, 0.5))
    same = [octant[0], octant[0], octant[1]]
    degenerate = geometric_isolation(triple_setup(geometry, same, 0.5))
    criterion.append(f"max |epsilon| {sorkin:.1e}, octant err {abs(phase - math.pi / 4):.1e}")
    assert sorkin <= 1e-12
    assert abs(phase - math.pi / 4) <= 1e-9
    assert degenerate == 0.0


@pytest.mark.criterion(10)
def test_determinism(criterion, tmp_path):
    commands = [["sweep-phi"], ["sweep-baseline"], ["entanglement-sweep"], ["three-slit"],
                ["sweep-phi", "--oracle", "--steps", "4"]]
    for i, cmd in enumerate(commands):
        first, second = tmp_path / f"{i}a.csv", tmp_path / f"{i}b.csv"
        assert main([*cmd, "--out", str(first)]) == 0
        assert main([*cmd, "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()
    criterion.append(f"{len(commands)} commands byte-identical")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))

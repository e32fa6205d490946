import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hbtphase.correlator import mean_count
from hbtphase.errors import DegenerateError, InvalidState
from hbtphase.multislit import (
    cyclic_amplitude,
    default_three_slit_geometry,
    geometric_isolation,
    sorkin_parameter,
    three_source_part,
    triangle_is_degenerate,
    triangle_solid_angle,
    triple_coincidence,
    triple_moment_terms,
    triple_setup,
)
from hbtphase.optics import Geometry
from hbtphase.polarization import PoincarePoint, Projector, pancharatnam_trace, projector_from_poincare

amplitude = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def analysers(*vectors):
    return [projector_from_poincare(PoincarePoint(*(np.asarray(v, float) / np.linalg.norm(v)))) for v in vectors]


def octant_setup(occupations=0.5, wavelength=500e-9):
    return triple_setup(default_three_slit_geometry(wavelength), analysers(*np.eye(3)), occupations)


def excess(a, b, c):
    """Signed spherical excess by L'Huilier's theorem."""
    sides = [math.acos(np.clip(np.dot(x, y), -1, 1)) for x, y in ((b, c), (c, a), (a, b))]
    s = sum(sides) / 2
    t = math.tan(s / 2) * math.prod(math.tan((s - x) / 2) for x in sides)
    return math.copysign(4 * math.atan(math.sqrt(max(t, 0.0))), np.dot(a, np.cross(b, c)))


def wrap(x):
    return (x + math.pi) % (2 * math.pi) - math.pi


@given(amplitude, amplitude, amplitude)
def test_sorkin_parameter_vanishes(a, b, c):
    assert abs(sorkin_parameter(a, b, c)) <= 1e-12 * max(1.0, abs(a) + abs(b) + abs(c)) ** 2


def test_triple_terms_sum_to_total():
    setup = octant_setup()
    parts = triple_moment_terms(setup)
    assert sum(parts.values()) == pytest.approx(triple_coincidence(setup), rel=1e-12)
    means = [mean_count(setup, b) for b in range(3)]
    assert parts["pedestal"] == pytest.approx(np.prod(means), rel=1e-12)


def test_cyclic_part_is_twice_real_amplitude():
    setup = octant_setup()
    assert triple_moment_terms(setup)["cyclic"] == pytest.approx(2 * cyclic_amplitude(setup).real, rel=1e-12)


@pytest.mark.parametrize("blocked", range(3))
def test_blocking_a_slit_removes_three_source_term(blocked):
    occ = np.full(3, 0.5)
    occ[blocked] = 0.0
    setup = octant_setup(occ)
    assert abs(three_source_part(setup, cyclic_amplitude)) < 1e-14 * abs(cyclic_amplitude(octant_setup()))


def test_octant_phase():
    assert geometric_isolation(octant_setup()) == pytest.approx(math.pi / 4, abs=1e-9)


def test_phase_independent_of_wavelength_and_occupation():
    for lam, occ in [(400e-9, 0.1), (700e-9, 2.0), (1.2e-6, (0.1, 0.3, 0.7))]:
        assert geometric_isolation(octant_setup(occ, lam)) == pytest.approx(math.pi / 4, abs=1e-9)


def test_isolated_amplitude_carries_the_trace():
    setup = octant_setup()
    z = three_source_part(setup, cyclic_amplitude)
    # the three-source part is linear in T and conj(T): flipping the triangle conjugates T
    flipped = triple_setup(setup.geometry, analysers([1, 0, 0], [0, 0, 1], [0, 1, 0]), 0.5)
    z_flipped = three_source_part(flipped, cyclic_amplitude)
    assert abs(z) > 0 and abs(z - z_flipped) > 1e-3 * abs(z)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_triangles_recover_half_solid_angle(seed):
    rng = np.random.default_rng(seed)
    vecs = [v / np.linalg.norm(v) for v in rng.normal(size=(3, 3))]
    if min(np.linalg.norm(vecs[i] + vecs[j]) for i, j in ((0, 1), (1, 2), (2, 0))) < 0.05:
        return
    setup = triple_setup(default_three_slit_geometry(), analysers(*vecs), 0.5)
    got = geometric_isolation(setup)
    assert abs(wrap(got - excess(*vecs) / 2)) < 1e-9
    assert abs(wrap(got - np.angle(pancharatnam_trace(setup.source_analysers)))) < 1e-9


def test_rotating_c_shifts_phase_by_half_solid_angle_change():
    a, b = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
    base = None
    for angle in np.linspace(0.2, 1.4, 7):
        c = np.array([0.0, -math.sin(angle), math.cos(angle)])
        setup = triple_setup(default_three_slit_geometry(), analysers(a, b, c), 0.5)
        phase, omega = geometric_isolation(setup), triangle_solid_angle(setup)
        if base is None:
            base = (phase, omega)
            continue
        assert abs(wrap((phase - base[0]) - (omega - base[1]) / 2)) < 1e-9


def test_degenerate_triangles():
    coincident = triple_setup(default_three_slit_geometry(), analysers([1, 0, 0], [1, 0, 0], [0, 1, 0]), 0.5)
    assert triangle_is_degenerate(coincident)
    assert geometric_isolation(coincident) == 0.0
    # three distinct points on a great circle are not degenerate: they enclose a hemisphere
    equator = triple_setup(default_three_slit_geometry(), analysers([1, 0, 0], [0, 1, 0], [-1, -1, 0]), 0.5)
    assert not triangle_is_degenerate(equator)
    assert abs(wrap(geometric_isolation(equator) - math.pi)) < 1e-9


def test_orthogonal_analysers_raise():
    setup = triple_setup(default_three_slit_geometry(), analysers([1, 0, 0], [-1, 0, 0], [0, 1, 0]), 0.5)
    with pytest.raises(DegenerateError):
        geometric_isolation(setup)


def test_symmetric_layout_cannot_resolve_orientation():
    src = [[0, 0, 0], [0.01, 0, 0], [0.005, 0.00866, 0]]
    g = Geometry(src, [[0, 0, 1e4]] * 3, 500e-9, 1e4)
    with pytest.raises(DegenerateError):
        geometric_isolation(triple_setup(g, analysers(*np.eye(3)), 0.5))


def test_setup_validation():
    g = default_three_slit_geometry()
    with pytest.raises(InvalidState):
        triple_setup(g, [Projector.identity()] + analysers([1, 0, 0], [0, 1, 0]))
    with pytest.raises(InvalidState):
        triple_setup(Geometry.symmetric(0.1, 0.1, 100, 1e-6), analysers([1, 0, 0], [0, 1, 0]))

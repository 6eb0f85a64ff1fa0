"""Property-based tests of the invariants."""
import math
import warnings

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.special import jv

from twistex import kernels
from twistex.amplitudes import amplitude_profile, bg_amplitude, polarized_amplitude, transition_strength
from twistex.angular import clebsch_gordan, half, small_d_matrix, wigner_6j
from twistex.beams import BeamSpec, Geometry, Polarization, decompose_polarization
from twistex.scans import format_float
from twistex.scenarios import builtin_scenarios

SCENARIOS = {s.id: s for s in builtin_scenarios()}

twice_j = st.integers(min_value=0, max_value=7)
angles = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi, allow_nan=False)
pitches = st.floats(min_value=0.0, max_value=1.2)
scenario_ids = st.sampled_from(sorted(SCENARIOS))


@st.composite
def cg_args(draw):
    j1, j2 = draw(twice_j), draw(twice_j)
    J = draw(st.integers(abs(j1 - j2), j1 + j2).filter(lambda x: (x - j1 - j2) % 2 == 0))
    m1 = draw(st.integers(-j1, j1).filter(lambda x: (x - j1) % 2 == 0))
    m2 = draw(st.integers(-j2, j2).filter(lambda x: (x - j2) % 2 == 0))
    return j1, m1, j2, m2, J


@given(cg_args())
def test_cg_symmetry_under_sign_flip(args):
    j1, m1, j2, m2, J = args
    assume(abs(m1 + m2) <= J)
    a = clebsch_gordan(j1 / 2, m1 / 2, j2 / 2, m2 / 2, J / 2, (m1 + m2) / 2)
    b = clebsch_gordan(j1 / 2, -m1 / 2, j2 / 2, -m2 / 2, J / 2, -(m1 + m2) / 2)
    assert abs(a - (-1) ** ((j1 + j2 - J) // 2) * b) <= 1e-14


@given(cg_args())
def test_cg_exchange_symmetry(args):
    j1, m1, j2, m2, J = args
    assume(abs(m1 + m2) <= J)
    a = clebsch_gordan(j1 / 2, m1 / 2, j2 / 2, m2 / 2, J / 2, (m1 + m2) / 2)
    b = clebsch_gordan(j2 / 2, m2 / 2, j1 / 2, m1 / 2, J / 2, (m1 + m2) / 2)
    assert abs(a - (-1) ** ((j1 + j2 - J) // 2) * b) <= 1e-14


@st.composite
def sixj_args(draw):
    """Six twice-j values whose four triads all have integer sums."""
    a, b, e = draw(twice_j), draw(twice_j), draw(twice_j)
    same_parity = lambda p: twice_j.filter(lambda x: (x - p) % 2 == 0)
    c = draw(same_parity(a + b))
    f = draw(same_parity(a + e))
    d = draw(same_parity(a + b + e))
    return tuple(x / 2 for x in (a, b, c, d, e, f))


@given(sixj_args())
def test_6j_column_permutation_symmetry(args):
    a, b, c, d, e, f = args
    base = wigner_6j(a, b, c, d, e, f)
    assert abs(base - wigner_6j(b, a, c, e, d, f)) <= 1e-14
    assert abs(base - wigner_6j(c, b, a, f, e, d)) <= 1e-14
    assert abs(base - wigner_6j(d, e, c, a, b, f)) <= 1e-14


@given(twice_j, angles, angles)
def test_d_matrix_orthogonal_and_composes(j2, t1, t2):
    d1, d2 = small_d_matrix(j2 / 2, t1), small_d_matrix(j2 / 2, t2)
    assert np.max(np.abs(d1 @ d1.T - np.eye(j2 + 1))) <= 1e-12
    assert np.max(np.abs(d1 @ d2 - small_d_matrix(j2 / 2, t1 + t2))) <= 1e-12


@given(st.integers(-30, 30), st.floats(min_value=0, max_value=60))
def test_bessel_backend_matches_scipy(n, x):
    assert abs(kernels.jn(n, x) - jv(n, x)) <= 1e-12


@given(st.floats(min_value=0, max_value=2 * math.pi), st.floats(min_value=0, max_value=math.pi))
def test_polarization_weights_normalized(alpha, delta):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # alpha > pi is normalized with a warning
        cm, cp = decompose_polarization(Polarization.general(alpha, delta))
    assert abs(abs(cm) ** 2 + abs(cp) ** 2 - 1) <= 1e-14


@settings(max_examples=40, deadline=None)
@given(scenario_ids, st.integers(-2, 3), pitches, st.floats(0, 6), angles, st.floats(0, math.pi), angles,
       st.floats(0, math.pi), st.floats(0, math.pi), angles)
def test_strength_invariant_under_global_phase(sid, oam, pitch, b, phib, thz, phiz, alpha, delta, chi):
    sc = SCENARIOS[sid]
    t = sc.transition
    beam = BeamSpec(pitch=pitch, oam=oam)
    geom = Geometry(b=b, phi_b=phib, theta_z=thz, phi_z=phiz)
    pol = Polarization.general(alpha, delta)
    amp = polarized_amplitude(t, beam, geom, sc.default_m_i, sc.default_m_f, pol)
    cm, cp = decompose_polarization(pol)
    rotated = np.exp(1j * chi) * (cm * bg_amplitude(t, beam, geom, sc.default_m_i, sc.default_m_f, -1)
                                  + cp * bg_amplitude(t, beam, geom, sc.default_m_i, sc.default_m_f, 1))
    assert abs(abs(amp) - abs(rotated)) <= 1e-12 * max(1.0, abs(amp))


@settings(max_examples=40, deadline=None)
@given(scenario_ids, st.integers(-2, 3), pitches, st.floats(0, 8), angles, st.floats(0, math.pi), angles,
       st.floats(0, math.pi), st.floats(0, math.pi))
def test_engine_equals_literal(sid, oam, pitch, b, phib, thz, phiz, alpha, delta):
    sc = SCENARIOS[sid]
    t = sc.transition
    beam = BeamSpec(pitch=pitch, oam=oam)
    geom = Geometry(b=b, phi_b=phib, theta_z=thz, phi_z=phiz)
    pol = Polarization.general(alpha, delta)
    for mi in t.m_i_values:
        for mf in t.m_f_values:
            lit = polarized_amplitude(t, beam, geom, mi, mf, pol)
            eng = amplitude_profile(t, beam, geom, mi, mf, np.array([b]), pol)[0]
            assert abs(lit - eng) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(scenario_ids, st.integers(0, 3), pitches, st.floats(0, 8), angles, st.sampled_from([-1, 1]))
def test_helicity_strength_independent_of_phi_b_on_axis(sid, oam, pitch, b, phib, lam):
    sc = SCENARIOS[sid]
    beam = BeamSpec(pitch=pitch, oam=oam, polarization=Polarization.circular(lam))
    s0 = transition_strength(sc.transition, beam, Geometry(b=b), sc.default_m_i, sc.default_m_f)
    s1 = transition_strength(sc.transition, beam, Geometry(b=b, phi_b=phib), sc.default_m_i, sc.default_m_f)
    assert abs(s0 - s1) <= 1e-13 * max(1.0, s0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2), st.floats(0, math.pi), st.floats(-3, 3), st.floats(0, math.pi), st.floats(0.1, 10))
def test_mirror_symmetry_pointwise(oam, thz, phib, alpha, b):
    """Strength at (phi_b, b) equals strength at (-phi_b, -b) with phi_z = 0."""
    sc = SCENARIOS["ca40_e2"]
    pol = Polarization.general(alpha, 0.0)
    beam = BeamSpec(oam=oam)
    a = amplitude_profile(sc.transition, beam, Geometry(phi_b=phib, theta_z=thz), sc.default_m_i,
                          sc.default_m_f, np.array([b]), pol)[0]
    m = amplitude_profile(sc.transition, beam, Geometry(phi_b=-phib, theta_z=thz), sc.default_m_i,
                          sc.default_m_f, np.array([-b]), pol)[0]
    assert abs(abs(a) - abs(m)) <= 1e-12


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_format_float_round_trips(x):
    assert float(format_float(x)) == x


@given(st.sampled_from(["1/2", "3/2", "5/2", "7/2", "0", "1", "2", "3"]))
def test_half_round_trip(text):
    h = half(text)
    assert str(h) == text and half(str(h)) == h

import math

import numpy as np
import pytest

from twistex.amplitudes import (
    Character, GeometryConvention, Multipole, TransitionSpec, amplitude_matrix, amplitude_profile,
    appendix_bessel_amplitude, appendix_geometry_terms, appendix_plane_wave_amplitude,
    bessel_amplitude, bg_amplitude, channel_expansion, geometry_tensor, passive_plane_wave_amplitude,
    plane_wave_amplitude, polarized_amplitude, table_euler_angles, transition_strength,
)
from twistex.angular import clebsch_gordan, half
from twistex.beams import BeamFamily, BeamSpec, Geometry, Polarization
from twistex.errors import DomainError
from twistex.scenarios import builtin_scenarios

from oracles import Ion, bb_loop, pol_loop, pw_loop

SCENARIOS = {s.id: s for s in builtin_scenarios()}
LOOP_IONS = {
    "ca40_e2": Ion(0.5, 2.5, [(2, 1, 1.0)]),
    "ar13_m1": Ion(0.5, 1.5, [(1, 0, 1.0)]),
    "yb172_e3": Ion(0.5, 3.5, [(3, 1, 1.0)]),
    "yb171_e3": Ion(0.5, 3.5, [(3, 1, 1.0)], I=0.5, Fi=0, Ff=3),
    "ne5_m1e2": Ion(0.5, 1.5, [(1, 0, 1.1), (2, 1, -1.0)]),
}


def _pairs(t):
    return [(mi, mf) for mi in t.m_i_values for mf in t.m_f_values]


# ---------------------------------------------------------------- plane wave

def test_ar_plane_wave_values():
    t = SCENARIOS["ar13_m1"].transition
    for lam in (1, -1):
        a = plane_wave_amplitude(t, lam / 2, 3 * lam / 2, lam)
        b = plane_wave_amplitude(t, -lam / 2, lam / 2, lam)
        # common factor -i in this multipole phase convention
        assert a == pytest.approx(-1j * lam * math.sqrt(3 * math.pi), rel=1e-14)
        assert b == pytest.approx(-1j * lam * math.sqrt(math.pi), rel=1e-14)
        assert abs(a) / abs(b) == pytest.approx(math.sqrt(3), rel=1e-14)


def test_ca_plane_wave_is_cg_times_prefactor():
    t = SCENARIOS["ca40_e2"].transition
    pref = -(1j ** 3) * math.sqrt(4 * math.pi * 5 / 6)   # -i^(j+mu) sqrt(4pi(2j+1)/(2jf+1)), j=2, mu=1
    for lam in (1, -1):
        for mi, mf in _pairs(t):
            cg = clebsch_gordan(0.5, mi, 2, lam, 2.5, mf) if float(mf - mi) == lam else 0.0
            assert plane_wave_amplitude(t, mi, mf, lam) == pytest.approx(pref * cg, abs=1e-14)


@pytest.mark.parametrize("sid", sorted(SCENARIOS))
def test_plane_wave_matches_loop_oracle_and_selection(sid):
    t = SCENARIOS[sid].transition
    ion = LOOP_IONS[sid]
    for lam in (1, -1):
        for mi, mf in _pairs(t):
            got = plane_wave_amplitude(t, mi, mf, lam)
            assert got == pytest.approx(pw_loop(ion, mf.to_fraction(), mi.to_fraction(), lam), abs=1e-13)
            if (mf - mi) != half(lam):
                assert got == 0


def test_plane_wave_domain_errors():
    t = SCENARIOS["ca40_e2"].transition
    with pytest.raises(DomainError):
        plane_wave_amplitude(t, 1.5, 2.5, 1)
    with pytest.raises(DomainError):
        plane_wave_amplitude(t, 0.5, 1.5, 0)


def test_transition_spec_validation():
    with pytest.raises(DomainError):
        TransitionSpec(half("1/2"), half("5/2"), (Multipole(1, Character.MAGNETIC),))
    with pytest.raises(DomainError):
        TransitionSpec(half("1/2"), half("7/2"), ("E3",), nuclear_spin=half("1/2"), f_i=half(2), f_f=half(3))
    with pytest.raises(DomainError):
        TransitionSpec(half("1/2"), half("3/2"), ())
    assert Multipole.parse("M1:1.1") == Multipole(1, Character.MAGNETIC, 1.1)
    assert Multipole.parse("e2=-1").amplitude == -1.0
    for bad in ("X2", "E", "E2:abc", "E0"):
        with pytest.raises(DomainError):
            Multipole.parse(bad)


# ---------------------------------------------------------------- Bessel beam

@pytest.mark.parametrize("sid", sorted(SCENARIOS))
def test_bessel_beam_reduces_to_plane_wave(sid):
    t = SCENARIOS[sid].transition
    beam = BeamSpec(BeamFamily.BESSEL, pitch=0.0, oam=0)
    for lam in (1, -1):
        for mi, mf in _pairs(t):
            got = bessel_amplitude(t, beam, Geometry(), mi, mf, lam)
            assert got == pytest.approx(plane_wave_amplitude(t, mi, mf, lam), abs=1e-14)


@pytest.mark.parametrize("sid", sorted(SCENARIOS))
def test_bessel_beam_matches_loop_oracle(sid):
    t = SCENARIOS[sid].transition
    ion = LOOP_IONS[sid]
    for oam in (0, 1, 2, -1):
        beam = BeamSpec(BeamFamily.BESSEL, pitch=0.3, oam=oam)
        for b, phib in ((0.0, 0.0), (0.7, 0.4), (2.3, -1.9)):
            for lam in (1, -1):
                for mi, mf in _pairs(t):
                    got = bessel_amplitude(t, beam, Geometry(b=b, phi_b=phib), mi, mf, lam)
                    ref = bb_loop(ion, mf.to_fraction(), mi.to_fraction(), lam, oam, 0.3, b, phib)
                    assert got == pytest.approx(ref, abs=1e-12)


def test_bessel_b0_selection_and_null_dm3():
    t = SCENARIOS["ca40_e2"].transition
    beam = BeamSpec(BeamFamily.BESSEL, oam=2)
    for mi, mf in _pairs(t):
        dm = int(mf - mi)
        val = bessel_amplitude(t, beam, Geometry(), mi, mf, 1)
        if dm != 3:
            assert val == 0
        else:
            assert abs(val) <= 1e-14  # m_gamma = 3 but an E2 photon carries |dm| <= 2
    assert bessel_amplitude(t, beam, Geometry(), 0.5, 2.5, 1) == 0.0


def test_bessel_amplitude_requires_axis():
    t = SCENARIOS["ca40_e2"].transition
    with pytest.raises(DomainError):
        bessel_amplitude(t, BeamSpec(), Geometry(theta_z=0.1), 0.5, 1.5, 1)


# ---------------------------------------------------------------- BG beam, polarization

def test_bg_at_axis_is_envelope_times_bessel():
    t = SCENARIOS["ca40_e2"].transition
    beam = BeamSpec(BeamFamily.BESSEL_GAUSS, pitch=0.085, oam=1, waist=9.0)
    geom = Geometry(b=3.2, phi_b=0.3)
    for lam in (1, -1):
        for mi, mf in _pairs(t):
            ref = math.exp(-3.2 ** 2 / 81) * bessel_amplitude(t, beam, geom, mi, mf, lam)
            assert bg_amplitude(t, beam, geom, mi, mf, lam) == pytest.approx(ref, abs=1e-15)
    wide = beam.replace(waist=1e9)
    pure = beam.replace(family=BeamFamily.BESSEL)
    g = Geometry(b=3.2, theta_z=0.6, phi_z=0.2)
    for mi, mf in _pairs(t):
        assert bg_amplitude(t, wide, g, mi, mf, 1) == pytest.approx(bg_amplitude(t, pure, g, mi, mf, 1), abs=1e-15)


@pytest.mark.parametrize("sid", sorted(SCENARIOS))
def test_engine_and_literal_match_loop_oracle(sid):
    t = SCENARIOS[sid].transition
    ion = LOOP_IONS[sid]
    rng = np.random.default_rng(sorted(SCENARIOS).index(sid))
    for _ in range(3):
        oam = int(rng.integers(-2, 4))
        beam = BeamSpec(BeamFamily.BESSEL_GAUSS, pitch=float(rng.uniform(0.02, 0.5)), oam=oam, waist=6.0)
        b, phib, thz, phiz = rng.uniform(0, 4), rng.uniform(-3, 3), rng.uniform(0, 3), rng.uniform(-3, 3)
        alpha, delta = rng.uniform(0, math.pi, 2)
        pol = Polarization.general(alpha, delta)
        geom = Geometry(b=b, phi_b=phib, theta_z=thz, phi_z=phiz)
        mat = amplitude_matrix(t, beam, geom, pol)
        for mi, mf in _pairs(t):
            ref = pol_loop(ion, mf.to_fraction(), mi.to_fraction(), oam, beam.pitch, b, phib, thz, phiz,
                           alpha, delta, w0=6.0)
            lit = polarized_amplitude(t, beam, geom, mi, mf, pol)
            eng = amplitude_profile(t, beam, geom, mi, mf, np.array([b]), pol)[0]
            assert lit == pytest.approx(ref, abs=1e-12)
            assert eng == pytest.approx(ref, abs=1e-12)
            assert mat[mi, mf] == pytest.approx(ref, abs=1e-12)


def test_helicity_polarization_is_single_helicity():
    t = SCENARIOS["ca40_e2"].transition
    beam = BeamSpec(oam=1)
    geom = Geometry(b=1.1, theta_z=0.7, phi_z=0.2)
    for mi, mf in _pairs(t):
        assert polarized_amplitude(t, beam, geom, mi, mf, Polarization.circular(1)) == \
            bg_amplitude(t, beam, geom, mi, mf, 1)


def test_strength_invariances():
    t = SCENARIOS["yb172_e3"].transition
    beam = BeamSpec(oam=2, polarization=Polarization.circular(-1))
    base = transition_strength(t, beam, Geometry(b=2.0), 0.5, 1.5)
    for phib in (0.3, 1.7, -2.5):
        s = transition_strength(t, beam, Geometry(b=2.0, phi_b=phib), 0.5, 1.5)
        assert s == pytest.approx(base, rel=1e-13)


def test_signed_b_is_opposite_azimuth():
    t = SCENARIOS["ca40_e2"].transition
    exp = channel_expansion(t, BeamSpec(oam=1), 0.5, 1.5, 0.6, 0.0, Polarization.H())
    b = np.linspace(0.1, 9, 17)
    assert np.max(np.abs(exp.evaluate(-b, 0.4) - exp.evaluate(b, 0.4 + math.pi))) <= 1e-13


def test_ca_dark_center_nonzero_for_dm2():
    t = SCENARIOS["ca40_e2"].transition
    geom = Geometry(theta_z=math.pi / 4)
    val = transition_strength(t, BeamSpec(oam=1), geom, 0.5, 2.5, Polarization.H())
    assert val > 1e-3


def test_multipole_selection_dm3_vanishes_everywhere():
    t = SCENARIOS["ca40_e2"].transition
    beam = BeamSpec(oam=2, polarization=Polarization.circular(1))
    for thz in (0.0, 0.5, 1.3):
        prof = amplitude_profile(t, beam, Geometry(theta_z=thz), -0.5, 2.5, np.linspace(0, 10, 21))
        assert np.max(np.abs(prof)) <= 1e-14


# ---------------------------------------------------------------- rotated-photon convention

def test_appendix_reduces_to_plane_wave_moduli():
    t = SCENARIOS["ca40_e2"].transition
    for lam in (1, -1):
        for mi, mf in _pairs(t):
            a = appendix_plane_wave_amplitude(t, mi, mf, lam, 0.0, 0.0)
            assert abs(a) == pytest.approx(abs(plane_wave_amplitude(t, mi, mf, lam)), abs=1e-14)


@pytest.mark.parametrize("sid", ["ca40_e2", "ar13_m1", "yb172_e3", "ne5_m1e2"])
def test_active_and_passive_rotation_agree(sid):
    t = SCENARIOS[sid].transition
    rng = np.random.default_rng(3)
    for psi, th in zip(rng.uniform(-math.pi, math.pi, 10), rng.uniform(0, math.pi, 10)):
        for lam in (1, -1):
            for mi, mf in _pairs(t):
                a = appendix_plane_wave_amplitude(t, mi, mf, lam, psi, th)
                p = passive_plane_wave_amplitude(t, mi, mf, lam, psi, th)
                assert abs(a) == pytest.approx(abs(p), abs=1e-12)


@pytest.mark.parametrize("sid", ["ca40_e2", "ar13_m1", "yb172_e3"])
def test_appendix_bessel_moduli_single_multipole(sid):
    t = SCENARIOS[sid].transition
    for oam in (0, 1, 2):
        beam = BeamSpec(BeamFamily.BESSEL, pitch=0.2, oam=oam)
        for lam in (1, -1):
            for mi, mf in _pairs(t):
                g = Geometry(b=1.3, phi_b=0.2)
                assert abs(appendix_bessel_amplitude(t, beam, g, mi, mf, lam)) == \
                    pytest.approx(abs(bessel_amplitude(t, beam, g, mi, mf, lam)), abs=1e-12)


def test_appendix_mixed_multipoles_flip_relative_sign():
    t = SCENARIOS["ne5_m1e2"].transition
    flipped = t.with_multipoles([m if m.order == 1 else Multipole(m.order, m.character, -m.amplitude)
                                 for m in t.multipoles])
    beam = BeamSpec(BeamFamily.BESSEL, pitch=0.2, oam=1)
    g = Geometry(b=0.9)
    for lam in (1, -1):
        for mi, mf in _pairs(t):
            assert abs(appendix_bessel_amplitude(t, beam, g, mi, mf, lam)) == \
                pytest.approx(abs(bessel_amplitude(flipped, beam, g, mi, mf, lam)), abs=1e-12)


# Table entries are quoted up to a constant per cell; these constants come from
# evaluating the general rotation machinery once (frozen, see ledger).
R2 = 1 / math.sqrt(2)
TABLE_CONSTANTS = {
    GeometryConvention.ACTIVE_PSI_THETA: {
        "H": {0: math.sqrt(3) / 2, 1: R2, -1: R2, 2: R2, -2: R2},
        "V": {0: -1j * math.sqrt(3) / 2, 1: -1j * R2, -1: -1j * R2, 2: -1j * R2, -2: -1j * R2},
    },
    GeometryConvention.PASSIVE_THETA_PHI: {
        "H": {0: math.sqrt(3) / 2, 1: R2, -1: R2, 2: R2 / 2, -2: R2 / 2},
        "V": {0: 0.0, 1: -1j * R2, -1: -1j * R2, 2: -1j * R2, -2: -1j * R2},
    },
}


def test_table_closed_form_examples():
    t, p = 0.4, 1.1
    top, bot = GeometryConvention.ACTIVE_PSI_THETA, GeometryConvention.PASSIVE_THETA_PHI
    assert appendix_geometry_terms(2, top, 0, "H", t, p) == pytest.approx(math.sin(2 * t) * math.cos(p))
    assert appendix_geometry_terms(2, bot, 0, "V", t, p) == 0
    assert appendix_geometry_terms(2, bot, 0, "H", t, p) == pytest.approx(-math.sin(2 * t))
    with pytest.raises(DomainError):
        appendix_geometry_terms(2, top, 3, "H", t, p)
    with pytest.raises(DomainError):
        appendix_geometry_terms(1, top, 0, "H", t, p)


@pytest.mark.parametrize("convention", list(GeometryConvention))
@pytest.mark.parametrize("pol", ["H", "V"])
@pytest.mark.parametrize("dm", [-2, -1, 0, 1, 2])
def test_general_machinery_reproduces_table(convention, pol, dm):
    rng = np.random.default_rng(17)
    k = TABLE_CONSTANTS[convention][pol][dm]
    p = Polarization.parse(pol)
    for theta, phi in zip(rng.uniform(0, math.pi, 20), rng.uniform(-math.pi, math.pi, 20)):
        euler = table_euler_angles(convention, theta, phi)
        got = geometry_tensor(2, p, -dm, euler)
        ref = k * appendix_geometry_terms(2, convention, dm, pol, theta, phi)
        assert abs(got - ref) <= 1e-12

"""Quick oracle checks run by ``twistex selftest``."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import kernels
from .amplitudes import (
    appendix_plane_wave_amplitude, bessel_amplitude, passive_plane_wave_amplitude,
)
from .angular import clebsch_gordan, small_d_matrix, wigner_6j
from .beams import BeamFamily, BeamSpec, Geometry, Polarization
from .scans import ScanRequest, run_polmap
from .scenarios import builtin_scenarios, get_scenario, hyperfine_scale, small_b_oracle

__all__ = ["run_checks"]


def _cg_closed_forms() -> float:
    # stretched coupling of a spin 1/2: <1/2 1/2; j m | j+1/2 m+1/2> = sqrt((j+m+1)/(2j+1))
    err = 0.0
    for j2 in range(0, 8):
        j = j2 / 2
        for m2 in range(-j2, j2 + 1, 2):
            m = m2 / 2
            ref = math.sqrt((j + m + 1) / (2 * j + 1))
            err = max(err, abs(clebsch_gordan(0.5, 0.5, j, m, j + 0.5, m + 0.5) - ref))
    # 6j with a zero argument
    for a in range(0, 5):
        for b in range(0, 5):
            for c in range(abs(a - b), a + b + 1):
                ref = (-1) ** (a + b + c) / math.sqrt((2 * b + 1) * (2 * c + 1))
                err = max(err, abs(wigner_6j(a, b, c, 0, c, b) - ref))
    return err


def _d_unitarity() -> float:
    err = 0.0
    for j2 in range(0, 8):
        for th in (0.3, 1.1, 2.9):
            d = small_d_matrix(j2 / 2, th)
            err = max(err, float(np.max(np.abs(d @ d.T - np.eye(j2 + 1)))))
    return err


def _bessel() -> float:
    from . import _bessel_py
    x = np.linspace(0.0, 50.0, 401)
    err = 0.0
    for n in (0, 1, 5, 12):
        a = _bessel_py.bessel_table(n, x)[:, n]
        b = kernels.bessel_table(n, x)[:, n]
        err = max(err, float(np.max(np.abs(a - b))))
    # J_1(1) from its alternating series
    ref = sum((-1) ** k * 0.5 ** (2 * k + 1) / (math.factorial(k) * math.factorial(k + 1)) for k in range(30))
    return max(err, abs(kernels.jn(1, 1.0) - ref))


def _selection_rule() -> float:
    worst = 0.0
    for sc in builtin_scenarios():
        t = sc.transition
        for oam in (0, 1, 2):
            beam = BeamSpec(BeamFamily.BESSEL, 0.085, oam)
            for lam in (-1, 1):
                for mi in t.m_i_values:
                    for mf in t.m_f_values:
                        if (mf.twice - mi.twice) // 2 != oam + lam:
                            worst = max(worst, abs(bessel_amplitude(t, beam, Geometry(), mi, mf, lam)))
    return worst


def _small_b_shapes() -> float:
    k = 0.05
    zs = np.linspace(0, math.pi, 21)[1:]
    worst = 0.0
    from .amplitudes import amplitude_profile
    for sid in ("ca40_e2", "ar13_m1"):
        sc = get_scenario(sid)
        for oam in (0, 1):
            for pol in ("H", "V"):
                beam = BeamSpec(pitch=k, oam=oam)
                model = np.array([amplitude_profile(sc.transition, beam, Geometry(theta_z=z), sc.default_m_i,
                                                    sc.default_m_f, np.array([1e-4]), Polarization.parse(pol))[0]
                                  for z in zs])
                ref = np.array([small_b_oracle(sid, oam, pol, z, k) for z in zs])
                c = np.vdot(ref, model) / np.vdot(ref, ref)
                worst = max(worst, float(np.max(np.abs(model - c * ref)) / np.max(np.abs(model))))
    return worst


def _hyperfine() -> float:
    return abs(hyperfine_scale() - 2 / math.sqrt(5))


def _conventions() -> float:
    t = get_scenario("ca40_e2").transition
    rng = np.random.default_rng(7)
    worst = 0.0
    for psi, th in rng.uniform(0, math.pi, (5, 2)):
        for mi in t.m_i_values:
            for mf in t.m_f_values:
                for lam in (-1, 1):
                    a = abs(appendix_plane_wave_amplitude(t, mi, mf, lam, psi, th))
                    b = abs(passive_plane_wave_amplitude(t, mi, mf, lam, psi, th))
                    worst = max(worst, abs(a - b))
    return worst


def _mirror() -> float:
    req = ScanRequest(scenario_id="ca40_e2", theta_z=math.pi / 4, phi_b=-0.45, sweep=True,
                      alpha_steps=19, b_max=12, b_steps=41, normalize="peak")
    g1 = run_polmap(req)
    from dataclasses import replace
    g2 = run_polmap(replace(req, phi_b=0.45))
    return float(np.max(np.abs(g1.values - g2.values[:, ::-1])))


CHECKS: list[tuple[str, Callable[[], float], float]] = [
    ("clebsch-gordan and 6j closed forms", _cg_closed_forms, 1e-14),
    ("d-matrix orthogonality j <= 7/2", _d_unitarity, 1e-12),
    ("bessel backends and series", _bessel, 1e-12),
    ("b = 0 selection rule", _selection_rule, 1e-14),
    ("small-b shapes (Ca, Ar)", _small_b_shapes, 1e-3),
    ("hyperfine scale 2/sqrt(5)", _hyperfine, 1e-14),
    ("active vs passive rotation", _conventions, 1e-12),
    ("polarization-map mirror symmetry", _mirror, 1e-12),
]


def run_checks() -> list[tuple[str, bool, float, float]]:
    results = []
    for name, fn, tol in CHECKS:
        err = fn()
        results.append((name, bool(err <= tol), err, tol))
    return results

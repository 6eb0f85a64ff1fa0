"""Photo-absorption amplitudes for plane, Bessel and Bessel-Gauss beams.

Two evaluation paths are provided:

* Literal functions (:func:`plane_wave_amplitude`, :func:`bessel_amplitude`,
  :func:`bg_amplitude`, :func:`polarized_amplitude`) that follow the sums term
  by term.  They are the reference implementation.
* A channel expansion used for scans.  For fixed beam, alignment and
  sublevels the amplitude is ``g(b) * sum_n W_n exp(i n phi_b) J_n(kappa b)``,
  so the angular algebra is done once and each grid point only needs a
  Bessel sum (the compiled kernel).

Phase convention of the Bessel-beam amplitude
---------------------------------------------
The twisted amplitude carries the phase ``i^(-(n + oam))`` with
``n = m_gamma - (m_f - m_i)``.  With this choice a Bessel beam of zero OAM
and zero pitch, centred on the ion, reproduces the plane-wave amplitude
exactly for both helicities, so that coherent helicity superpositions
(linear polarization) keep their plane-wave meaning.

Magnetic sublevel arrays are ordered with m ascending from -J to J.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels
from .angular import (
    HalfInt, clebsch_gordan, half, m_values, small_d_matrix, triangle, wigner_6j, wigner_D,
    wigner_small_d,
)
from .beams import BeamFamily, BeamSpec, Geometry, Polarization, bessel_J, decompose_polarization
from .errors import DomainError

__all__ = [
    "Character",
    "Multipole",
    "TransitionSpec",
    "AmplitudeMatrix",
    "ChannelExpansion",
    "GeometryConvention",
    "plane_wave_amplitude",
    "bessel_amplitude",
    "bg_amplitude",
    "polarized_amplitude",
    "transition_strength",
    "channel_expansion",
    "amplitude_profile",
    "strength_profile",
    "amplitude_matrix",
    "appendix_plane_wave_amplitude",
    "passive_plane_wave_amplitude",
    "appendix_bessel_amplitude",
    "geometry_tensor",
    "appendix_geometry_terms",
]

_I_POW = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


def _ipow(k: int) -> complex:
    """i**k for integer k, exact."""
    return _I_POW[k % 4]


def _neg1pow(twice_exponent: int) -> int:
    if twice_exponent % 2:
        raise DomainError("(-1)^x requires an integer exponent")
    return -1 if (twice_exponent // 2) % 2 else 1


class Character(enum.IntEnum):
    MAGNETIC = 0
    ELECTRIC = 1


@dataclass(frozen=True)
class Multipole:
    """Multipole of order ``order`` (j >= 1) with reduced amplitude M_{j mu}."""

    order: int
    character: Character
    amplitude: float = 1.0

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise DomainError(f"multipole order must be an integer >= 1, got {self.order}")
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "character", Character(self.character))
        amp = float(self.amplitude)
        if not math.isfinite(amp):
            raise DomainError("multipole amplitude must be finite")
        object.__setattr__(self, "amplitude", amp)

    @property
    def label(self) -> str:
        return ("E" if self.character is Character.ELECTRIC else "M") + str(self.order)

    @classmethod
    def parse(cls, text: str) -> "Multipole":
        """Parse ``"E2"``, ``"M1:1.1"`` or ``"E2=-1.0"``."""
        s = text.strip()
        for sep in (":", "="):
            if sep in s:
                name, _, value = s.partition(sep)
                break
        else:
            name, value = s, "1.0"
        name = name.strip().upper()
        if len(name) < 2 or name[0] not in "EM" or not name[1:].isdigit():
            raise DomainError(f"cannot parse multipole {text!r}")
        char = Character.ELECTRIC if name[0] == "E" else Character.MAGNETIC
        try:
            amp = float(value)
        except ValueError:
            raise DomainError(f"bad amplitude in multipole {text!r}") from None
        return cls(int(name[1:]), char, amp)


@dataclass(frozen=True)
class TransitionSpec:
    """Initial/final levels, optional nuclear spin and contributing multipoles.

    When ``nuclear_spin`` is given, ``f_i`` and ``f_f`` are required and the
    photon couples to the total angular momentum F; magnetic sublevels then
    refer to F.
    """

    j_i: HalfInt
    j_f: HalfInt
    multipoles: tuple
    nuclear_spin: Optional[HalfInt] = None
    f_i: Optional[HalfInt] = None
    f_f: Optional[HalfInt] = None

    def __post_init__(self):
        ji, jf = half(self.j_i), half(self.j_f)
        object.__setattr__(self, "j_i", ji)
        object.__setattr__(self, "j_f", jf)
        mults = tuple(m if isinstance(m, Multipole) else Multipole.parse(str(m))
                      for m in self.multipoles)
        if not mults:
            raise DomainError("a transition needs at least one multipole")
        object.__setattr__(self, "multipoles", mults)
        if ji.twice < 0 or jf.twice < 0:
            raise DomainError("angular momenta must be non-negative")
        if self.nuclear_spin is None:
            if self.f_i is not None or self.f_f is not None:
                raise DomainError("F quantum numbers require a nuclear spin")
        else:
            nuc = half(self.nuclear_spin)
            if self.f_i is None or self.f_f is None:
                raise DomainError("nuclear spin requires both f_i and f_f")
            fi, ff = half(self.f_i), half(self.f_f)
            object.__setattr__(self, "nuclear_spin", nuc)
            object.__setattr__(self, "f_i", fi)
            object.__setattr__(self, "f_f", ff)
            if not triangle(ji, nuc, fi):
                raise DomainError(f"F_i={fi} not reachable from j_i={ji} and I={nuc}")
            if not triangle(jf, nuc, ff):
                raise DomainError(f"F_f={ff} not reachable from j_f={jf} and I={nuc}")
        for m in mults:
            if not triangle(self.J_i, m.order, self.J_f):
                raise DomainError(
                    f"{m.label} cannot couple {self.J_i} to {self.J_f} (triangle rule)")

    @property
    def has_hyperfine(self) -> bool:
        return self.nuclear_spin is not None

    @property
    def J_i(self) -> HalfInt:
        """Angular momentum carrying the initial sublevels (F_i or j_i)."""
        return self.f_i if self.nuclear_spin is not None else self.j_i

    @property
    def J_f(self) -> HalfInt:
        return self.f_f if self.nuclear_spin is not None else self.j_f

    @property
    def m_i_values(self) -> list:
        return m_values(self.J_i)

    @property
    def m_f_values(self) -> list:
        return m_values(self.J_f)

    def index_i(self, m) -> int:
        return _index(self.J_i, half(m), "m_i")

    def index_f(self, m) -> int:
        return _index(self.J_f, half(m), "m_f")

    def with_multipoles(self, multipoles: Iterable) -> "TransitionSpec":
        from dataclasses import replace
        return replace(self, multipoles=tuple(multipoles))


def _index(j: HalfInt, m: HalfInt, name: str) -> int:
    if (j.twice - m.twice) % 2 or abs(m.twice) > j.twice:
        raise DomainError(f"{name}={m} is not a sublevel of J={j}")
    return (m.twice + j.twice) // 2


def _coupling(t: TransitionSpec, mi: HalfInt, mf: HalfInt, j: int, q: HalfInt) -> float:
    """Angular coefficient multiplying M_{j mu} for photon projection q."""
    if t.nuclear_spin is None:
        return clebsch_gordan(t.j_i, mi, j, q, t.j_f, mf) / math.sqrt(t.j_f.twice + 1)
    nuc, fi, ff = t.nuclear_spin, t.f_i, t.f_f
    cg = clebsch_gordan(fi, mi, j, q, ff, mf)
    if cg == 0.0:
        return 0.0
    sign = _neg1pow(t.j_f.twice + nuc.twice + fi.twice - 2 * j)
    return sign * math.sqrt(fi.twice + 1) * cg * wigner_6j(t.j_f, ff, nuc, fi, t.j_i, j)


def _multipole_prefactor(m: Multipole, lam: int) -> complex:
    j, mu = m.order, int(m.character)
    return -_ipow(j + mu) * math.sqrt(4.0 * math.pi * (2 * j + 1)) * (lam ** (mu + 1)) * m.amplitude


def _check_helicity(lam) -> int:
    if lam not in (1, -1):
        raise DomainError(f"helicity must be +1 or -1, got {lam!r}")
    return int(lam)


# ---------------------------------------------------------------------------
# literal reference path

def plane_wave_amplitude(t: TransitionSpec, m_i, m_f, lam: int) -> complex:
    """Plane-wave multipole amplitude for a photon of helicity ``lam`` along the quantization axis."""
    lam = _check_helicity(lam)
    mi, mf = half(m_i), half(m_f)
    t.index_i(mi)
    t.index_f(mf)
    total = 0j
    for m in t.multipoles:
        c = _coupling(t, mi, mf, m.order, half(lam))
        if c != 0.0:
            total += _multipole_prefactor(m, lam) * c
    return total


def bessel_amplitude(t: TransitionSpec, beam: BeamSpec, geom: Geometry, m_i, m_f, lam: int) -> complex:
    """Bessel-beam amplitude at impact parameter (b, phi_b) with the quantization axis along the beam.

    The Gaussian envelope of a Bessel-Gauss beam is not applied here (see
    :func:`bg_amplitude`).
    """
    lam = _check_helicity(lam)
    if geom.theta_z != 0.0:
        raise DomainError("bessel_amplitude requires theta_z = 0; use bg_amplitude")
    mi, mf = half(m_i), half(m_f)
    t.index_i(mi)
    t.index_f(mf)
    m_gamma = beam.oam + lam
    n = m_gamma - (mf.twice - mi.twice) // 2
    radial = bessel_J(n, beam.kappa * geom.b)
    if radial == 0.0:
        return 0j
    s = 0j
    for mfp in t.m_f_values:
        df = wigner_small_d(t.J_f, mf, mfp, beam.pitch)
        if df == 0.0:
            continue
        for mip in t.m_i_values:
            di = wigner_small_d(t.J_i, mi, mip, beam.pitch)
            if di != 0.0:
                s += df * di * plane_wave_amplitude(t, mip, mfp, lam)
    phase = _ipow(-(n + beam.oam)) * complex(np.exp(1j * n * geom.phi_b))
    return phase * radial * s


def bg_amplitude(t: TransitionSpec, beam: BeamSpec, geom: Geometry, m_i, m_f, lam: int) -> complex:
    """Amplitude with the quantization axis along (theta_z, phi_z).

    The Gaussian factor exp(-b^2/w0^2) multiplies the rotated Bessel amplitude;
    for a pure Bessel beam it is 1.
    """
    lam = _check_helicity(lam)
    mi, mf = half(m_i), half(m_f)
    t.index_i(mi)
    t.index_f(mf)
    flat = geom.replace(theta_z=0.0, phi_z=0.0)
    s = 0j
    for mfp in t.m_f_values:
        df = wigner_small_d(t.J_f, mf, mfp, geom.theta_z)
        if df == 0.0:
            continue
        for mip in t.m_i_values:
            di = wigner_small_d(t.J_i, mi, mip, geom.theta_z)
            if di != 0.0:
                s += df * di * bessel_amplitude(t, beam, flat, mip, mfp, lam)
    dm = (mf.twice - mi.twice) // 2
    return float(beam.envelope(geom.b)) * complex(np.exp(-1j * dm * geom.phi_z)) * s


def polarized_amplitude(t: TransitionSpec, beam: BeamSpec, geom: Geometry, m_i, m_f,
                        pol: Optional[Polarization] = None) -> complex:
    """Coherent superposition c_minus M(-1) + c_plus M(+1) for the given polarization.

    Each helicity component carries its own m_gamma = oam + helicity.
    ``pol`` defaults to ``beam.polarization``.
    """
    pol = beam.polarization if pol is None else pol
    c_minus, c_plus = decompose_polarization(pol)
    total = 0j
    if c_minus != 0:
        total += c_minus * bg_amplitude(t, beam, geom, m_i, m_f, -1)
    if c_plus != 0:
        total += c_plus * bg_amplitude(t, beam, geom, m_i, m_f, 1)
    return total


def transition_strength(t: TransitionSpec, beam: BeamSpec, geom: Geometry, m_i, m_f,
                        pol: Optional[Polarization] = None) -> float:
    """|amplitude|, proportional to the Rabi frequency (arbitrary units)."""
    return abs(polarized_amplitude(t, beam, geom, m_i, m_f, pol))


# ---------------------------------------------------------------------------
# channel expansion (fast path)

@lru_cache(maxsize=256)
def _pw_matrix(t: TransitionSpec, lam: int) -> np.ndarray:
    mf_vals, mi_vals = t.m_f_values, t.m_i_values
    out = np.zeros((len(mf_vals), len(mi_vals)), dtype=complex)
    for f, mf in enumerate(mf_vals):
        for i, mi in enumerate(mi_vals):
            out[f, i] = plane_wave_amplitude(t, mi, mf, lam)
    return out


@lru_cache(maxsize=4096)
def _channel_tensor(t: TransitionSpec, pitch: float, oam: int, lam: int,
                    theta_z: float, phi_z: float) -> tuple:
    """Orders n and coefficient matrices W_n[f, i] for one helicity.

    The order range is oam-1-D .. oam+1+D with D = J_i + J_f, shared by both
    helicities so that polarized combinations are plain sums.
    """
    Ji2, Jf2 = t.J_i.twice, t.J_f.twice
    D = (Ji2 + Jf2) // 2
    orders = np.arange(oam - 1 - D, oam + 2 + D, dtype=np.int64)
    core = small_d_matrix(t.J_f, pitch) @ _pw_matrix(t, lam) @ small_d_matrix(t.J_i, pitch).T
    mf2 = np.arange(-Jf2, Jf2 + 1, 2)
    mi2 = np.arange(-Ji2, Ji2 + 1, 2)
    dm = (mf2[:, None] - mi2[None, :]) // 2
    n_of = (oam + lam) - dm
    rot_f = small_d_matrix(t.J_f, theta_z)
    rot_i = small_d_matrix(t.J_i, theta_z)
    azimuth = np.exp(-1j * dm * phi_z)
    W = np.zeros((orders.size, mf2.size, mi2.size), dtype=complex)
    for k, n in enumerate(orders):
        mask = n_of == n
        if not mask.any():
            continue
        W[k] = _ipow(-(int(n) + oam)) * azimuth * (rot_f @ np.where(mask, core, 0) @ rot_i.T)
    W.setflags(write=False)
    return orders, W


def _polarized_tensor(t: TransitionSpec, beam: BeamSpec, theta_z: float, phi_z: float,
                      pol: Polarization) -> tuple:
    c_minus, c_plus = decompose_polarization(pol)
    orders = None
    W = 0
    for c, lam in ((c_minus, -1), (c_plus, 1)):
        if c == 0:
            continue
        orders, Wl = _channel_tensor(t, beam.pitch, beam.oam, lam, float(theta_z), float(phi_z))
        W = W + c * Wl
    return orders, W


@dataclass(frozen=True)
class ChannelExpansion:
    """amplitude(b, phi_b) = g(|b|) sum_n coeffs[n] exp(i n phi) J_n(kappa |b|).

    Negative ``b`` denotes the point at distance |b| on the opposite side of the
    vortex, i.e. azimuth ``phi_b + pi``.
    """

    orders: np.ndarray
    coeffs: np.ndarray
    beam: BeamSpec

    def evaluate(self, b, phi_b: float = 0.0) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        flat = b.ravel()
        out = np.zeros(flat.size, dtype=complex)
        absb = np.abs(flat)
        base = self.coeffs * np.exp(1j * self.orders * phi_b)
        neg = np.signbit(flat) & (flat != 0.0)
        for sel, coeffs in ((~neg, base), (neg, base * np.where(self.orders % 2, -1.0, 1.0))):
            if sel.any():
                out[sel] = kernels.channel_sum(self.orders, coeffs, self.beam.kappa * absb[sel])
        out *= self.beam.envelope(absb)
        return out.reshape(b.shape)

    def combine(self, weight: complex, other: "ChannelExpansion", other_weight: complex) -> "ChannelExpansion":
        if not np.array_equal(self.orders, other.orders):
            raise DomainError("channel expansions with different order ranges")
        return ChannelExpansion(self.orders, weight * self.coeffs + other_weight * other.coeffs, self.beam)


def channel_expansion(t: TransitionSpec, beam: BeamSpec, m_i, m_f, theta_z: float = 0.0,
                      phi_z: float = 0.0, pol: Optional[Polarization] = None) -> ChannelExpansion:
    """Channel expansion of the polarized amplitude for one (m_i, m_f) pair."""
    pol = beam.polarization if pol is None else pol
    i, f = t.index_i(m_i), t.index_f(m_f)
    orders, W = _polarized_tensor(t, beam, theta_z, phi_z, pol)
    return ChannelExpansion(orders, np.array(W[:, f, i]), beam)


def amplitude_profile(t: TransitionSpec, beam: BeamSpec, geom: Geometry, m_i, m_f, b,
                      pol: Optional[Polarization] = None) -> np.ndarray:
    """Polarized amplitude on a grid of (signed) impact parameters.

    ``geom`` supplies phi_b, theta_z and phi_z; its ``b`` is ignored.
    """
    exp = channel_expansion(t, beam, m_i, m_f, geom.theta_z, geom.phi_z, pol)
    return exp.evaluate(b, geom.phi_b)


def strength_profile(t: TransitionSpec, beam: BeamSpec, geom: Geometry, m_i, m_f, b,
                     pol: Optional[Polarization] = None) -> np.ndarray:
    return np.abs(amplitude_profile(t, beam, geom, m_i, m_f, b, pol))


@dataclass(frozen=True)
class AmplitudeMatrix:
    """Complex amplitudes indexed by (m_i, m_f).

    ``entries[a, b]`` belongs to ``m_i_values[a]`` and ``m_f_values[b]``.
    """

    entries: np.ndarray
    m_i_values: tuple
    m_f_values: tuple
    transition: TransitionSpec
    beam: BeamSpec
    geometry: Geometry
    polarization: Polarization

    def __getitem__(self, key) -> complex:
        mi, mf = key
        return complex(self.entries[self.transition.index_i(mi), self.transition.index_f(mf)])

    @property
    def strengths(self) -> np.ndarray:
        return np.abs(self.entries)


def amplitude_matrix(t: TransitionSpec, beam: BeamSpec, geom: Geometry,
                     pol: Optional[Polarization] = None) -> AmplitudeMatrix:
    """All sublevel amplitudes at one geometry."""
    pol = beam.polarization if pol is None else pol
    orders, W = _polarized_tensor(t, beam, geom.theta_z, geom.phi_z, pol)
    x = beam.kappa * geom.b
    nmax = int(np.max(np.abs(orders)))
    table = kernels.bessel_table(nmax, np.array([x]))[0]
    jvals = np.array([table[abs(n)] * (-1 if (n < 0 and n % 2) else 1) for n in orders])
    weights = jvals * np.exp(1j * orders * geom.phi_b)
    M = float(beam.envelope(geom.b)) * np.tensordot(weights, W, axes=(0, 0))
    return AmplitudeMatrix(M.T.copy(), tuple(t.m_i_values), tuple(t.m_f_values), t, beam, geom, pol)


# ---------------------------------------------------------------------------
# alternative (rotated-photon) convention, used as an independent cross-check

class GeometryConvention(enum.Enum):
    ACTIVE_PSI_THETA = "active"     # photon rotated by Euler angles (psi_k, theta_k, 0)
    PASSIVE_THETA_PHI = "passive"   # electron states rotated by (0, -theta, -phi)


def _appendix_coupling(t: TransitionSpec, mi: HalfInt, mf: HalfInt, j: int, q: HalfInt) -> float:
    # extra (-1)^(j - j_f + j_i) phase of the rotated-photon convention
    return _neg1pow(2 * j - t.j_f.twice + t.j_i.twice) * _coupling(t, mi, mf, j, q)


def appendix_plane_wave_amplitude(t: TransitionSpec, m_i, m_f, lam: int,
                                  psi_k: float, theta_k: float) -> complex:
    """Plane-wave amplitude for a photon incident along (theta_k, psi_k), active-rotation form.

    sum_j sum_m -sqrt(4 pi (2j+1)) i^(j+mu) lam^(mu+1) conj(D^j_{lam,m}(psi_k, theta_k, 0))
    (-1)^(j-j_f+j_i) <coupling>_m M_{j mu}.
    """
    lam = _check_helicity(lam)
    mi, mf = half(m_i), half(m_f)
    t.index_i(mi)
    t.index_f(mf)
    q = HalfInt(mf.twice - mi.twice)
    total = 0j
    for m in t.multipoles:
        if abs(q.twice) > 2 * m.order:
            continue
        c = _appendix_coupling(t, mi, mf, m.order, q)
        if c == 0.0:
            continue
        rot = np.conj(wigner_D(m.order, lam, q, psi_k, theta_k, 0.0))
        total += _multipole_prefactor(m, lam) * rot * c
    return complex(total)


def passive_plane_wave_amplitude(t: TransitionSpec, m_i, m_f, lam: int,
                                 psi_k: float, theta_k: float) -> complex:
    """Same physical amplitude with the electron states rotated by D(0, -theta_k, -psi_k)."""
    lam = _check_helicity(lam)
    mi, mf = half(m_i), half(m_f)
    t.index_i(mi)
    t.index_f(mf)
    total = 0j
    for mfp in t.m_f_values:
        df = wigner_D(t.J_f, mf, mfp, 0.0, -theta_k, -psi_k)
        if df == 0:
            continue
        for mip in t.m_i_values:
            di = np.conj(wigner_D(t.J_i, mi, mip, 0.0, -theta_k, -psi_k))
            if di == 0:
                continue
            total += df * di * appendix_plane_wave_amplitude(t, mip, mfp, lam, 0.0, 0.0)
    return complex(total)


def appendix_bessel_amplitude(t: TransitionSpec, beam: BeamSpec, geom: Geometry, m_i, m_f,
                              lam: int) -> complex:
    """Twisted amplitude assembled directly from the rotated-photon convention.

    sum_j i^(m - 2 m_gamma) exp(i (m_gamma - m) phi_b) J_{m_gamma - m}(kappa b)
    d^j_{m,lam}(theta_k) [rotated-photon coupling], with m = m_f - m_i.
    Requires theta_z = 0.  Moduli agree with :func:`bessel_amplitude` for a
    single multipole; with several multipoles the (-1)^j phase of this
    convention flips the relative sign of odd and even orders.
    """
    lam = _check_helicity(lam)
    if geom.theta_z != 0.0:
        raise DomainError("appendix_bessel_amplitude requires theta_z = 0")
    mi, mf = half(m_i), half(m_f)
    t.index_i(mi)
    t.index_f(mf)
    m = (mf.twice - mi.twice) // 2
    m_gamma = beam.oam + lam
    n = m_gamma - m
    radial = bessel_J(n, beam.kappa * geom.b)
    total = 0j
    for mult in t.multipoles:
        if abs(m) > mult.order:
            continue
        c = _appendix_coupling(t, mi, mf, mult.order, HalfInt(2 * m))
        if c == 0.0:
            continue
        d = wigner_small_d(mult.order, m, lam, beam.pitch)
        total += _multipole_prefactor(mult, lam) * d * c
    phase = _ipow(m - 2 * m_gamma) * complex(np.exp(1j * n * geom.phi_b))
    return phase * radial * total


def geometry_tensor(j: int, pol: Polarization, m: int, euler: Sequence[float],
                    character: Character = Character.ELECTRIC) -> complex:
    """sum_lam c_lam lam^(mu+1) conj(D^j_{lam,m}(psi, theta, phi)) for a polarization state."""
    c_minus, c_plus = decompose_polarization(pol)
    psi, theta, phi = euler
    mu = int(character)
    total = 0j
    for c, lam in ((c_minus, -1), (c_plus, 1)):
        if c != 0:
            total += c * lam ** (mu + 1) * np.conj(wigner_D(j, lam, m, psi, theta, phi))
    return complex(total)


def _table_top(pol: str, dm: int, t: float, p: float) -> complex:
    s2, c2, st, ct = math.sin(2 * t), math.cos(2 * t), math.sin(t), math.cos(t)
    sp, cp = math.sin(p), math.cos(p)
    H = {0: s2 * cp, 1: c2 * cp - 1j * ct * sp, -1: -c2 * cp - 1j * ct * sp,
         2: -0.5 * s2 * cp + 1j * st * sp, -2: -0.5 * s2 * cp - 1j * st * sp}
    V = {0: 1j * s2 * sp, 1: -ct * cp + 1j * c2 * sp, -1: -ct * cp - 1j * c2 * sp,
         2: st * cp - 0.5j * s2 * sp, -2: -st * cp - 0.5j * s2 * sp}
    return complex((H if pol == "H" else V)[dm])


def _table_bottom(pol: str, dm: int, t: float, p: float) -> complex:
    s2, c2, st, ct = math.sin(2 * t), math.cos(2 * t), math.sin(t), math.cos(t)
    e1, e2 = complex(math.cos(p), math.sin(p)), complex(math.cos(2 * p), math.sin(2 * p))
    H = {0: -s2, 1: c2 * e1, -1: -c2 * e1.conjugate(), 2: s2 * e2, -2: s2 * e2.conjugate()}
    V = {0: 0.0, 1: -ct * e1, -1: -ct * e1.conjugate(), 2: -st * e2, -2: st * e2.conjugate()}
    return complex((H if pol == "H" else V)[dm])


def appendix_geometry_terms(j, convention: GeometryConvention, dm: int, pol: str,
                            theta: float, phi: float) -> complex:
    """Closed-form geometry factors of an E2 plane-wave absorption (test oracle).

    ``convention`` ACTIVE_PSI_THETA takes (theta, phi) = (theta_k, psi_k) with
    Euler angles (psi_k, theta_k, 0); PASSIVE_THETA_PHI uses Euler angles
    (0, -theta, -phi).  Values are defined up to a constant per (pol, dm)
    entry.  Only j = 2 and |dm| <= 2 are tabulated.
    """
    if half(j) != half(2):
        raise DomainError("closed-form geometry terms exist for j = 2 only")
    if int(dm) != dm or abs(dm) > 2:
        raise DomainError(f"dm={dm} outside the tabulated range |dm| <= 2")
    if pol not in ("H", "V"):
        raise DomainError("pol must be 'H' or 'V'")
    convention = GeometryConvention(convention)
    if convention is GeometryConvention.ACTIVE_PSI_THETA:
        return _table_top(pol, int(dm), theta, phi)
    return _table_bottom(pol, int(dm), theta, phi)


def table_euler_angles(convention: GeometryConvention, theta: float, phi: float) -> tuple:
    """Euler angles that pair with :func:`appendix_geometry_terms`."""
    if GeometryConvention(convention) is GeometryConvention.ACTIVE_PSI_THETA:
        return (phi, theta, 0.0)
    return (0.0, -theta, -phi)

"""Built-in ion scenarios, their small-b closed forms, and scenario-level comparisons.

Scenarios
---------
``ca40_e2``   S1/2 -> D5/2, electric quadrupole only.
``ar13_m1``   P1/2 -> P3/2, magnetic dipole only.
``yb172_e3``  S1/2 -> F7/2, electric octupole, no nuclear spin.
``yb171_e3``  the same with nuclear spin I = 1/2; the hyperfine pair (F_i, F_f)
              is a parameter (default F_i = 0, F_f = 3).
``ne5_m1e2``  P1/2 -> D3/2-like J = 1/2 -> 3/2 with M1 and E2 in ratio 1.1.
              The E2 amplitude is negative in this package's multipole phase
              convention; see the README for the sign discussion.

Lengths are in wavelengths.  Defaults: pitch 0.085 rad, waist 9, OAM 0..2,
alignment theta_z in {0, pi/4, pi/2}.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional

import numpy as np

from .amplitudes import Character, Multipole, TransitionSpec, amplitude_profile
from .angular import HalfInt, half
from .beams import BeamFamily, BeamSpec, Geometry, Polarization
from .errors import DomainError

__all__ = [
    "DEFAULT_PITCH",
    "DEFAULT_WAIST",
    "Scenario",
    "builtin_scenarios",
    "registry",
    "get_scenario",
    "scenarios_from_config",
    "small_b_oracle",
    "HyperfineComparison",
    "hyperfine_comparison",
    "hyperfine_scale",
    "MixedDecomposition",
    "mixed_multipole_decomposition",
]

DEFAULT_PITCH = 0.085
DEFAULT_WAIST = 9.0
ALIGNMENTS = (0.0, math.pi / 4, math.pi / 2)


@dataclass(frozen=True)
class Scenario:
    id: str
    description: str
    transition: TransitionSpec
    default_m_i: HalfInt
    default_m_f: HalfInt
    canonical_geometry: tuple = field(default_factory=tuple)
    canonical_beams: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "default_m_i", half(self.default_m_i))
        object.__setattr__(self, "default_m_f", half(self.default_m_f))
        self.transition.index_i(self.default_m_i)
        self.transition.index_f(self.default_m_f)
        if not self.canonical_geometry:
            object.__setattr__(self, "canonical_geometry",
                               tuple(Geometry(theta_z=tz) for tz in ALIGNMENTS))
        if not self.canonical_beams:
            object.__setattr__(self, "canonical_beams", tuple(
                BeamSpec(BeamFamily.BESSEL_GAUSS, DEFAULT_PITCH, oam, DEFAULT_WAIST) for oam in (0, 1, 2)))


def _default_sublevels(t: TransitionSpec) -> tuple[HalfInt, HalfInt]:
    """Highest-weight Delta m = +1 pair: m_i = 1/2 -> 3/2 for half-integer levels, 0 -> 1 otherwise."""
    mi = half(0.5) if t.J_i.twice % 2 else half(0)
    return mi, mi + 1


def _yb171_transition(f_i=0, f_f=3) -> TransitionSpec:
    return TransitionSpec(half("1/2"), half("7/2"), (Multipole(3, Character.ELECTRIC, 1.0),),
                          nuclear_spin=half("1/2"), f_i=half(f_i), f_f=half(f_f))


def _make(id_, description, transition) -> Scenario:
    mi, mf = _default_sublevels(transition)
    return Scenario(id_, description, transition, mi, mf)


def builtin_scenarios() -> list[Scenario]:
    E, M = Character.ELECTRIC, Character.MAGNETIC
    return [
        _make("ca40_e2", "40Ca+ 4S1/2 -> 3D5/2, E2 only",
              TransitionSpec(half("1/2"), half("5/2"), (Multipole(2, E, 1.0),))),
        _make("ar13_m1", "Ar13+ 2P1/2 -> 2P3/2, M1 only",
              TransitionSpec(half("1/2"), half("3/2"), (Multipole(1, M, 1.0),))),
        _make("yb172_e3", "172Yb+ 2S1/2 -> 2F7/2, E3, no nuclear spin",
              TransitionSpec(half("1/2"), half("7/2"), (Multipole(3, E, 1.0),))),
        _make("yb171_e3", "171Yb+ 2S1/2 -> 2F7/2, E3, I=1/2, F 0 -> 3", _yb171_transition()),
        _make("ne5_m1e2", "Ne5+ 2P1/2 -> 2P3/2, mixed M1 + E2 (M1/E2 = 1.1)",
              TransitionSpec(half("1/2"), half("3/2"), (Multipole(1, M, 1.1), Multipole(2, E, -1.0)))),
    ]


_BUILTIN = MappingProxyType({s.id: s for s in builtin_scenarios()})


def registry(config: Optional[configparser.ConfigParser] = None) -> Mapping[str, Scenario]:
    """Read-only mapping of scenario id to Scenario, built-ins plus any from ``config``."""
    if config is None:
        return _BUILTIN
    merged = dict(_BUILTIN)
    for s in scenarios_from_config(config):
        merged[s.id] = s
    return MappingProxyType(merged)


def get_scenario(scenario_id: str, f_i=None, f_f=None,
                 scenarios: Optional[Mapping[str, Scenario]] = None) -> Scenario:
    """Look up a scenario; ``f_i``/``f_f`` pick the hyperfine pair of ``yb171_e3``."""
    table = _BUILTIN if scenarios is None else scenarios
    try:
        s = table[scenario_id]
    except KeyError:
        raise KeyError(f"unknown scenario {scenario_id!r}; known: {', '.join(sorted(table))}") from None
    if f_i is None and f_f is None:
        return s
    if not s.transition.has_hyperfine:
        raise DomainError(f"scenario {scenario_id!r} has no nuclear spin; F levels do not apply")
    t = s.transition
    fi = t.f_i if f_i is None else half(f_i)
    ff = t.f_f if f_f is None else half(f_f)
    from dataclasses import replace
    t2 = replace(t, f_i=fi, f_f=ff)
    mi, mf = _default_sublevels(t2)
    return replace(s, transition=t2, default_m_i=mi, default_m_f=mf,
                   description=f"{s.description.split(', F')[0]}, F {fi} -> {ff}")


def scenarios_from_config(config: configparser.ConfigParser) -> list[Scenario]:
    """Scenarios defined in ``[scenario:<id>]`` sections.

    Keys: ``j_i``, ``j_f``, ``multipoles`` (comma list such as ``E2:1.0, M1:0.2``),
    optional ``nuclear_spin``, ``f_i``, ``f_f``, ``m_i``, ``m_f``, ``description``.
    """
    out = []
    for section in config.sections():
        if not section.startswith("scenario:"):
            continue
        sid = section.split(":", 1)[1].strip()
        sec = config[section]
        try:
            mults = tuple(Multipole.parse(p) for p in sec["multipoles"].split(",") if p.strip())
            nuc = sec.get("nuclear_spin")
            t = TransitionSpec(
                half(sec["j_i"]), half(sec["j_f"]), mults,
                nuclear_spin=half(nuc) if nuc else None,
                f_i=half(sec["f_i"]) if sec.get("f_i") else None,
                f_f=half(sec["f_f"]) if sec.get("f_f") else None,
            )
        except KeyError as exc:
            raise DomainError(f"[{section}] is missing key {exc.args[0]!r}") from None
        mi, mf = _default_sublevels(t)
        if sec.get("m_i"):
            mi = half(sec["m_i"])
        if sec.get("m_f"):
            mf = half(sec["m_f"])
        out.append(Scenario(sid, sec.get("description", sid), t, mi, mf))
    return out


# ---------------------------------------------------------------------------
# closed forms near the vortex centre (proportionalities in theta_z)

def _ca(oam, pol, z, k):
    c, s = math.cos, math.sin
    table = {
        (0, "H"): lambda: 1j * (5 * k * k - 4) * c(2 * z),
        (0, "V"): lambda: 1j * (5 * k * k - 4) * c(z),
        (1, "H"): lambda: 2 * k * (1 + 4 * c(z)) * s(z),
        (1, "V"): lambda: 2 * k * (2 * c(z) - 1) * s(z),
        (2, "H"): lambda: 1j * 3 / math.sqrt(2) * k * k * (c(z) + c(2 * z)),
        (2, "V"): lambda: -1j * 3 / math.sqrt(2) * k * k * (c(z) + c(2 * z)),
    }
    return table.get((oam, pol))


def _ar(oam, pol, z, k):
    c, s = math.cos, math.sin
    table = {
        (0, "H"): lambda: -1j * (1 - k * k / 4),
        (0, "V"): lambda: 1j * (1 - k * k / 4) * c(z),
        (1, "H"): lambda: k * s(z),
        (1, "V"): lambda: k * s(z),
        (2, "H"): lambda: k * k * c(z / 2) ** 2,
        (2, "V"): lambda: k * k * c(z / 2) ** 2,
    }
    return table.get((oam, pol))


def _yb(oam, pol, z, k):
    c, s = math.cos, math.sin
    table = {
        (0, "H"): lambda: 1j * (4 - 11 * k * k) * (c(z) + 15 * c(3 * z)),
        (0, "V"): lambda: -1j * (4 - 11 * k * k) * (3 + 5 * c(2 * z)),
        (1, "H"): lambda: -4 * k * (23 + 20 * c(z) + 45 * c(2 * z)) * s(z),
        (1, "V"): lambda: -4 * k * (13 - 20 * c(z) + 15 * c(2 * z)) * s(z),
        (2, "H"): lambda: 6j * k * k * (21 - 40 * c(z) + 35 * c(2 * z)) * c(z / 2) ** 2,
        (2, "V"): lambda: 1.5j * k * k * (22 + 7 * c(z) + 10 * c(2 * z) + 25 * c(3 * z)),
    }
    return table.get((oam, pol))


def _ne(oam, pol, z, k, m1, e2):
    if oam != 0:
        return None
    c = math.cos
    mixed = e2 * (1 - 2 * c(k))
    if pol == "H":
        return lambda: 1j * (math.sqrt(3) * m1 + mixed * c(2 * z))
    return lambda: 1j * (math.sqrt(3) * m1 + mixed) * c(z)


def small_b_oracle(scenario_id: str, oam: int, pol: str, theta_z: float, theta_k: float,
                   m1: Optional[float] = None, e2: Optional[float] = None) -> Optional[complex]:
    """Closed-form amplitude shape at the vortex centre for the default Delta m = 1 pair.

    Returns ``None`` when no closed form is available for the combination.
    The value is only defined up to a (theta_z independent) constant.  For
    ``ne5_m1e2`` the multipole amplitudes default to the scenario's and can be
    overridden (``m1``, ``e2``) to reach the single-multipole limits.
    """
    pol = pol.upper()
    if pol not in ("H", "V"):
        return None
    z, k = float(theta_z), float(theta_k)
    if scenario_id == "ca40_e2":
        f = _ca(oam, pol, z, k)
    elif scenario_id == "ar13_m1":
        f = _ar(oam, pol, z, k)
    elif scenario_id in ("yb172_e3", "yb171_e3"):
        f = _yb(oam, pol, z, k)
    elif scenario_id == "ne5_m1e2":
        amps = {m.label: m.amplitude for m in _BUILTIN["ne5_m1e2"].transition.multipoles}
        f = _ne(oam, pol, z, k, amps["M1"] if m1 is None else m1, amps["E2"] if e2 is None else e2)
    else:
        f = None
    return None if f is None else complex(f())


# ---------------------------------------------------------------------------
# hyperfine comparison

def _local_minima(y: np.ndarray) -> np.ndarray:
    y = np.asarray(y)
    if y.size < 3:
        return np.array([], dtype=int)
    inner = (y[1:-1] <= y[:-2]) & (y[1:-1] < y[2:])
    return np.nonzero(inner)[0] + 1


@dataclass(frozen=True)
class HyperfineComparison:
    b: np.ndarray
    strength_171: np.ndarray
    strength_172: np.ndarray
    ratio: float            # median of strength_171 / strength_172 over non-zero points
    ratio_spread: float     # max relative deviation of the pointwise ratio from ``ratio``
    minima_171: np.ndarray  # grid indices of local minima
    minima_172: np.ndarray


def hyperfine_scale(f_i=0, f_f=3, m_i=None, m_f=None, m172=None) -> float:
    """Constant amplitude ratio between the hyperfine and spin-less E3 transitions.

    For a single multipole both amplitudes are the same geometric factor times
    one coupling coefficient, so the ratio is independent of beam and geometry.
    """
    from .amplitudes import _coupling
    t171 = _yb171_transition(f_i, f_f)
    t172 = _BUILTIN["yb172_e3"].transition
    d171 = _default_sublevels(t171)
    d172 = _default_sublevels(t172)
    mi, mf = half(m_i) if m_i is not None else d171[0], half(m_f) if m_f is not None else d171[1]
    mi2, mf2 = (half(m172[0]), half(m172[1])) if m172 is not None else d172
    q = half((mf.twice - mi.twice) / 2)
    return abs(_coupling(t171, mi, mf, 3, q) / _coupling(t172, mi2, mf2, 3, half((mf2.twice - mi2.twice) / 2)))


def hyperfine_comparison(beam: BeamSpec, geom: Geometry, pol: Polarization, b,
                         f_i=0, f_f=3, m171=None, m172=None) -> HyperfineComparison:
    """Strength profiles of yb171_e3 (F_i -> F_f) and yb172_e3 on a common b grid."""
    s171 = get_scenario("yb171_e3", f_i=f_i, f_f=f_f)
    s172 = _BUILTIN["yb172_e3"]
    mi1, mf1 = (half(m171[0]), half(m171[1])) if m171 is not None else (s171.default_m_i, s171.default_m_f)
    mi2, mf2 = (half(m172[0]), half(m172[1])) if m172 is not None else (s172.default_m_i, s172.default_m_f)
    if (mf1.twice - mi1.twice) != (mf2.twice - mi2.twice):
        raise DomainError("hyperfine comparison needs equal Delta m in both isotopes")
    b = np.asarray(b, dtype=float)
    a171 = np.abs(amplitude_profile(s171.transition, beam, geom, mi1, mf1, b, pol))
    a172 = np.abs(amplitude_profile(s172.transition, beam, geom, mi2, mf2, b, pol))
    floor = 1e-8 * max(float(np.max(a172)), 1e-300)
    ok = a172 > floor
    if ok.any():
        ratios = a171[ok] / a172[ok]
        ratio = float(np.median(ratios))
        spread = float(np.max(np.abs(ratios / ratio - 1.0))) if ratio else float("inf")
    else:
        ratio, spread = float("nan"), float("nan")
    return HyperfineComparison(b, a171, a172, ratio, spread, _local_minima(a171), _local_minima(a172))


# ---------------------------------------------------------------------------
# mixed multipoles

@dataclass(frozen=True)
class MixedDecomposition:
    b: np.ndarray
    total: np.ndarray        # |M(all multipoles)|^2
    parts: dict              # label -> |M(single multipole)|^2
    cross: np.ndarray        # total - sum(parts)

    @property
    def relative_cross(self) -> np.ndarray:
        denom = sum(self.parts.values())
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(denom > 0, self.cross / denom, 0.0)


def mixed_multipole_decomposition(t: TransitionSpec, beam: BeamSpec, geom: Geometry, m_i, m_f, b,
                                  pol: Polarization) -> MixedDecomposition:
    """Split |M|^2 of a mixed transition into single-multipole parts and the interference term."""
    b = np.asarray(b, dtype=float)
    total = np.abs(amplitude_profile(t, beam, geom, m_i, m_f, b, pol)) ** 2
    parts = {}
    for m in t.multipoles:
        single = t.with_multipoles((m,))
        parts[m.label] = np.abs(amplitude_profile(single, beam, geom, m_i, m_f, b, pol)) ** 2
    cross = total - sum(parts.values())
    return MixedDecomposition(b, total, parts, cross)

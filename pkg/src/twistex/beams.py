"""Beam, polarization and geometry models.

All lengths (impact parameter, waist) are in units of the optical wavelength,
so the wavenumber is ``k = 2*pi``.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .errors import DomainError

__all__ = [
    "WAVENUMBER",
    "BeamFamily",
    "Polarization",
    "BeamSpec",
    "Geometry",
    "bessel_J",
    "total_angular_momentum_projection",
    "decompose_polarization",
]

WAVENUMBER = 2.0 * math.pi


class BeamFamily(enum.Enum):
    BESSEL = "bessel"
    BESSEL_GAUSS = "bessel-gauss"

    @classmethod
    def parse(cls, text: str) -> "BeamFamily":
        key = text.strip().lower().replace("_", "-")
        aliases = {"bessel": cls.BESSEL, "bb": cls.BESSEL, "bessel-gauss": cls.BESSEL_GAUSS,
                   "besselgauss": cls.BESSEL_GAUSS, "bg": cls.BESSEL_GAUSS}
        try:
            return aliases[key]
        except KeyError:
            raise DomainError(f"unknown beam family {text!r}") from None


def _normalize_general(alpha: float, delta: float) -> tuple[float, float, bool]:
    """Map (alpha, delta) into [0, pi] x [0, pi) describing the same state up to a phase."""
    a = math.fmod(alpha, 2.0 * math.pi)
    if a < 0.0:
        a += 2.0 * math.pi
    d = delta
    if a > math.pi:
        # alpha -> 2pi - alpha flips the sign of sin(alpha/2); absorbed by delta -> delta + pi/2
        a = 2.0 * math.pi - a
        d = d + 0.5 * math.pi
    d = math.fmod(d, math.pi)
    if d < 0.0:
        d += math.pi
    changed = not (math.isclose(a, alpha, abs_tol=1e-15) and math.isclose(d, delta, abs_tol=1e-15))
    return a, d, changed


@dataclass(frozen=True)
class Polarization:
    """Either a helicity state (Lambda = +1 or -1) or a general state (alpha, delta).

    The general state is ``e = exp(i delta) (e_- cos(alpha/2) - e_+ sin(alpha/2) exp(-2 i delta))``.
    Helicity +1 is labelled ``L`` and helicity -1 is labelled ``R``.
    """

    kind: str
    helicity: Optional[int] = None
    alpha: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if self.kind == "helicity":
            if self.helicity not in (1, -1):
                raise DomainError(f"helicity must be +1 or -1, got {self.helicity!r}")
        elif self.kind == "general":
            if self.helicity is not None:
                raise DomainError("general polarization takes no helicity")
            a, d = float(self.alpha), float(self.delta)
            if not (math.isfinite(a) and math.isfinite(d)):
                raise DomainError("polarization angles must be finite")
            if not (0.0 <= a <= math.pi and 0.0 <= d <= math.pi):
                na, nd, _ = _normalize_general(a, d)
                warnings.warn(
                    f"polarization angles (alpha={a}, delta={d}) outside [0, pi]; "
                    f"using the equivalent state (alpha={na}, delta={nd})",
                    RuntimeWarning,
                    stacklevel=3,
                )
                a, d = na, nd
            object.__setattr__(self, "alpha", a)
            object.__setattr__(self, "delta", d)
        else:
            raise DomainError(f"unknown polarization kind {self.kind!r}")

    @classmethod
    def circular(cls, helicity: int) -> "Polarization":
        return cls("helicity", helicity=int(helicity))

    @classmethod
    def general(cls, alpha: float, delta: float) -> "Polarization":
        return cls("general", alpha=alpha, delta=delta)

    @classmethod
    def H(cls) -> "Polarization":
        return cls.general(math.pi / 2, 0.0)

    @classmethod
    def V(cls) -> "Polarization":
        return cls.general(math.pi / 2, math.pi / 2)

    @classmethod
    def parse(cls, text: str) -> "Polarization":
        """Parse ``L``, ``R``, ``H``, ``V`` or ``alpha:delta`` (radians)."""
        s = text.strip()
        named = {"L": lambda: cls.circular(1), "R": lambda: cls.circular(-1),
                 "H": cls.H, "V": cls.V}
        if s.upper() in named:
            return named[s.upper()]()
        if ":" in s:
            a, _, d = s.partition(":")
            try:
                return cls.general(float(a), float(d))
            except ValueError:
                pass
        raise DomainError(f"cannot parse polarization {text!r}")

    @property
    def is_helicity(self) -> bool:
        return self.kind == "helicity"

    @property
    def label(self) -> str:
        if self.is_helicity:
            return "L" if self.helicity == 1 else "R"
        if self.alpha == math.pi / 2 and self.delta == 0.0:
            return "H"
        if self.alpha == math.pi / 2 and self.delta == math.pi / 2:
            return "V"
        return f"{self.alpha:.10g}:{self.delta:.10g}"


def decompose_polarization(pol: Polarization) -> tuple[complex, complex]:
    """Weights (c_minus, c_plus) of the helicity -1 and +1 components."""
    if pol.is_helicity:
        return (1.0 + 0j, 0j) if pol.helicity == -1 else (0j, 1.0 + 0j)
    a, d = pol.alpha, pol.delta
    c_minus = complex(np.exp(1j * d) * math.cos(a / 2.0))
    c_plus = complex(-np.exp(-1j * d) * math.sin(a / 2.0))
    return c_minus, c_plus


def total_angular_momentum_projection(pol: Polarization, oam: int) -> int:
    """m_gamma = oam + helicity for a helicity state."""
    if not pol.is_helicity:
        raise DomainError("m_gamma is defined per helicity component only")
    return int(oam) + pol.helicity


@dataclass(frozen=True)
class BeamSpec:
    """Bessel or Bessel-Gauss beam.

    ``pitch`` is the cone half-angle theta_k, ``oam`` the orbital quantum
    number, ``waist`` the Gaussian width w0 in wavelengths.
    """

    family: BeamFamily = BeamFamily.BESSEL_GAUSS
    pitch: float = 0.085
    oam: int = 0
    waist: float = 9.0
    polarization: Polarization = field(default_factory=lambda: Polarization.circular(1))

    def __post_init__(self):
        if isinstance(self.family, str):
            object.__setattr__(self, "family", BeamFamily.parse(self.family))
        p = float(self.pitch)
        if not (0.0 <= p < math.pi / 2):
            raise DomainError(f"pitch angle must lie in [0, pi/2), got {p}")
        object.__setattr__(self, "pitch", p)
        if int(self.oam) != self.oam:
            raise DomainError(f"OAM must be an integer, got {self.oam}")
        object.__setattr__(self, "oam", int(self.oam))
        w = float(self.waist)
        if self.family is BeamFamily.BESSEL_GAUSS and not (w > 0.0 and math.isfinite(w)):
            raise DomainError(f"waist must be positive and finite, got {w}")
        object.__setattr__(self, "waist", w)

    @property
    def k(self) -> float:
        return WAVENUMBER

    @property
    def kappa(self) -> float:
        return WAVENUMBER * math.sin(self.pitch)

    @property
    def kz(self) -> float:
        return WAVENUMBER * math.cos(self.pitch)

    def envelope(self, b):
        """Gaussian apodization exp(-b^2/w0^2), or 1 for a pure Bessel beam."""
        b = np.asarray(b, dtype=float)
        if self.family is BeamFamily.BESSEL:
            return np.ones_like(b)
        return np.exp(-(b * b) / (self.waist * self.waist))

    def replace(self, **changes) -> "BeamSpec":
        from dataclasses import replace
        return replace(self, **changes)


@dataclass(frozen=True)
class Geometry:
    """Impact parameter (b, phi_b) and quantization-axis direction (theta_z, phi_z)."""

    b: float = 0.0
    phi_b: float = 0.0
    theta_z: float = 0.0
    phi_z: float = 0.0

    def __post_init__(self):
        vals = [float(v) for v in (self.b, self.phi_b, self.theta_z, self.phi_z)]
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("geometry values must be finite")
        if vals[0] < 0.0:
            raise DomainError(f"impact parameter must be non-negative, got {vals[0]}")
        for name, v in zip(("b", "phi_b", "theta_z", "phi_z"), vals):
            object.__setattr__(self, name, v)

    def replace(self, **changes) -> "Geometry":
        from dataclasses import replace
        return replace(self, **changes)


def bessel_J(n: int, x):
    """Cylindrical Bessel function J_n(x) of integer order for x >= 0 (scalar or array)."""
    if int(n) != n:
        raise DomainError(f"Bessel order must be an integer, got {n}")
    n = int(n)
    if np.ndim(x) == 0:
        xv = float(x)
        if xv < 0.0:
            raise DomainError("Bessel argument must be non-negative")
        return kernels.jn(n, xv)
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0.0):
        raise DomainError("Bessel argument must be non-negative")
    vals = kernels.bessel_table(abs(n), xs.ravel())[:, abs(n)]
    if n < 0 and n % 2:
        vals = -vals
    return vals.reshape(xs.shape)

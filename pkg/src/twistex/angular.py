"""Half-integer angular-momentum algebra.

Conventions
-----------
* Condon-Shortley phase convention for Clebsch-Gordan coefficients.
* Rotation matrices follow ``D^j_{m,m'}(psi, theta, phi) =
  exp(-i m psi) d^j_{m,m'}(theta) exp(-i m' phi)`` with the standard
  (Wigner / Edmonds) small-d matrix, e.g. ``d^1_{1,0}(theta) = -sin(theta)/sqrt(2)``.

Clebsch-Gordan and 6j symbols are evaluated with the Racah sums in exact
rational arithmetic.  The square of each coefficient is an exact rational, so
the only rounding happens in the final ``sqrt`` conversion to float.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Integral, Real
from typing import Union

import numpy as np

from .errors import DomainError

__all__ = [
    "HalfInt",
    "half",
    "m_values",
    "triangle",
    "clebsch_gordan",
    "wigner_6j",
    "wigner_small_d",
    "small_d_matrix",
    "wigner_D",
]


@dataclass(frozen=True, order=True)
class HalfInt:
    """An integer or half-integer stored exactly as twice its value."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, Integral):
            raise TypeError("HalfInt.twice must be an integer")
        object.__setattr__(self, "twice", int(self.twice))

    @property
    def twice_value(self) -> int:
        return self.twice

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __add__(self, other):
        return HalfInt(self.twice + half(other).twice)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice - half(other).twice)

    def __rsub__(self, other):
        return HalfInt(half(other).twice - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __float__(self):
        return self.twice / 2.0

    def __int__(self):
        if not self.is_integer:
            raise DomainError(f"{self} is not an integer")
        return self.twice // 2

    def __index__(self):
        return int(self)

    def to_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __str__(self):
        return str(self.twice // 2) if self.is_integer else f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({self})"


HalfIntLike = Union[HalfInt, int, float, Fraction, str]


def half(x: HalfIntLike) -> HalfInt:
    """Coerce ``x`` to a :class:`HalfInt`.

    Accepts HalfInt, int, float (a multiple of 1/2), Fraction, or strings such
    as ``"5/2"``, ``"-1/2"``, ``"3"`` and ``"1.5"``.
    """
    if isinstance(x, HalfInt):
        return x
    if isinstance(x, str):
        s = x.strip()
        try:
            value = Fraction(s)
        except ValueError as exc:
            raise DomainError(f"cannot read {x!r} as a half-integer") from exc
        return half(value)
    if isinstance(x, Integral):
        return HalfInt(2 * int(x))
    if isinstance(x, Fraction):
        t = 2 * x
        if t.denominator != 1:
            raise DomainError(f"{x} is not a multiple of 1/2")
        return HalfInt(int(t))
    if isinstance(x, Real):
        t = 2.0 * float(x)
        r = round(t)
        if not math.isfinite(t) or abs(t - r) > 1e-9:
            raise DomainError(f"{x!r} is not a multiple of 1/2")
        return HalfInt(int(r))
    raise TypeError(f"cannot convert {type(x).__name__} to HalfInt")


def m_values(j: HalfIntLike) -> list[HalfInt]:
    """Projections -j, -j+1, ..., j in ascending order."""
    j = half(j)
    if j.twice < 0:
        raise DomainError(f"negative angular momentum {j}")
    return [HalfInt(t) for t in range(-j.twice, j.twice + 1, 2)]


def triangle(j1: HalfIntLike, j2: HalfIntLike, j3: HalfIntLike) -> bool:
    """Triangle rule: |j1-j2| <= j3 <= j1+j2 and j1+j2+j3 integer."""
    a, b, c = half(j1).twice, half(j2).twice, half(j3).twice
    if min(a, b, c) < 0:
        return False
    return (a + b + c) % 2 == 0 and abs(a - b) <= c <= a + b


def _check_jm(j: HalfInt, m: HalfInt, name: str) -> None:
    if j.twice < 0:
        raise DomainError(f"{name}: negative angular momentum {j}")
    if (j.twice - m.twice) % 2:
        raise DomainError(f"{name}: projection {m} inconsistent with j={j}")
    if abs(m.twice) > j.twice:
        raise DomainError(f"{name}: |m|={abs(m)} exceeds j={j}")


_fact = math.factorial


def _delta_sq(a2: int, b2: int, c2: int) -> Fraction:
    """Triangle coefficient Delta(abc) as an exact rational (args are twice-values)."""
    return Fraction(
        _fact((a2 + b2 - c2) // 2) * _fact((a2 - b2 + c2) // 2) * _fact((-a2 + b2 + c2) // 2),
        _fact((a2 + b2 + c2) // 2 + 1),
    )


def _signed_sqrt(s: Fraction, p: Fraction) -> float:
    """Return s*sqrt(p) with s, p exact rationals and p >= 0."""
    if s == 0 or p == 0:
        return 0.0
    sq = s * s * p
    val = math.sqrt(sq.numerator) / math.sqrt(sq.denominator)
    return val if s > 0 else -val


@lru_cache(maxsize=None)
def _cg_twice(j1: int, m1: int, j2: int, m2: int, J: int, M: int) -> float:
    if M != m1 + m2:
        return 0.0
    if (j1 + j2 + J) % 2 or not abs(j1 - j2) <= J <= j1 + j2:
        return 0.0
    prefactor = (J + 1) * _delta_sq(j1, j2, J) * (
        _fact((j1 + m1) // 2) * _fact((j1 - m1) // 2) * _fact((j2 + m2) // 2)
        * _fact((j2 - m2) // 2) * _fact((J + M) // 2) * _fact((J - M) // 2)
    )
    # Racah sum, all indices as plain integers
    a = (j1 + j2 - J) // 2
    b = (j1 - m1) // 2
    c = (j2 + m2) // 2
    d = (J - j2 + m1) // 2
    e = (J - j1 - m2) // 2
    kmin = max(0, -d, -e)
    kmax = min(a, b, c)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = _fact(k) * _fact(a - k) * _fact(b - k) * _fact(c - k) * _fact(d + k) * _fact(e + k)
        total += Fraction((-1) ** k, den)
    return _signed_sqrt(total, prefactor)


def clebsch_gordan(j1: HalfIntLike, m1: HalfIntLike, j2: HalfIntLike, m2: HalfIntLike,
                   J: HalfIntLike, M: HalfIntLike) -> float:
    """Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> (Condon-Shortley).

    Returns exactly 0.0 when ``M != m1 + m2`` or the triangle rule fails.
    Raises :class:`DomainError` for projections of the wrong parity or out of range.
    """
    j1, m1, j2, m2, J, M = (half(v) for v in (j1, m1, j2, m2, J, M))
    _check_jm(j1, m1, "j1,m1")
    _check_jm(j2, m2, "j2,m2")
    _check_jm(J, M, "J,M")
    return _cg_twice(j1.twice, m1.twice, j2.twice, m2.twice, J.twice, M.twice)


@lru_cache(maxsize=None)
def _sixj_twice(a: int, b: int, c: int, d: int, e: int, f: int) -> float:
    triads = ((a, b, c), (a, e, f), (d, b, f), (d, e, c))
    for x, y, z in triads:
        if not abs(x - y) <= z <= x + y:
            return 0.0
    prefactor = Fraction(1)
    for x, y, z in triads:
        prefactor *= _delta_sq(x, y, z)
    s1, s2, s3, s4 = ((x + y + z) // 2 for x, y, z in triads)
    p1 = (a + b + d + e) // 2
    p2 = (b + c + e + f) // 2
    p3 = (c + a + f + d) // 2
    total = Fraction(0)
    for t in range(max(s1, s2, s3, s4), min(p1, p2, p3) + 1):
        den = (_fact(t - s1) * _fact(t - s2) * _fact(t - s3) * _fact(t - s4)
               * _fact(p1 - t) * _fact(p2 - t) * _fact(p3 - t))
        total += Fraction((-1) ** t * _fact(t + 1), den)
    return _signed_sqrt(total, prefactor)


def wigner_6j(j1: HalfIntLike, j2: HalfIntLike, j3: HalfIntLike,
              j4: HalfIntLike, j5: HalfIntLike, j6: HalfIntLike) -> float:
    """Wigner 6j symbol {j1 j2 j3; j4 j5 j6}.

    The triads are (j1 j2 j3), (j1 j5 j6), (j4 j2 j6) and (j4 j5 j3).  A triad
    whose sum is not an integer is a parity inconsistency and raises
    :class:`DomainError`; a triad that violates the triangle inequality gives 0.
    """
    js = [half(v) for v in (j1, j2, j3, j4, j5, j6)]
    if any(j.twice < 0 for j in js):
        raise DomainError("negative angular momentum in 6j symbol")
    a, b, c, d, e, f = (j.twice for j in js)
    for x, y, z in ((a, b, c), (a, e, f), (d, b, f), (d, e, c)):
        if (x + y + z) % 2:
            raise DomainError(f"6j triad ({x}/2, {y}/2, {z}/2) has a non-integer sum")
    return _sixj_twice(a, b, c, d, e, f)


@lru_cache(maxsize=None)
def _d_terms(j2: int) -> tuple:
    """Explicit-sum terms of d^j: tuples (row, col, coefficient, cos power, sin power).

    Rows and columns index m and m' in ascending order.
    """
    terms = []
    jm = [t for t in range(-j2, j2 + 1, 2)]
    for r, m in enumerate(jm):
        for c, mp in enumerate(jm):
            # d^j_{m,mp}(theta) = sqrt((j+m)!(j-m)!(j+mp)!(j-mp)!)
            #   * sum_k (-1)^(k+m-mp) cos^(2j-2k+mp-m) sin^(2k+m-mp) / (k!(j+mp-k)!(j-m-k)!(k+m-mp)!)
            jpm, jmm = (j2 + m) // 2, (j2 - m) // 2
            jpmp, jmmp = (j2 + mp) // 2, (j2 - mp) // 2
            norm = math.sqrt(_fact(jpm) * _fact(jmm) * _fact(jpmp) * _fact(jmmp))
            dmm = (m - mp) // 2
            for k in range(max(0, -dmm), min(jpmp, jmm) + 1):
                den = _fact(k) * _fact(jpmp - k) * _fact(jmm - k) * _fact(k + dmm)
                coef = (-1) ** (k + dmm) * norm / den
                terms.append((r, c, coef, j2 - 2 * k - dmm, 2 * k + dmm))
    return tuple(terms)


def small_d_matrix(j: HalfIntLike, theta: float) -> np.ndarray:
    """Full matrix d^j(theta) with rows m and columns m' ascending from -j to j."""
    j = half(j)
    if j.twice < 0:
        raise DomainError(f"negative angular momentum {j}")
    n = j.twice + 1
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    out = np.zeros((n, n))
    for r, col, coef, pc, ps in _d_terms(j.twice):
        out[r, col] += coef * c ** pc * s ** ps
    return out


def wigner_small_d(j: HalfIntLike, m: HalfIntLike, mp: HalfIntLike, theta: float) -> float:
    """Wigner small-d element d^j_{m,mp}(theta)."""
    j, m, mp = half(j), half(m), half(mp)
    _check_jm(j, m, "j,m")
    _check_jm(j, mp, "j,mp")
    r = (m.twice + j.twice) // 2
    col = (mp.twice + j.twice) // 2
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    val = 0.0
    for rr, cc, coef, pc, ps in _d_terms(j.twice):
        if rr == r and cc == col:
            val += coef * c ** pc * s ** ps
    return val


def wigner_D(j: HalfIntLike, m: HalfIntLike, mp: HalfIntLike,
             psi: float, theta: float, phi: float) -> complex:
    """Wigner D element exp(-i m psi) d^j_{m,mp}(theta) exp(-i mp phi)."""
    m, mp = half(m), half(mp)
    d = wigner_small_d(j, m, mp, theta)
    return complex(np.exp(-1j * (float(m) * psi + float(mp) * phi)) * d)

"""Pure-Python Bessel kernels (fallback backend).

Integer-order cylindrical Bessel functions J_n(x) for x >= 0:

* ascending power series for ``x < SERIES_LIMIT``;
* Miller backward recurrence, normalised with ``J_0 + 2 sum_k J_2k = 1``,
  for larger arguments.

The compiled backend in ``_bessel_c.pyx`` implements the same algorithm
line-for-line; the two are cross-checked in the test-suite.
"""
from __future__ import annotations

import math

import numpy as np

# Below this argument the series loses at most ~1e-14 to cancellation.
SERIES_LIMIT = 8.0
_RESCALE = 1e200


def _series(nmax: int, x: float, out: list) -> None:
    h = 0.5 * x
    h2 = h * h
    lead = 1.0
    for n in range(nmax + 1):
        if n > 0:
            lead *= h / n
        term = lead
        total = term
        k = 0
        while True:
            k += 1
            term *= -h2 / (k * (n + k))
            total += term
            if abs(term) <= 1e-17 * abs(total):
                break
        out[n] = total


def _miller(nmax: int, x: float, out: list) -> None:
    top = max(nmax, int(x))
    start = top + 20 + int(math.sqrt(40.0 * top))
    start += start % 2  # even starting order keeps the normalisation sum simple
    jp1 = 0.0
    jk = 1e-30
    norm = 0.0
    for k in range(start, 0, -1):
        if k <= nmax:
            out[k] = jk
        if k % 2 == 0:
            norm += 2.0 * jk
        jm1 = (2.0 * k / x) * jk - jp1
        jp1 = jk
        jk = jm1
        if abs(jk) > _RESCALE:
            jk /= _RESCALE
            jp1 /= _RESCALE
            norm /= _RESCALE
            for i in range(k, nmax + 1):
                out[i] /= _RESCALE
    # jk now holds the unnormalised J_0
    norm += jk
    out[0] = jk
    scale = 1.0 / norm
    for i in range(nmax + 1):
        out[i] *= scale


def jn_all(nmax: int, x: float) -> list:
    """[J_0(x), ..., J_nmax(x)] for x >= 0."""
    out = [0.0] * (nmax + 1)
    if x == 0.0:
        out[0] = 1.0
    elif x < SERIES_LIMIT:
        _series(nmax, x, out)
    else:
        _miller(nmax, x, out)
    return out


def jn(n: int, x: float) -> float:
    """J_n(x) for integer n (negative orders by reflection) and x >= 0."""
    n = int(n)
    x = float(x)
    if x < 0.0:
        raise ValueError("x must be non-negative")
    a = abs(n)
    v = jn_all(a, x)[a]
    return -v if (n < 0 and a % 2) else v


def bessel_table(nmax: int, x) -> np.ndarray:
    """Array of shape (len(x), nmax+1) with J_0..J_nmax at each x."""
    xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    out = np.empty((xs.size, int(nmax) + 1))
    for i, xi in enumerate(xs):
        if xi < 0.0:
            raise ValueError("x must be non-negative")
        out[i, :] = jn_all(int(nmax), float(xi))
    return out


def channel_sum(orders, coeffs, x) -> np.ndarray:
    """sum_c coeffs[c] * J_{orders[c]}(x_k) for every grid point x_k."""
    orders = np.ascontiguousarray(orders, dtype=np.int64).ravel()
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128).ravel()
    xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    if orders.size != coeffs.size:
        raise ValueError("orders and coeffs must have the same length")
    out = np.zeros(xs.size, dtype=np.complex128)
    if orders.size == 0:
        return out
    nmax = int(np.max(np.abs(orders)))
    ords = [int(o) for o in orders]
    cs = [complex(c) for c in coeffs]
    for i, xi in enumerate(xs):
        if xi < 0.0:
            raise ValueError("x must be non-negative")
        table = jn_all(nmax, float(xi))
        acc = 0j
        for o, c in zip(ords, cs):
            a = -o if o < 0 else o
            v = table[a]
            if o < 0 and a % 2:
                v = -v
            acc += c * v
        out[i] = acc
    return out

"""Backend selection for the Bessel kernels.

The compiled extension is used when it was built; otherwise the pure-Python
implementation is used.  Setting the environment variable
``TWISTEX_PURE_PYTHON=1`` forces the fallback.
"""
from __future__ import annotations

import importlib
import os
from types import ModuleType

_BACKENDS = {"cython": "twistex._bessel_c", "python": "twistex._bessel_py"}


def load_backend(name: str) -> ModuleType:
    """Import a backend module by name ('cython' or 'python')."""
    try:
        return importlib.import_module(_BACKENDS[name])
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; choose from {sorted(_BACKENDS)}") from None


def available_backends() -> list[str]:
    names = []
    for name in _BACKENDS:
        try:
            load_backend(name)
        except ImportError:
            continue
        names.append(name)
    return names


def _select() -> tuple[str, ModuleType]:
    if os.environ.get("TWISTEX_PURE_PYTHON", "").strip() not in ("", "0"):
        return "python", load_backend("python")
    try:
        return "cython", load_backend("cython")
    except ImportError:
        return "python", load_backend("python")


BACKEND, _impl = _select()

jn = _impl.jn
jn_all = _impl.jn_all
bessel_table = _impl.bessel_table
channel_sum = _impl.channel_sum

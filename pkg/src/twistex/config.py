"""INI configuration files.

Layout::

    [defaults]          ; applies to every subcommand
    scenario = ca40_e2
    theta-z = pi/4

    [profile]           ; per-subcommand overrides (profile, polmap, alignscan, fit)
    b-max = 15

    [scenario:my_ion]   ; user-defined scenarios
    j_i = 1/2
    j_f = 5/2
    multipoles = E2:1.0, M3:0.01

Keys use the CLI flag names with or without the leading dashes; ``-`` and
``_`` are interchangeable.  Command-line flags override the file.
"""
from __future__ import annotations

import configparser
import math
import re
from typing import Optional

__all__ = ["load_config", "lookup", "parse_angle"]

_ANGLE = re.compile(r"^\s*([-+]?)\s*(\d*\.?\d*(?:[eE][-+]?\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+))?\s*$")


def parse_angle(text) -> float:
    """Float, or a multiple of pi such as ``pi/4``, ``-pi/2``, ``0.25pi``, ``3*pi/4``."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip()
    try:
        return float(s)
    except ValueError:
        pass
    m = _ANGLE.match(s.lower())
    if not m:
        raise ValueError(f"cannot read angle {text!r}")
    sign = -1.0 if m.group(1) == "-" else 1.0
    coef = float(m.group(2)) if m.group(2) else 1.0
    div = float(m.group(3)) if m.group(3) else 1.0
    return sign * coef * math.pi / div


def load_config(path) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = lambda k: k.strip().lstrip("-").replace("_", "-").lower()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    # scenario sections keep underscore keys for readability
    for section in cp.sections():
        if section.startswith("scenario:"):
            items = dict(cp[section])
            cp.remove_section(section)
            cp.add_section(section)
            for k, v in items.items():
                cp[section][k.replace("-", "_")] = v
    return cp


def lookup(cp: Optional[configparser.ConfigParser], command: str, key: str) -> Optional[str]:
    """Value for ``key`` from the command section, else [defaults], else None."""
    if cp is None:
        return None
    key = key.lstrip("-").replace("_", "-").lower()
    for section in (command, "defaults"):
        if cp.has_section(section) and cp.has_option(section, key):
            return cp.get(section, key)
    return None

"""Scans over impact parameter, polarization and alignment, plus CSV I/O.

Signed impact parameters: a negative ``b`` is the point at distance |b| on
the far side of the vortex (azimuth phi_b + pi), so a scan line through the
beam centre is two half-scans concatenated.
"""
from __future__ import annotations

import csv
import io
import math
import os
import sys
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numpy as np

from .amplitudes import TransitionSpec, channel_expansion
from .angular import HalfInt, half
from .beams import BeamFamily, BeamSpec, Polarization
from .errors import DomainError
from .scenarios import DEFAULT_PITCH, DEFAULT_WAIST, Scenario, get_scenario

__all__ = [
    "ScanError",
    "ScanRequest",
    "Table",
    "Grid",
    "b_grid",
    "run_profile",
    "run_polmap",
    "run_alignscan",
    "emit_csv",
    "emit_grid",
    "read_csv",
    "read_grid",
    "ascii_heatmap",
    "format_float",
]


class ScanError(ValueError):
    """Invalid scan request (bad grid, unknown scenario, bad sublevel selection)."""


def format_float(x: float) -> str:
    """Shortest-safe text for a double: 17 significant digits."""
    return "%.17g" % float(x)


@dataclass
class ScanRequest:
    scenario_id: str = "ca40_e2"
    m_i: Union[None, str, HalfInt] = None   # None: scenario default; "all": every pair
    m_f: Union[None, str, HalfInt] = None
    oam: int = 0
    pitch: float = DEFAULT_PITCH
    waist: float = DEFAULT_WAIST
    family: BeamFamily = BeamFamily.BESSEL_GAUSS
    theta_z: float = 0.0
    phi_z: float = 0.0
    phi_b: float = 0.0
    polarizations: tuple = field(default_factory=lambda: (Polarization.H(),))
    sweep: bool = False
    sweep_delta: float = 0.0
    alpha_steps: int = 91
    b_min: float = 0.0
    b_max: float = 20.0
    b_steps: int = 201
    signed: bool = False
    normalize: str = "raw"
    f_i: Optional[HalfInt] = None
    f_f: Optional[HalfInt] = None
    b_fixed: float = 0.0
    theta_steps: int = 91
    scenario: Optional[Scenario] = None   # overrides scenario_id lookup (custom scenarios)

    def __post_init__(self):
        if self.b_steps < 2:
            raise ScanError(f"b grid needs at least 2 steps, got {self.b_steps}")
        if self.b_min < 0 or self.b_max < 0:
            raise ScanError("b range must be non-negative (use signed scans for the far side)")
        if self.b_max < self.b_min:
            raise ScanError(f"b_max ({self.b_max}) is below b_min ({self.b_min})")
        if self.alpha_steps < 1 or self.theta_steps < 2:
            raise ScanError("alpha_steps must be >= 1 and theta_steps >= 2")
        if self.normalize not in ("raw", "peak"):
            raise ScanError(f"normalize must be 'raw' or 'peak', got {self.normalize!r}")
        if not self.polarizations and not self.sweep:
            raise ScanError("no polarization requested")
        if isinstance(self.family, str):
            self.family = BeamFamily.parse(self.family)

    def resolve_scenario(self) -> Scenario:
        if self.scenario is not None:
            return self.scenario
        try:
            return get_scenario(self.scenario_id, f_i=self.f_i, f_f=self.f_f)
        except KeyError as exc:
            raise ScanError(exc.args[0]) from None

    def beam(self) -> BeamSpec:
        return BeamSpec(self.family, self.pitch, self.oam, self.waist)

    def pairs(self, sc: Scenario) -> list[tuple[HalfInt, HalfInt]]:
        t = sc.transition
        want_all_i = isinstance(self.m_i, str) and self.m_i.strip().lower() == "all"
        want_all_f = isinstance(self.m_f, str) and self.m_f.strip().lower() == "all"
        mis = t.m_i_values if want_all_i else [sc.default_m_i if self.m_i is None else half(self.m_i)]
        mfs = t.m_f_values if want_all_f else [sc.default_m_f if self.m_f is None else half(self.m_f)]
        for mi in mis:
            t.index_i(mi)
        for mf in mfs:
            t.index_f(mf)
        return [(mi, mf) for mi in mis for mf in mfs]


@dataclass
class Table:
    columns: list
    data: np.ndarray  # shape (rows, len(columns))

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]


@dataclass
class Grid:
    row_name: str
    col_name: str
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray  # shape (len(rows), len(cols))


def b_grid(req: ScanRequest) -> np.ndarray:
    g = np.linspace(req.b_min, req.b_max, req.b_steps)
    if not req.signed:
        return g
    far = -g[::-1]
    if g[0] == 0.0:
        far = far[:-1]
    return np.concatenate([far, g])


def _peak_normalize(values: np.ndarray) -> np.ndarray:
    peak = float(np.max(values)) if values.size else 0.0
    if peak == 0.0:
        if values.size:
            warnings.warn("all strengths are zero; peak normalization skipped", RuntimeWarning, stacklevel=3)
        return values
    out = values / peak
    out[values == peak] = 1.0
    return out


def _column_name(pol: Polarization, pair, many_pairs: bool) -> str:
    name = f"strength_{pol.label}"
    if many_pairs:
        name += f"_mi={pair[0]}_mf={pair[1]}"
    return name


def _pol_weights(pol: Polarization) -> tuple[complex, complex]:
    from .beams import decompose_polarization
    return decompose_polarization(pol)


def _helicity_profiles(t: TransitionSpec, beam: BeamSpec, mi, mf, theta_z, phi_z, phi_b, b):
    """Amplitude profiles for helicity -1 and +1; any polarization is a linear combination."""
    out = []
    for lam in (-1, 1):
        exp = channel_expansion(t, beam, mi, mf, theta_z, phi_z, Polarization.circular(lam))
        out.append(exp.evaluate(b, phi_b))
    return out


def run_profile(req: ScanRequest) -> Table:
    """Strength versus impact parameter for each requested (pair, polarization)."""
    sc = req.resolve_scenario()
    pairs = req.pairs(sc)
    b = b_grid(req)
    beam = req.beam()
    cols, data = ["b_lambda"], [b]
    for pair in pairs:
        a_minus, a_plus = _helicity_profiles(sc.transition, beam, *pair, req.theta_z, req.phi_z, req.phi_b, b)
        for pol in req.polarizations:
            cm, cp = _pol_weights(pol)
            cols.append(_column_name(pol, pair, len(pairs) > 1))
            data.append(np.abs(cm * a_minus + cp * a_plus))
    values = np.column_stack(data)
    if req.normalize == "peak":
        values[:, 1:] = _peak_normalize(values[:, 1:])
    return Table(cols, values)


def run_polmap(req: ScanRequest) -> Grid:
    """Strength over (alpha, signed b) at fixed delta; helicity input gives one row.

    Columns always cover the signed line -b_max..b_max through the vortex.
    """
    sc = req.resolve_scenario()
    pairs = req.pairs(sc)
    if len(pairs) != 1:
        raise ScanError("polmap needs a single (m_i, m_f) pair")
    b = b_grid(replace(req, signed=True))
    a_minus, a_plus = _helicity_profiles(sc.transition, req.beam(), *pairs[0], req.theta_z, req.phi_z,
                                         req.phi_b, b)
    if req.sweep:
        alphas = np.linspace(0.0, math.pi, req.alpha_steps)
        pols = [Polarization.general(a, req.sweep_delta) for a in alphas]
    else:
        if len(req.polarizations) != 1:
            raise ScanError("polmap without a sweep takes exactly one polarization")
        pol = req.polarizations[0]
        pols = [pol]
        alphas = np.array([pol.alpha if not pol.is_helicity else (0.0 if pol.helicity == -1 else math.pi)])
    rows = []
    for pol in pols:
        cm, cp = _pol_weights(pol)
        rows.append(np.abs(cm * a_minus + cp * a_plus))
    values = np.array(rows)
    if req.normalize == "peak":
        values = _peak_normalize(values)
    return Grid("alpha_rad", "b_lambda", alphas, b, values)


def run_alignscan(req: ScanRequest) -> Table:
    """Strength versus quantization-axis polar angle theta_z in [0, pi] at fixed b."""
    sc = req.resolve_scenario()
    pairs = req.pairs(sc)
    beam = req.beam()
    thetas = np.linspace(0.0, math.pi, req.theta_steps)
    bpt = np.array([req.b_fixed])
    cols, data = ["theta_z_rad"], [thetas]
    for pair in pairs:
        per_pol = {i: np.empty(thetas.size) for i in range(len(req.polarizations))}
        for k, tz in enumerate(thetas):
            a_minus, a_plus = _helicity_profiles(sc.transition, beam, *pair, float(tz), req.phi_z, req.phi_b, bpt)
            for i, pol in enumerate(req.polarizations):
                cm, cp = _pol_weights(pol)
                per_pol[i][k] = abs(cm * a_minus[0] + cp * a_plus[0])
        for i, pol in enumerate(req.polarizations):
            cols.append(_column_name(pol, pair, len(pairs) > 1))
            data.append(per_pol[i])
    values = np.column_stack(data)
    if req.normalize == "peak":
        values[:, 1:] = _peak_normalize(values[:, 1:])
    return Table(cols, values)


# ---------------------------------------------------------------------------
# CSV

def _open_out(path):
    if path is None or str(path) == "-":
        return sys.stdout, False
    try:
        return open(path, "w", encoding="utf-8", newline=""), True
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_csv(table: Table, path=None) -> None:
    """Write a table with a header row; UTF-8, LF line endings, 17 significant digits."""
    fh, close = _open_out(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(table.columns)
        for row in np.asarray(table.data).reshape(-1, len(table.columns)):
            w.writerow([format_float(v) for v in row])
    finally:
        if close:
            fh.close()


def emit_grid(grid: Grid, path=None) -> None:
    """Write a grid as a CSV matrix: first row are column labels, first column row labels."""
    fh, close = _open_out(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"{grid.row_name}\\{grid.col_name}"] + [format_float(c) for c in grid.cols])
        for label, row in zip(grid.rows, grid.values):
            w.writerow([format_float(label)] + [format_float(v) for v in row])
    finally:
        if close:
            fh.close()


def _read_rows(path) -> list:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc


def read_csv(path) -> Table:
    rows = _read_rows(path)
    if not rows:
        raise ScanError(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    try:
        data = np.array([[float(v) for v in r] for r in body], dtype=float).reshape(len(body), len(header))
    except ValueError as exc:
        raise ScanError(f"{path}: non-numeric or ragged data ({exc})") from None
    return Table([h.strip() for h in header], data)


def read_grid(path) -> Grid:
    rows = _read_rows(path)
    corner = rows[0][0]
    row_name, _, col_name = corner.partition("\\")
    cols = np.array([float(v) for v in rows[0][1:]])
    labels = np.array([float(r[0]) for r in rows[1:]])
    values = np.array([[float(v) for v in r[1:]] for r in rows[1:]]).reshape(len(labels), len(cols))
    return Grid(row_name, col_name, labels, cols, values)


def ascii_heatmap(grid: Grid, width: int = 72, height: int = 24) -> str:
    """Coarse text rendering of a grid (rows top to bottom, columns left to right)."""
    ramp = " .:-=+*#%@"
    v = np.asarray(grid.values, dtype=float)
    if v.size == 0:
        return ""
    ri = np.linspace(0, v.shape[0] - 1, min(height, v.shape[0])).round().astype(int)
    ci = np.linspace(0, v.shape[1] - 1, min(width, v.shape[1])).round().astype(int)
    sub = v[np.ix_(ri, ci)]
    peak = float(np.max(sub))
    scaled = sub / peak if peak > 0 else sub
    lines = []
    for k, row in zip(ri, scaled):
        chars = "".join(ramp[min(int(x * (len(ramp) - 1) + 0.5), len(ramp) - 1)] for x in row)
        lines.append(f"{grid.rows[k]:8.4f} |{chars}|")
    lines.append(f"{'':8} {grid.col_name}: {grid.cols[0]:.4g} .. {grid.cols[-1]:.4g}")
    return "\n".join(lines)

"""Least-squares recovery of beam parameters from strength profiles.

The forward model of one profile is ``scale * |amplitude(b)|`` for a given
scenario, sublevel pair, OAM, alignment and polarization (fixed or per point
through ``alpha``).  Free parameters are drawn from ``theta_k``, ``phi_b``,
``w0`` and ``scale``.  Each free parameter is either shared by all profiles
or fitted per profile (named ``name[k]``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import least_squares

from .amplitudes import TransitionSpec, channel_expansion
from .beams import BeamFamily, BeamSpec, Polarization, decompose_polarization
from .errors import DomainError
from .scenarios import DEFAULT_PITCH, DEFAULT_WAIST, get_scenario

__all__ = ["FIT_PARAMETERS", "ProfileData", "FitRequest", "FitResult", "run_fit", "model_strength"]

FIT_PARAMETERS = ("theta_k", "phi_b", "w0", "scale")
_DEFAULT_BOUNDS = {
    "theta_k": (0.0, math.pi / 2),
    "phi_b": (-math.inf, math.inf),
    "w0": (1e-6, math.inf),
    "scale": (0.0, math.inf),
}


@dataclass
class ProfileData:
    """One measured profile and the fixed settings of its forward model.

    ``alpha`` (optional, same length as ``b``) turns the profile into
    polarization-map data at fixed ``delta``; otherwise ``pol`` is used.
    ``theta_k``, ``phi_b``, ``w0`` and ``scale`` are the values used when the
    parameter is not free, and the default starting point when it is.
    """

    b: np.ndarray
    strength: np.ndarray
    scenario_id: str = "ca40_e2"
    m_i: object = None
    m_f: object = None
    oam: int = 0
    pol: Polarization = field(default_factory=Polarization.H)
    alpha: Optional[np.ndarray] = None
    delta: float = 0.0
    theta_z: float = 0.0
    phi_z: float = 0.0
    family: BeamFamily = BeamFamily.BESSEL_GAUSS
    theta_k: float = DEFAULT_PITCH
    phi_b: float = 0.0
    w0: float = DEFAULT_WAIST
    scale: float = 1.0
    transition: Optional[TransitionSpec] = None

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=float).ravel()
        self.strength = np.asarray(self.strength, dtype=float).ravel()
        if self.b.size == 0 or self.b.size != self.strength.size:
            raise DomainError("profile data must be non-empty with matching b and strength lengths")
        if self.alpha is not None:
            self.alpha = np.asarray(self.alpha, dtype=float).ravel()
            if self.alpha.size != self.b.size:
                raise DomainError("alpha column must match the b column")
        if self.transition is None or self.m_i is None or self.m_f is None:
            sc = get_scenario(self.scenario_id)
            if self.transition is None:
                self.transition = sc.transition
            if self.m_i is None:
                self.m_i = sc.default_m_i
            if self.m_f is None:
                self.m_f = sc.default_m_f


@dataclass
class FitRequest:
    profiles: list
    free: tuple = ("theta_k", "phi_b", "w0")
    shared: tuple = ("theta_k", "phi_b", "w0", "scale")
    initial: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    tolerance: float = 1e-12
    max_evaluations: int = 2000

    def __post_init__(self):
        if not self.profiles:
            raise DomainError("fit needs at least one profile")
        if not self.free:
            raise DomainError("fit needs at least one free parameter")
        unknown = set(self.free) - set(FIT_PARAMETERS)
        if unknown:
            raise DomainError(f"unknown fit parameters: {sorted(unknown)}")


@dataclass
class FitResult:
    names: list
    values: np.ndarray
    stderr: np.ndarray
    covariance: np.ndarray
    residual_norm: float
    converged: bool
    status: int
    message: str
    nfev: int

    @property
    def params(self) -> dict:
        return dict(zip(self.names, (float(v) for v in self.values)))


def model_strength(p: ProfileData, theta_k: float, phi_b: float, w0: float, scale: float) -> np.ndarray:
    """Forward model scale * |amplitude| at the profile's sample points."""
    beam = BeamSpec(p.family, theta_k, p.oam, w0)
    amps = []
    for lam in (-1, 1):
        exp = channel_expansion(p.transition, beam, p.m_i, p.m_f, p.theta_z, p.phi_z, Polarization.circular(lam))
        amps.append(exp.evaluate(p.b, phi_b))
    if p.alpha is None:
        cm, cp = decompose_polarization(p.pol)
    else:
        cm = np.exp(1j * p.delta) * np.cos(p.alpha / 2)
        cp = -np.exp(-1j * p.delta) * np.sin(p.alpha / 2)
    return scale * np.abs(cm * amps[0] + cp * amps[1])


def _layout(req: FitRequest) -> list:
    """(name, parameter, profile index or None) for each free slot."""
    slots = []
    multi = len(req.profiles) > 1
    for name in FIT_PARAMETERS:
        if name not in req.free:
            continue
        if name in req.shared or not multi:
            slots.append((name, name, None))
        else:
            slots.extend((f"{name}[{k}]", name, k) for k in range(len(req.profiles)))
    return slots


def _start_and_bounds(req: FitRequest, slots: list):
    x0, lo, hi = [], [], []
    for label, name, k in slots:
        prof = req.profiles[0 if k is None else k]
        start = req.initial.get(label, req.initial.get(name, getattr(prof, name)))
        b_lo, b_hi = req.bounds.get(label, req.bounds.get(name, _DEFAULT_BOUNDS[name]))
        if not b_lo < b_hi:
            raise DomainError(f"empty bounds for {label}: [{b_lo}, {b_hi}]")
        if not b_lo <= start <= b_hi:
            raise DomainError(f"initial {label}={start} outside bounds [{b_lo}, {b_hi}]")
        # least_squares needs a strictly interior start
        if start == b_lo or start == b_hi:
            span = (b_hi - b_lo) if math.isfinite(b_hi - b_lo) else max(abs(start), 1.0)
            start = start + 1e-9 * span if start == b_lo else start - 1e-9 * span
        x0.append(float(start))
        lo.append(b_lo)
        hi.append(b_hi)
    return np.array(x0), np.array(lo), np.array(hi)


def run_fit(req: FitRequest) -> FitResult:
    """Minimize sum (model - data)^2 over the free parameters (trust-region least squares)."""
    slots = _layout(req)
    x0, lo, hi = _start_and_bounds(req, slots)

    def unpack(x):
        per = [{n: getattr(p, n) for n in FIT_PARAMETERS} for p in req.profiles]
        for (label, name, k), v in zip(slots, x):
            targets = range(len(per)) if k is None else (k,)
            for t in targets:
                per[t][name] = float(v)
        return per

    def residuals(x):
        per = unpack(x)
        out = []
        for p, vals in zip(req.profiles, per):
            try:
                out.append(model_strength(p, **vals) - p.strength)
            except DomainError:
                out.append(np.full(p.b.size, 1e6))
        return np.concatenate(out)

    tol = max(float(req.tolerance), np.finfo(float).eps)
    res = least_squares(residuals, x0, bounds=(lo, hi), method="trf", x_scale="jac",
                        xtol=tol, ftol=tol, gtol=tol, max_nfev=req.max_evaluations)
    m, n = res.fun.size, res.x.size
    dof = max(m - n, 1)
    s2 = 2.0 * res.cost / dof
    try:
        cov = np.linalg.pinv(res.jac.T @ res.jac) * s2
    except np.linalg.LinAlgError:
        cov = np.full((n, n), np.nan)
    stderr = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    converged = bool(res.success and res.status > 0)
    return FitResult([s[0] for s in slots], res.x, stderr, cov, float(np.linalg.norm(res.fun)),
                     converged, int(res.status), str(res.message), int(res.nfev))

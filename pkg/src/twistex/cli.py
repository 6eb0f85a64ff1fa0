"""Command-line interface.

Subcommands: profile, polmap, alignscan, fit, scenarios, selftest.
Exit codes: 0 success, 1 usage error, 2 numerical/domain error,
3 fit did not converge.
"""
from __future__ import annotations

import argparse
import math
import sys
import warnings
from typing import Callable, Optional

import numpy as np

from .angular import half
from .beams import BeamFamily, Polarization
from .config import load_config, lookup, parse_angle
from .errors import DomainError
from .scenarios import DEFAULT_PITCH, DEFAULT_WAIST, get_scenario, registry

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NOFIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _bool(text) -> bool:
    s = str(text).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _family(text) -> BeamFamily:
    return BeamFamily.parse(str(text))


def _sublevel(text):
    s = str(text).strip()
    return "all" if s.lower() == "all" else half(s)


# (flags, dest, converter, default, help); every entry is also a config key
COMMON = [
    ("--scenario", "scenario", str, "ca40_e2", "scenario id (see `scenarios`)"),
    ("--mi", "mi", _sublevel, None, "initial sublevel, e.g. 1/2, or 'all'"),
    ("--mf", "mf", _sublevel, None, "final sublevel, e.g. 3/2, or 'all'"),
    ("--fi", "fi", half, None, "initial hyperfine level F_i (nuclear-spin scenarios)"),
    ("--ff", "ff", half, None, "final hyperfine level F_f"),
    ("--oam", "oam", int, 0, "orbital angular momentum l of the beam"),
    ("--pitch", "pitch", parse_angle, DEFAULT_PITCH, "pitch angle theta_k [rad]"),
    ("--waist", "waist", float, DEFAULT_WAIST, "Gaussian waist w0 [wavelengths]"),
    ("--family", "family", _family, BeamFamily.BESSEL_GAUSS, "bessel or bessel-gauss"),
    ("--theta-z", "theta_z", parse_angle, 0.0, "polar angle of the quantization axis [rad]"),
    ("--phi-z", "phi_z", parse_angle, 0.0, "azimuth of the quantization axis [rad]"),
    ("--phi-b", "phi_b", parse_angle, 0.0, "azimuth of the impact parameter [rad]"),
    ("--pol", "pol", str, "H", "L, R, H, V, alpha:delta (comma list allowed) or sweep[:delta]"),
    ("--b-min", "b_min", float, 0.0, "smallest |b| [wavelengths]"),
    ("--b-max", "b_max", float, 20.0, "largest |b| [wavelengths]"),
    ("--b-steps", "b_steps", int, 201, "number of b samples per half-line"),
    ("--signed", "signed", _bool, False, "also scan the far side of the vortex (b < 0)"),
    ("--normalize", "normalize", str, None, "raw or peak (default: peak for polmap, raw otherwise)"),
    ("--out", "out", str, None, "output path (default: stdout)"),
]

EXTRA = {
    "profile": [],
    "polmap": [
        ("--alpha-steps", "alpha_steps", int, 91, "alpha samples in [0, pi] for a sweep"),
        ("--ascii", "ascii", _bool, False, "also print an ASCII heat map"),
    ],
    "alignscan": [
        ("--b", "b_fixed", float, 0.0, "impact parameter of the alignment scan"),
        ("--theta-steps", "theta_steps", int, 91, "theta_z samples in [0, pi]"),
    ],
    "fit": [
        ("--data", "data", str, None, "CSV with b_lambda, strength[, alpha_rad]; repeat for several profiles"),
        ("--free", "free", str, "theta_k,phi_b,w0", "free parameters among theta_k,phi_b,w0,scale"),
        ("--per-profile", "per_profile", str, "", "free parameters fitted separately per profile"),
        ("--scale", "scale", float, 1.0, "overall scale (start value when free)"),
        ("--bound", "bound", str, None, "NAME=LO:HI bounds, comma separated"),
        ("--delta", "delta", parse_angle, 0.0, "delta of polarization-map data (alpha column)"),
        ("--tol", "tol", float, 1e-12, "least-squares tolerance"),
        ("--max-nfev", "max_nfev", int, 2000, "maximum model evaluations"),
    ],
}

SCAN_COMMANDS = ("profile", "polmap", "alignscan", "fit")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="twistex", description="Photo-absorption amplitudes of trapped ions in twisted light.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    helps = {
        "profile": "strength versus impact parameter",
        "polmap": "strength over (alpha, signed b)",
        "alignscan": "strength versus theta_z at fixed b",
        "fit": "fit beam parameters to profile data",
    }
    for cmd in SCAN_COMMANDS:
        sp = sub.add_parser(cmd, help=helps[cmd])
        sp.add_argument("--config", dest="config", default=None, help="INI file with defaults")
        for flags, dest, conv, default, hlp in COMMON + EXTRA[cmd]:
            if dest == "data":
                sp.add_argument(flags, dest=dest, action="append", default=None, help=hlp)
            elif conv is _bool:
                sp.add_argument(flags, dest=dest, action="store_const", const="true", default=None, help=hlp)
            else:
                sp.add_argument(flags, dest=dest, default=None,
                                help=f"{hlp} (default: {default})" if default is not None else hlp)
    sc = sub.add_parser("scenarios", help="list built-in (and configured) scenarios")
    sc.add_argument("--config", dest="config", default=None)
    sub.add_parser("selftest", help="run the built-in oracle checks")
    return p


def _resolve(args, cp, command: str) -> dict:
    """Merge CLI flags over config values over built-in defaults, converting types."""
    out = {}
    for flags, dest, conv, default, _h in COMMON + EXTRA[command]:
        raw = getattr(args, dest, None)
        source = "flag " + flags
        if raw is None:
            raw = lookup(cp, command, flags)
            source = f"config key {flags.lstrip('-')}"
            if raw is not None and dest == "data":
                raw = [s.strip() for s in raw.split(",") if s.strip()]
        if raw is None:
            out[dest] = default
            continue
        if dest == "data":
            out[dest] = list(raw)
            continue
        try:
            out[dest] = conv(raw)
        except (ValueError, DomainError) as exc:
            raise UsageError(f"bad value for {source}: {raw!r} ({exc})") from None
    if out["normalize"] is None:
        out["normalize"] = "peak" if command == "polmap" else "raw"
    if out["normalize"] not in ("raw", "peak"):
        raise UsageError(f"--normalize must be raw or peak, got {out['normalize']!r}")
    return out


def _polarizations(text: str):
    s = text.strip()
    if s.lower().startswith("sweep"):
        _, _, rest = s.partition(":")
        try:
            delta = parse_angle(rest) if rest.strip() else 0.0
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return None, delta
    pols = []
    for part in s.split(","):
        try:
            pols.append(Polarization.parse(part))
        except DomainError as exc:
            raise UsageError(str(exc)) from None
    return tuple(pols), None


def _scan_request(opts: dict, command: str, scenarios):
    from .scans import ScanRequest, ScanError
    pols, delta = _polarizations(opts["pol"])
    sweep = pols is None
    if sweep and command != "polmap":
        raise UsageError("--pol sweep is only valid for polmap")
    try:
        sc = get_scenario(opts["scenario"], f_i=opts["fi"], f_f=opts["ff"], scenarios=scenarios)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    try:
        return ScanRequest(
            scenario_id=opts["scenario"], m_i=opts["mi"], m_f=opts["mf"], oam=opts["oam"],
            pitch=opts["pitch"], waist=opts["waist"], family=opts["family"],
            theta_z=opts["theta_z"], phi_z=opts["phi_z"], phi_b=opts["phi_b"],
            polarizations=pols or (), sweep=sweep, sweep_delta=delta or 0.0,
            alpha_steps=opts.get("alpha_steps", 91), b_min=opts["b_min"], b_max=opts["b_max"],
            b_steps=opts["b_steps"], signed=opts["signed"], normalize=opts["normalize"],
            f_i=opts["fi"], f_f=opts["ff"], b_fixed=opts.get("b_fixed", 0.0),
            theta_steps=opts.get("theta_steps", 91), scenario=sc,
        )
    except ScanError as exc:
        raise UsageError(str(exc)) from None


def _cmd_profile(opts, scenarios) -> int:
    from .scans import emit_csv, run_profile
    emit_csv(run_profile(_scan_request(opts, "profile", scenarios)), opts["out"])
    return EXIT_OK


def _cmd_alignscan(opts, scenarios) -> int:
    from .scans import emit_csv, run_alignscan
    if opts["b_fixed"] < 0:
        raise UsageError("--b must be non-negative")
    emit_csv(run_alignscan(_scan_request(opts, "alignscan", scenarios)), opts["out"])
    return EXIT_OK


def _cmd_polmap(opts, scenarios) -> int:
    from .scans import ascii_heatmap, emit_grid, run_polmap
    grid = run_polmap(_scan_request(opts, "polmap", scenarios))
    emit_grid(grid, opts["out"])
    if opts["ascii"]:
        stream = sys.stdout if opts["out"] not in (None, "-") else sys.stderr
        print(ascii_heatmap(grid), file=stream)
    return EXIT_OK


def _parse_bounds(text: Optional[str]) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        name, sep, rng = item.partition("=")
        lo, sep2, hi = rng.partition(":")
        if not sep or not sep2:
            raise UsageError(f"bad bound {item!r}; expected NAME=LO:HI")
        try:
            out[name.strip()] = (parse_angle(lo) if lo.strip() else -math.inf,
                                 parse_angle(hi) if hi.strip() else math.inf)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return out


def _cmd_fit(opts, scenarios) -> int:
    from .fitting import FIT_PARAMETERS, FitRequest, ProfileData, run_fit
    from .scans import Table, emit_csv, read_csv, ScanError
    if not opts["data"]:
        raise UsageError("fit needs --data")
    pols, _ = _polarizations(opts["pol"])
    if pols is None or len(pols) != 1:
        raise UsageError("fit needs a single fixed polarization (alpha-column data uses --delta)")
    free = tuple(s.strip() for s in opts["free"].split(",") if s.strip())
    per = tuple(s.strip() for s in opts["per_profile"].split(",") if s.strip())
    bad = (set(free) | set(per)) - set(FIT_PARAMETERS)
    if bad:
        raise UsageError(f"unknown fit parameters {sorted(bad)}; choose from {', '.join(FIT_PARAMETERS)}")
    try:
        sc = get_scenario(opts["scenario"], f_i=opts["fi"], f_f=opts["ff"], scenarios=scenarios)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    mi = sc.default_m_i if opts["mi"] in (None, "all") else opts["mi"]
    mf = sc.default_m_f if opts["mf"] in (None, "all") else opts["mf"]
    profiles = []
    for path in opts["data"]:
        try:
            table = read_csv(path)
        except ScanError as exc:
            raise UsageError(str(exc)) from None
        cols = table.columns
        bcol = "b_lambda" if "b_lambda" in cols else cols[0]
        scol = next((c for c in cols if c.startswith("strength")), None)
        if scol is None:
            raise UsageError(f"{path}: no strength column")
        alpha = table.column("alpha_rad") if "alpha_rad" in cols else None
        profiles.append(ProfileData(
            table.column(bcol), table.column(scol), scenario_id=sc.id, m_i=mi, m_f=mf, oam=opts["oam"],
            pol=pols[0], alpha=alpha, delta=opts["delta"], theta_z=opts["theta_z"], phi_z=opts["phi_z"],
            family=opts["family"], theta_k=opts["pitch"], phi_b=opts["phi_b"], w0=opts["waist"],
            scale=opts["scale"], transition=sc.transition))
    req = FitRequest(profiles, free=free, shared=tuple(p for p in FIT_PARAMETERS if p not in per),
                     bounds=_parse_bounds(opts["bound"]), tolerance=opts["tol"], max_evaluations=opts["max_nfev"])
    res = run_fit(req)
    rows = np.column_stack([np.arange(len(res.names)), res.values, res.stderr]) if res.names else np.zeros((0, 3))
    emit_csv(Table(["index", "value", "stderr"], rows), opts["out"])
    print("parameters: " + ", ".join(f"{n}={v:.12g}" for n, v in zip(res.names, res.values)), file=sys.stderr)
    print(f"residual_norm={res.residual_norm:.6g} converged={res.converged} nfev={res.nfev} ({res.message})",
          file=sys.stderr)
    return EXIT_OK if res.converged else EXIT_NOFIT


def _cmd_scenarios(args) -> int:
    cp = load_config(args.config) if args.config else None
    for sid, sc in sorted(registry(cp).items()):
        t = sc.transition
        mults = ", ".join(f"{m.label}:{m.amplitude:g}" for m in t.multipoles)
        hf = f" I={t.nuclear_spin} F {t.f_i}->{t.f_f}" if t.has_hyperfine else ""
        print(f"{sid}\t{t.j_i}->{t.j_f}{hf}\t[{mults}]\tdefault m {sc.default_m_i}->{sc.default_m_f}\t"
              f"{sc.description}")
    return EXIT_OK


def _cmd_selftest() -> int:
    from .kernels import BACKEND
    from .selfcheck import run_checks
    print(f"backend: {BACKEND}")
    ok = True
    for name, passed, err, tol in run_checks():
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: error {err:.3g} (tolerance {tol:g})")
    return EXIT_OK if ok else EXIT_DOMAIN


HANDLERS: dict[str, Callable] = {
    "profile": _cmd_profile,
    "polmap": _cmd_polmap,
    "alignscan": _cmd_alignscan,
    "fit": _cmd_fit,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "selftest":
            return _cmd_selftest()
        if args.command == "scenarios":
            return _cmd_scenarios(args)
        cp = load_config(args.config) if args.config else None
        opts = _resolve(args, cp, args.command)
        scenarios = registry(cp)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return HANDLERS[args.command](opts, scenarios)
    except UsageError as exc:
        print(f"twistex: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"twistex: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"twistex: numerical/domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

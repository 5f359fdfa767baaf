"""Command-line interface: solve, verify, audit, scan, sample, bessel.

Option precedence is flags > ``--config FILE`` > ``$INVPOW_CONFIG`` > defaults.
Config files hold ``key=value`` lines; ``#`` starts a comment.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .ansatz import (
    constraint_residual,
    peak_radius,
    radial_wavefunction,
    select_B,
    solve,
    solve_B,
)
from .audit import audit
from .errors import InvPowError
from .potential import Channel, Potential, RadialGrid
from .special import bessel_k
from .verifier import Tolerances, verify

DEFAULTS = {
    "A": None,
    "B": None,
    "C": None,
    "D": None,
    "dim": None,
    "ell": None,
    "m": None,
    "format": None,
    "output": None,
    "r_min": 0.05,
    "r_max": 40.0,
    "step": 1e-3,
    "residual_tol": 1e-10,
    "energy_tol": 1e-3,
    "norm_tol": 1e-6,
    "constraint_tol": 1e-9,
    "B_lo": None,
    "B_hi": 1e3,
    "r_lo": 0.1,
    "r_hi": 30.0,
    "points": 300,
    "normalized": False,
    "param": None,
    "lo": None,
    "hi": None,
    "steps": None,
    "nu": None,
    "x": None,
}

_FLOAT_KEYS = {
    "A", "B", "C", "D", "r_min", "r_max", "step", "residual_tol", "energy_tol",
    "norm_tol", "constraint_tol", "B_lo", "B_hi", "r_lo", "r_hi", "lo", "hi", "nu", "x",
}
_INT_KEYS = {"dim", "ell", "m", "points", "steps"}


class UsageError(Exception):
    pass


def read_config(path):
    """Parse a ``key=value`` file into a dict of typed values."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key not in DEFAULTS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = _coerce(key, value)
    return out


def _coerce(key, value):
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {value!r}") from exc
    if key == "normalized":
        return value.lower() in ("1", "true", "yes", "on")
    return value


def resolve(args) -> dict:
    cfg = dict(DEFAULTS)
    env_path = os.environ.get("INVPOW_CONFIG")
    if env_path and not args.config:
        cfg.update(read_config(env_path))
    if args.config:
        cfg.update(read_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            cfg[key] = value
    cfg["command"] = args.command
    if cfg["format"] is None:
        cfg["format"] = "csv" if args.command == "sample" else "table"
    if cfg["format"] not in ("csv", "json-lines", "table"):
        raise UsageError(f"unknown format {cfg['format']!r}")
    return cfg


# ---------------------------------------------------------------- domain setup


def channel_from(cfg) -> Channel:
    dim = cfg["dim"]
    if dim is None:
        dim = 2 if cfg["m"] is not None and cfg["ell"] is None else 3
    angular = cfg["m"] if dim == 2 else cfg["ell"]
    if angular is None:
        angular = cfg["ell"] if dim == 2 else cfg["m"]
    return Channel(dimension=dim, angular=angular or 0)


def potential_from(cfg, ch: Channel) -> Potential:
    for key in ("A", "C", "D"):
        if cfg[key] is None:
            raise UsageError(f"--{key} is required")
    A, C, D = cfg["A"], cfg["C"], cfg["D"]
    if not A > 0:
        raise UsageError(f"A must be positive, got {A}")
    if not D < 0:
        raise UsageError(f"D must be negative, got {D}")
    B = cfg["B"]
    if B is None:
        B = select_B(solve_B(A, C, D, ch, lo=cfg["B_lo"], hi=cfg["B_hi"]))
    return Potential(A, B, C, D)


def solve_row(cfg, ch: Channel) -> dict:
    p = potential_from(cfg, ch)
    sol = solve(p, ch, tol=cfg["constraint_tol"])
    a, b, c = sol.params.a, sol.params.b, sol.params.c
    return {
        "A": p.A, "B": p.B, "C": p.C, "D": p.D,
        "dimension": ch.dimension, "angular": ch.angular,
        "a": a, "b": b, "c": c,
        "E": sol.energy, "N": sol.normalization, "r_peak": peak_radius(sol.params),
        "constraint_residual": constraint_residual(p, ch),
    }


# ---------------------------------------------------------------- rendering


def _fmt(value, style):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return ("%.10e" if style == "csv" else "%.10g") % value
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, np.generic):
        return value.item()
    return value


def render(rows, fields, fmt, out):
    if fmt == "json-lines":
        for row in rows:
            out.write(json.dumps({k: _json_value(row[k]) for k in fields}) + "\n")
    elif fmt == "csv":
        out.write(",".join(fields) + "\n")
        for row in rows:
            out.write(",".join(_fmt(row[k], "csv") for k in fields) + "\n")
    else:
        if len(rows) == 1:
            width = max(len(k) for k in fields)
            for k in fields:
                out.write(f"{k:<{width}}  {_fmt(rows[0][k], 'table')}\n")
            return
        cells = [[_fmt(row[k], "table") for k in fields] for row in rows]
        widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(fields)]
        out.write("  ".join(k.rjust(w) for k, w in zip(fields, widths)).rstrip() + "\n")
        for c in cells:
            out.write("  ".join(v.rjust(w) for v, w in zip(c, widths)).rstrip() + "\n")


# ---------------------------------------------------------------- commands

SOLVE_FIELDS = ["A", "B", "C", "D", "dimension", "angular", "a", "b", "c", "E", "N", "r_peak"]


def cmd_solve(cfg, out) -> int:
    row = solve_row(cfg, channel_from(cfg))
    render([row], SOLVE_FIELDS, cfg["format"], out)
    return 0


def cmd_sample(cfg, out) -> int:
    r_lo, r_hi, points = cfg["r_lo"], cfg["r_hi"], cfg["points"]
    if not (0.0 < r_lo < r_hi) or points < 2:
        raise UsageError("sample needs 0 < r_lo < r_hi and points >= 2")
    ch = channel_from(cfg)
    sol = solve(potential_from(cfg, ch), ch, tol=cfg["constraint_tol"])
    r = np.linspace(r_lo, r_hi, points)
    R = radial_wavefunction(sol, r, normalized=cfg["normalized"])
    rows = [{"r": float(x), "R": float(y)} for x, y in zip(r, R)]
    render(rows, ["r", "R"], cfg["format"], out)
    return 0


def _scan_values(cfg):
    param, lo, hi, steps = cfg["param"], cfg["lo"], cfg["hi"], cfg["steps"]
    if param not in ("A", "C", "D", "angular"):
        raise UsageError("--param must be one of A, C, D, angular")
    if lo is None or hi is None:
        raise UsageError("scan needs --lo and --hi")
    if param == "angular":
        lo_i, hi_i = int(lo), int(hi)
        if lo_i != lo or hi_i != hi or lo_i < 0 or hi_i < lo_i:
            raise UsageError("angular scan needs integer 0 <= lo <= hi")
        values = list(range(lo_i, hi_i + 1))
        if steps is not None and steps != len(values):
            raise UsageError(f"angular scan from {lo_i} to {hi_i} has {len(values)} steps")
        return values
    if steps is None or steps < 1:
        raise UsageError("scan needs --steps >= 1")
    if steps == 1:
        if lo != hi:
            raise UsageError("a single-step scan needs lo == hi")
        return [float(lo)]
    return [float(v) for v in np.linspace(lo, hi, steps)]


SCAN_FIELDS = ["param", "value"] + SOLVE_FIELDS + ["error"]


def cmd_scan(cfg, out) -> int:
    values = _scan_values(cfg)
    base_ch = channel_from(cfg)
    rows = []
    for value in values:
        step_cfg = dict(cfg)
        ch = base_ch
        if cfg["param"] == "angular":
            ch = Channel(base_ch.dimension, value)
        else:
            step_cfg[cfg["param"]] = value
        row = {k: math.nan for k in SOLVE_FIELDS}
        row.update(dimension=ch.dimension, angular=ch.angular, param=cfg["param"], value=value, error="")
        try:
            row.update(solve_row(step_cfg, ch))
        except (InvPowError, UsageError) as exc:
            row["error"] = f"{type(exc).__name__}: {exc}".replace(",", ";")
        rows.append(row)
    render(rows, SCAN_FIELDS, cfg["format"], out)
    return 0


VERIFY_FIELDS = [
    "residual_max", "shot_energy", "analytic_energy", "energy_rel_err",
    "normalization_integral", "passed", "r_min", "r_max", "step", "notes",
]


def cmd_verify(cfg, out) -> int:
    ch = channel_from(cfg)
    p = potential_from(cfg, ch)
    grid = RadialGrid(cfg["r_min"], cfg["r_max"], cfg["step"])
    tol = Tolerances(cfg["residual_tol"], cfg["energy_tol"], cfg["norm_tol"])
    report = verify(p, ch, tol, grid=grid)
    row = dataclasses.asdict(report)
    row.update(r_min=grid.r_min, r_max=grid.r_max, step=grid.step, notes="; ".join(report.notes))
    render([row], VERIFY_FIELDS, cfg["format"], out)
    return 0 if report.passed else 1


AUDIT_FIELDS = [
    "b_ground", "b_excited", "b_conflict", "implied_D_ratio", "system_residual_min",
    "eq10_minus", "eq10_plus", "minus_matches_eq12",
]


def cmd_audit(cfg, out) -> int:
    ch = channel_from(cfg)
    report = audit(potential_from(cfg, ch), ch)
    render([dataclasses.asdict(report)], AUDIT_FIELDS, cfg["format"], out)
    return 0 if (report.b_conflict and report.minus_matches_eq12) else 1


def cmd_bessel(cfg, out) -> int:
    if cfg["nu"] is None or cfg["x"] is None:
        raise UsageError("bessel needs --nu and --x")
    row = {"nu": cfg["nu"], "x": cfg["x"], "K": bessel_k(cfg["nu"], cfg["x"])}
    render([row], ["nu", "x", "K"], cfg["format"], out)
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "audit": cmd_audit,
    "scan": cmd_scan,
    "sample": cmd_sample,
    "bessel": cmd_bessel,
}


# ---------------------------------------------------------------- parser


def _potential_options(p):
    g = p.add_argument_group("potential")
    for key in "ABCD":
        g.add_argument(f"--{key}", type=float, help=f"coefficient {key}")
    g.add_argument("--dim", type=int, choices=(2, 3))
    g.add_argument("--ell", type=int, help="angular momentum l (3D)")
    g.add_argument("--m", type=int, help="angular momentum m (2D)")
    g.add_argument("--constraint-tol", dest="constraint_tol", type=float)
    g.add_argument("--B-lo", dest="B_lo", type=float, help="lower end of the B search bracket")
    g.add_argument("--B-hi", dest="B_hi", type=float, help="upper end of the B search bracket")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json-lines", "table"))
    common.add_argument("--output", help="output path (default: stdout)")
    common.add_argument("--config", help="key=value config file")

    parser = argparse.ArgumentParser(
        prog="invpow",
        description="Exact ground states of V(r) = A/r^4 + B/r^3 + C/r^2 + D/r.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="closed-form ground state")
    _potential_options(p)

    p = sub.add_parser("verify", parents=[common], help="check against Numerov shooting")
    _potential_options(p)
    p.add_argument("--r-min", dest="r_min", type=float)
    p.add_argument("--r-max", dest="r_max", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--residual-tol", dest="residual_tol", type=float)
    p.add_argument("--energy-tol", dest="energy_tol", type=float)
    p.add_argument("--norm-tol", dest="norm_tol", type=float)

    p = sub.add_parser("audit", parents=[common], help="one-node ansatz and energy branches")
    _potential_options(p)

    p = sub.add_parser("scan", parents=[common], help="re-solve over a parameter range")
    _potential_options(p)
    p.add_argument("--param", choices=("A", "C", "D", "angular"))
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--steps", type=int)

    p = sub.add_parser("sample", parents=[common], help="wavefunction on a linear grid")
    _potential_options(p)
    p.add_argument("--r-lo", dest="r_lo", type=float)
    p.add_argument("--r-hi", dest="r_hi", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--normalized", action="store_true")

    p = sub.add_parser("bessel", parents=[common], help="modified Bessel K_nu(x)")
    p.add_argument("--nu", type=float)
    p.add_argument("--x", type=float)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        handler = COMMANDS[args.command]
        if cfg["output"]:
            with open(cfg["output"], "w", encoding="utf-8", newline="\n") as out:
                return handler(cfg, out)
        return handler(cfg, sys.stdout)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except InvPowError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

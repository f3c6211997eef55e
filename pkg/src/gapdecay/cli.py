"""Command line surface: decay curves, spectra, time scales, the critical
ensemble size, and the cross-method validation harness.

Frequencies are in units of the width a and times in 1/a throughout. Output
files are written atomically with shortest round-trip float formatting, so
identical configurations produce byte-identical files.
"""
import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import __version__, asymptotics, closed_half, oracles, rational_rep, series_gen
from .curves import DecayCurve
from .errors import GapDecayError, UsageError
from .reservoir import ReservoirParams
from .validation import run_validation

COMMANDS = ("decay", "spectrum", "timescale", "critical-n", "validate")
METHOD_CHOICES = ("auto", "closed-half", "series", "volterra", "modes", "rational")

_DEFAULTS = {
    "alpha": 0.5,
    "a": 1.0,
    "A": 1.0,
    "omega0": 0.0,
    "n_atoms": 1,
    "method": "auto",
    "t_max": 10.0,
    "points": 200,
    "grid": "linear",
    "format": "csv",
    "output": None,
    "omega_max": None,
}

_CASTS = {
    "alpha": float, "a": float, "A": float, "omega0": float, "n_atoms": int,
    "method": str, "t_max": float, "points": int, "grid": str, "format": str,
    "output": str, "omega_max": float,
}


@dataclass
class RunConfig:
    command: str
    params: ReservoirParams
    method: str = "auto"
    t_max: float = 10.0
    points: int = 200
    grid_kind: str = "linear"
    output_path: str | None = None
    output_format: str = "csv"
    omega_max: float | None = None


def _read_config_file(path):
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
                key, value = (part.strip() for part in line.split("=", 1))
                if key not in _CASTS:
                    raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
                try:
                    values[key] = _CASTS[key](value)
                except ValueError as exc:
                    raise UsageError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return values


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="gapdecay",
        description="Excited-state decay in band-gap-edge reservoirs",
    )
    sub = parser.add_subparsers(dest="command")
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", default=None, help="key = value file; flags override it")
        sp.add_argument("--alpha", type=float, default=None)
        sp.add_argument("--a", type=float, default=None)
        sp.add_argument("--A", type=float, default=None)
        sp.add_argument("--omega0", type=float, default=None)
        sp.add_argument("--n-atoms", dest="n_atoms", type=int, default=None)
        sp.add_argument("--output", "-o", default=None)
        sp.add_argument("--format", choices=("csv", "json"), default=None)
        if name == "decay":
            sp.add_argument("--method", choices=METHOD_CHOICES, default=None)
            sp.add_argument("--t-max", dest="t_max", type=float, default=None)
            sp.add_argument("--points", type=int, default=None)
            sp.add_argument("--grid", choices=("linear", "log"), default=None)
        if name == "spectrum":
            sp.add_argument("--omega-max", dest="omega_max", type=float, default=None)
            sp.add_argument("--points", type=int, default=None)
    return parser


def parse_config(argv):
    """argv -> RunConfig; config-file keys first, then flag overrides."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            raise UsageError("invalid command line") from None
        raise
    if ns.command is None:
        raise UsageError("a command is required: " + ", ".join(COMMANDS))
    values = dict(_DEFAULTS)
    if getattr(ns, "config", None):
        values.update(_read_config_file(ns.config))
    for key in _CASTS:
        flag = getattr(ns, key, None)
        if flag is not None:
            values[key] = flag
    if values["points"] < 2 and ns.command in ("decay", "spectrum"):
        raise UsageError("points must be at least 2")
    method = values["method"]
    if method not in METHOD_CHOICES:
        raise UsageError(f"unknown method {method!r}")
    try:
        params = ReservoirParams(
            alpha=values["alpha"], big_a=values["A"], a=values["a"],
            omega0=values["omega0"], n_atoms=values["n_atoms"],
        )
    except GapDecayError as exc:
        raise UsageError(str(exc)) from exc
    if method == "closed-half" and abs(params.alpha - 0.5) > 1e-12:
        raise UsageError("method closed-half requires alpha = 1/2")
    if method == "rational":
        _rational_alpha(params.alpha)  # raises UsageError when not rational
    return RunConfig(
        command=ns.command, params=params, method=method,
        t_max=values["t_max"], points=values["points"], grid_kind=values["grid"],
        output_path=values["output"], output_format=values["format"],
        omega_max=values["omega_max"],
    )


def _rational_alpha(alpha):
    frac = Fraction(alpha).limit_denominator(64)
    if abs(float(frac) - alpha) > 1e-12 or frac.denominator < 2:
        raise UsageError(
            f"method rational requires alpha = p/q with q <= 64, got {alpha}"
        )
    try:
        return rational_rep.RationalAlpha(p=frac.numerator, q=frac.denominator)
    except GapDecayError as exc:
        raise UsageError(str(exc)) from exc


def _time_grid(config):
    if config.grid_kind == "log":
        return np.geomspace(config.t_max * 1e-6, config.t_max, config.points)
    return np.linspace(0.0, config.t_max, config.points)


def _decay_curve(config) -> DecayCurve:
    params = config.params
    method = config.method
    if method == "auto":
        return asymptotics.hybrid_population(params, _time_grid(config))
    if method == "closed-half":
        return closed_half.population_half(params, _time_grid(config))
    if method == "series":
        return series_gen.population_series(params, _time_grid(config))
    if method == "volterra":
        if config.grid_kind != "linear":
            raise UsageError("method volterra supports only the linear grid")
        dt = config.t_max / max(2000, 4 * (config.points - 1))
        curve = oracles.volterra_solve(params, oracles.VolterraConfig(dt=dt, t_max=config.t_max))
        step = max(1, (len(curve.t) - 1) // (config.points - 1))
        sel = slice(None, None, step)
        return DecayCurve(params=params, t=curve.t[sel], c=curve.c[sel],
                          method=["volterra"] * len(curve.t[sel]), meta=curve.meta)
    if method == "modes":
        if config.grid_kind != "linear":
            raise UsageError("method modes supports only the linear grid")
        cap = max(50.0 * params.a, 4.0 / config.t_max)
        grid = oracles.mode_discretize(params, count=3000, omega_cap=cap)
        dt = min(0.1 / cap, config.t_max / (4 * config.points))
        every = max(1, int(round(config.t_max / dt / (config.points - 1))))
        return oracles.mode_evolve(grid, config.t_max, dt, sample_every=every, params=params)
    if method == "rational":
        ra = _rational_alpha(params.alpha)
        grid = _time_grid(config)
        vals = np.array([rational_rep.amplitude_rational(params, ra, t).value for t in grid])
        return DecayCurve(params=params, t=grid, c=vals, method=["rational"] * len(grid))
    raise UsageError(f"unknown method {method!r}")


def _fmt(x):
    return repr(float(x))


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".gapdecay-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(config, header, rows, meta):
    """Render rows as csv or json and write them (file or stdout)."""
    if config.output_format == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(v) if not isinstance(v, str) else v for v in row))
        text = "\n".join(lines) + "\n"
    else:
        payload = {"meta": meta, "samples": [dict(zip(header, row)) for row in rows]}
        text = json.dumps(payload, indent=2, default=float) + "\n"
    if config.output_path:
        _atomic_write(config.output_path, text)
    else:
        sys.stdout.write(text)


def _params_meta(config):
    p = config.params
    return {
        "alpha": p.alpha, "A": p.big_a, "a": p.a, "omega0": p.omega0,
        "n_atoms": p.n_atoms, "method": config.method, "version": __version__,
    }


def run(config: RunConfig) -> int:
    """Execute a parsed configuration; returns the process exit status."""
    if config.command == "decay":
        curve = _decay_curve(config)
        rows = [
            (t, c.real, c.imag, abs(c) ** 2, m)
            for t, c, m in zip(curve.t, curve.c, curve.method)
        ]
        _emit(config, ("t", "re_c", "im_c", "p", "method"), rows, _params_meta(config))
        return 0
    if config.command == "spectrum":
        from .reservoir import spectral_density

        omega_max = config.omega_max or config.params.omega0 + 10.0 * config.params.a
        omegas = np.linspace(config.params.omega0, omega_max, config.points)
        rows = [(om, spectral_density(config.params, om)) for om in omegas]
        _emit(config, ("omega", "j"), rows, _params_meta(config))
        return 0
    if config.command == "timescale":
        rows = []
        if abs(config.params.alpha - 0.5) <= 1e-12:
            law = asymptotics.law_root_based(config.params)
            rows.append((law.variant, law.power, law.zeta, law.tau))
        law = asymptotics.law_constant_based(config.params)
        rows.append((law.variant, law.power, law.zeta, law.tau))
        _emit(config, ("variant", "power", "zeta", "tau"), rows, _params_meta(config))
        return 0
    if config.command == "critical-n":
        value = asymptotics.critical_n(config.params)
        if config.output_path:
            _atomic_write(config.output_path, f"{value}\n")
        else:
            print(value)
        return 0
    if config.command == "validate":
        report = run_validation(progress=lambda line: print(line))
        print(f"{'all passed' if report.overall_passed else 'FAILURES'} "
              f"({len(report.cases)} cases, {report.elapsed:.1f}s)")
        if config.output_path:
            lines = ["name,max_abs_deviation,tolerance,passed"]
            for case in report.cases:
                lines.append(
                    f"{case.name},{_fmt(case.max_abs_deviation)},"
                    f"{_fmt(case.tolerance)},{case.passed}"
                )
            _atomic_write(config.output_path, "\n".join(lines) + "\n")
        return 0 if report.overall_passed else 3
    raise UsageError(f"unknown command {config.command!r}")


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit:
        return 0
    try:
        return run(config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GapDecayError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

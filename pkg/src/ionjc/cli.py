"""Command-line front end: simulate, rates, fit-nu, sweep, calibrate.

Configs are flat ``key = value`` text files (full-line ``#`` comments
allowed).  Unknown or duplicate keys are hard errors so typos never pass
silently.  Exit codes: 0 success, 2 invalid configuration, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, asdict

import numpy as np

from . import analysis, dynamics, model, reservoir
from .errors import IntegrationError, ValidityWarning

INITIAL_KINDS = ("fock", "coherent", "thermal")
CHANNELS = ("dipole", "vibrational", "none", "phenom")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration (CLI exit code 2)."""


@dataclass
class RunConfig:
    """Validated, fully resolved simulation configuration."""

    initial: str | None = None
    fock_n: int | None = None
    coherent_alpha: float | None = None
    thermal_nbar: float | None = None
    channel: str | None = None
    d: float = 1.0
    T_tilde: float = math.inf
    gamma0_tilde: float = 0.0
    nu: float | None = None
    kappa0_nbar0: float = 0.0
    n_max: int | None = None            # None means "auto"
    t_max_norm: float = 5.0
    samples: int = 2000
    solver: str = "analytic"
    form: str = "exact"
    sideband: str = "blue"

    def as_metadata(self) -> dict:
        meta = {k: v for k, v in asdict(self).items() if v is not None}
        if math.isinf(self.T_tilde):
            meta["T_tilde"] = "inf"
        if self.n_max is None:
            meta["n_max"] = "auto"
        meta["population"] = "p_down" if self.sideband == "blue" else "p_up"
        return meta


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------


def _parse_int(key: str, raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"config key '{key}' must be an integer, got {raw!r}") from None
    return value


def _parse_float(key: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"config key '{key}' must be a number, got {raw!r}") from None
    if math.isnan(value) or math.isinf(value):
        raise ConfigError(f"config key '{key}' must be finite, got {raw!r}")
    return value


def _parse_enum(key: str, raw: str, allowed: tuple) -> str:
    if raw not in allowed:
        raise ConfigError(f"config key '{key}' must be one of {allowed}, got {raw!r}")
    return raw


def read_key_values(text: str) -> dict:
    """Parse a flat key = value file; duplicate keys are errors."""
    pairs: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if not key or not raw:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        if key in pairs:
            raise ConfigError(f"duplicate config key '{key}'")
        pairs[key] = raw
    return pairs


def parse_run_config(text: str) -> RunConfig:
    """Parse and validate a RunConfig from flat key = value text."""
    pairs = read_key_values(text)
    cfg = RunConfig()
    known = set(RunConfig.__dataclass_fields__)
    for key in pairs:
        if key not in known:
            raise ConfigError(f"unknown config key '{key}'")
    if "initial" in pairs:
        cfg.initial = _parse_enum("initial", pairs["initial"], INITIAL_KINDS)
    if "fock_n" in pairs:
        cfg.fock_n = _parse_int("fock_n", pairs["fock_n"])
        if cfg.fock_n < 0:
            raise ConfigError(f"config key 'fock_n' must be >= 0, got {cfg.fock_n}")
    if "coherent_alpha" in pairs:
        cfg.coherent_alpha = _parse_float("coherent_alpha", pairs["coherent_alpha"])
        if cfg.coherent_alpha < 0:
            raise ConfigError("config key 'coherent_alpha' must be >= 0")
    if "thermal_nbar" in pairs:
        cfg.thermal_nbar = _parse_float("thermal_nbar", pairs["thermal_nbar"])
        if cfg.thermal_nbar < 0:
            raise ConfigError("config key 'thermal_nbar' must be >= 0")
    if "channel" in pairs:
        cfg.channel = _parse_enum("channel", pairs["channel"], CHANNELS)
    if "d" in pairs:
        cfg.d = _parse_float("d", pairs["d"])
    if "T_tilde" in pairs:
        raw = pairs["T_tilde"]
        if raw == "inf":
            cfg.T_tilde = math.inf
        else:
            cfg.T_tilde = _parse_float("T_tilde", raw)
            if cfg.T_tilde <= 0:
                raise ConfigError(f"config key 'T_tilde' must be positive or 'inf', got {raw!r}")
    if "gamma0_tilde" in pairs:
        cfg.gamma0_tilde = _parse_float("gamma0_tilde", pairs["gamma0_tilde"])
        if cfg.gamma0_tilde < 0:
            raise ConfigError("config key 'gamma0_tilde' must be >= 0")
    if "nu" in pairs:
        cfg.nu = _parse_float("nu", pairs["nu"])
    if "kappa0_nbar0" in pairs:
        cfg.kappa0_nbar0 = _parse_float("kappa0_nbar0", pairs["kappa0_nbar0"])
        if cfg.kappa0_nbar0 < 0:
            raise ConfigError("config key 'kappa0_nbar0' must be >= 0")
    if "n_max" in pairs:
        raw = pairs["n_max"]
        if raw != "auto":
            cfg.n_max = _parse_int("n_max", raw)
            if cfg.n_max < 0:
                raise ConfigError(f"config key 'n_max' must be >= 0 or 'auto', got {raw!r}")
    if "t_max_norm" in pairs:
        cfg.t_max_norm = _parse_float("t_max_norm", pairs["t_max_norm"])
        if cfg.t_max_norm <= 0:
            raise ConfigError("config key 't_max_norm' must be positive")
    if "samples" in pairs:
        cfg.samples = _parse_int("samples", pairs["samples"])
        if cfg.samples < 2:
            raise ConfigError(f"config key 'samples' must be >= 2, got {cfg.samples}")
    if "solver" in pairs:
        cfg.solver = _parse_enum("solver", pairs["solver"], dynamics.SOLVERS)
    if "form" in pairs:
        cfg.form = _parse_enum("form", pairs["form"], dynamics.FORMS)
    if "sideband" in pairs:
        cfg.sideband = _parse_enum("sideband", pairs["sideband"], ("blue", "red"))

    _check_consistency(cfg, pairs)
    return cfg


def _check_consistency(cfg: RunConfig, pairs: dict) -> None:
    if cfg.initial is not None:
        tag_keys = {"fock": "fock_n", "coherent": "coherent_alpha", "thermal": "thermal_nbar"}
        needed = tag_keys[cfg.initial]
        if pairs.get(needed) is None:
            raise ConfigError(f"initial = {cfg.initial} requires config key '{needed}'")
        for kind, key in tag_keys.items():
            if kind != cfg.initial and key in pairs:
                raise ConfigError(
                    f"config key '{key}' conflicts with initial = {cfg.initial}"
                )
    if cfg.nu is not None and cfg.channel != "phenom":
        raise ConfigError("config key 'nu' is only valid for channel = phenom")
    if cfg.channel == "phenom" and cfg.nu is None:
        raise ConfigError("channel = phenom requires config key 'nu'")
    if cfg.channel in ("dipole", "vibrational") and not (cfg.gamma0_tilde > 0):
        raise ConfigError(
            f"config key 'gamma0_tilde' must be positive for channel = {cfg.channel}"
        )
    if cfg.kappa0_nbar0 > 0 and cfg.channel != "dipole":
        raise ConfigError("config key 'kappa0_nbar0' only applies to channel = dipole")


def build_distribution(cfg: RunConfig) -> model.MotionalDistribution:
    if cfg.initial is None:
        raise ConfigError("config key 'initial' is required for this command")
    if cfg.initial == "fock":
        n_max = cfg.n_max if cfg.n_max is not None else cfg.fock_n
        return model.fock_dist(cfg.fock_n, n_max)
    if cfg.initial == "coherent":
        return model.coherent_dist(cfg.coherent_alpha, cfg.n_max)
    return model.thermal_dist(cfg.thermal_nbar, cfg.n_max)


def build_reservoir_spec(cfg: RunConfig) -> reservoir.ReservoirSpec:
    if cfg.channel is None:
        raise ConfigError("config key 'channel' is required for this command")
    if cfg.channel == "phenom":
        raise ConfigError("channel = phenom has no microscopic reservoir spec")
    return reservoir.ReservoirSpec(
        T_tilde=cfg.T_tilde,
        d=cfg.d,
        a_tilde=0.0,
        kappa0_nbar0=cfg.kappa0_nbar0,
        channel=cfg.channel,
    )


# ---------------------------------------------------------------------------
# Command implementations
# ---------------------------------------------------------------------------


def run_simulate(cfg: RunConfig) -> dynamics.TimeSeries:
    if cfg.channel is None:
        raise ConfigError("config key 'channel' is required for simulate")
    dist = build_distribution(cfg)
    grid = dynamics.default_time_grid(cfg.t_max_norm, cfg.samples)
    meta = cfg.as_metadata()
    if cfg.channel == "phenom":
        return dynamics.phenom_trace(dist, cfg.gamma0_tilde, cfg.nu, grid, params=meta)
    spec = build_reservoir_spec(cfg)
    state = model.initial_block_state(dist, "down")
    return dynamics.pdown_trace(state, spec, cfg.gamma0_tilde, grid,
                                solver=cfg.solver, form=cfg.form, params=meta)


def cmd_simulate(cfg: RunConfig, output: str, fmt: str) -> int:
    trace = run_simulate(cfg)
    text = dynamics.timeseries_to_csv(trace) if fmt == "csv" else dynamics.timeseries_to_json(trace)
    _write_text(output, text)
    return 0


def cmd_rates(cfg: RunConfig, n_max: int, output: str, fmt: str) -> int:
    if n_max < 0:
        raise ConfigError(f"rate table n_max must be >= 0, got {n_max}")
    if cfg.channel == "phenom":
        raise ConfigError("channel = phenom has no microscopic rate table; use fit-nu instead")
    spec = build_reservoir_spec(cfg)
    table = reservoir.rate_table(spec, cfg.gamma0_tilde if cfg.channel != "none" else 1.0, n_max)
    if fmt == "csv":
        text = reservoir.rate_table_to_csv(table)
    else:
        doc = {
            "channel": table.channel,
            "gamma0_tilde": table.gamma0_tilde,
            "rows": [
                [int(table.n[i]), float(table.omega_tilde[i]), float(table.kappa_tilde[i]),
                 float(table.f_ratio[i]), float(table.rate_tilde[i])]
                for i in range(table.n.size)
            ],
        }
        text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    _write_text(output, text)
    return 0


def run_fit_nu(cfg: RunConfig, n_range: tuple[int, int]):
    if cfg.channel not in ("dipole", "vibrational"):
        raise ConfigError("fit-nu requires channel = dipole or vibrational")
    lo, hi = n_range
    if lo < 0 or hi < lo + 2:
        raise ConfigError(f"fit window must satisfy 0 <= lo <= hi-2, got {lo}:{hi}")
    spec = build_reservoir_spec(cfg)
    ns = np.arange(lo, hi + 1)
    rates = reservoir.rate(ns, spec, cfg.gamma0_tilde)
    fit = analysis.fit_power_law(ns, rates)
    fitted = fit.gamma0_hat * (ns + 1.0) ** fit.nu_hat
    table = [[int(n), float(r), float(f)] for n, r, f in zip(ns, rates, fitted)]
    return fit, table


def cmd_fit_nu(cfg: RunConfig, n_range: tuple[int, int], output: str, fmt: str) -> int:
    fit, table = run_fit_nu(cfg, n_range)
    if fmt == "csv":
        lines = [
            f"# gamma0_hat = {fit.gamma0_hat:.15g}",
            f"# nu_hat = {fit.nu_hat:.15g}",
            f"# residual_rms = {fit.residual_rms:.15g}",
            "n,rate_tilde,rate_fit",
        ]
        lines += [f"{n:d},{r:.15g},{f:.15g}" for n, r, f in table]
        text = "\n".join(lines) + "\n"
    else:
        text = analysis.powerlaw_fit_to_json(fit, table)
    _write_text(output, text)
    return 0


SWEEP_AXES = ("d", "T_tilde", "alpha")


def cmd_sweep(cfg: RunConfig, axis: str, values: list, outdir: str,
              fmt: str, n_range: tuple[int, int]) -> int:
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    if not values:
        raise ConfigError("sweep values list must not be empty")
    try:
        os.makedirs(outdir, exist_ok=True)
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc
    ext = "csv" if fmt == "csv" else "json"
    artifacts = []
    for i, value in enumerate(values):
        point = RunConfig(**asdict(cfg))
        if axis == "d":
            point.d = float(value)
        elif axis == "T_tilde":
            point.T_tilde = float(value)
            if not (point.T_tilde > 0):
                raise ConfigError(f"sweep value T_tilde = {value} must be positive or inf")
        else:
            if point.initial != "coherent":
                raise ConfigError("sweep axis 'alpha' requires initial = coherent")
            point.coherent_alpha = float(value)
            if point.coherent_alpha < 0:
                raise ConfigError(f"sweep value alpha = {value} must be >= 0")
        name = f"{axis}-{i:03d}.{ext}"
        path = os.path.join(outdir, name)
        if axis == "alpha":
            cmd_simulate(point, path, fmt)
            kind = "simulate"
        else:
            cmd_fit_nu(point, n_range, path, fmt)
            kind = "fit-nu"
        artifacts.append({"value": "inf" if value == math.inf else float(value), "artifact": name})
    index = {"axis": axis, "command": kind, "points": artifacts}
    _write_text(os.path.join(outdir, "index.json"),
                json.dumps(index, sort_keys=True, indent=1) + "\n")
    return 0


RAMAN_KEYS = ("g01", "g02", "Delta", "k1x", "k2x", "mass", "omega_x")


def parse_raman_config(text: str) -> model.RamanInputs:
    pairs = read_key_values(text)
    for key in pairs:
        if key not in RAMAN_KEYS:
            raise ConfigError(f"unknown config key '{key}'")
    for key in RAMAN_KEYS:
        if key not in pairs:
            raise ConfigError(f"calibrate requires config key '{key}'")
    def _cplx(key):
        try:
            return complex(pairs[key])
        except ValueError:
            raise ConfigError(f"config key '{key}' must be a (complex) number") from None
    try:
        return model.RamanInputs(
            g01=_cplx("g01"),
            g02=_cplx("g02"),
            Delta=_parse_float("Delta", pairs["Delta"]),
            k1x=_parse_float("k1x", pairs["k1x"]),
            k2x=_parse_float("k2x", pairs["k2x"]),
            mass=_parse_float("mass", pairs["mass"]),
            omega_x=_parse_float("omega_x", pairs["omega_x"]),
        )
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from exc


def cmd_calibrate(inputs: model.RamanInputs, output: str, fmt: str) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ValidityWarning)
        coupling = model.raman_coupling(inputs)
    notes = [str(w.message) for w in caught if issubclass(w.category, ValidityWarning)]
    if fmt == "csv":
        rows = [
            ("g_re", coupling.g.real),
            ("g_im", coupling.g.imag),
            ("g_abs", abs(coupling.g)),
            ("delta_1", coupling.delta_1),
            ("delta_2", coupling.delta_2),
            ("x0", coupling.x0),
            ("eta", coupling.eta),
        ]
        text = "name,value\n" + "\n".join(f"{k},{v:.15g}" for k, v in rows) + "\n"
    else:
        doc = {
            "g": {"re": coupling.g.real, "im": coupling.g.imag},
            "g_abs": abs(coupling.g),
            "delta_1": coupling.delta_1,
            "delta_2": coupling.delta_2,
            "x0": coupling.x0,
            "eta": coupling.eta,
            "warnings": notes,
        }
        text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    _write_text(output, text)
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


class _IOFailure(RuntimeError):
    pass


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc}") from exc


def _read_text(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _parse_n_range(raw: str) -> tuple[int, int]:
    try:
        lo, _, hi = raw.partition(":")
        return int(lo), int(hi)
    except ValueError:
        raise ConfigError(f"--n-range must look like LO:HI, got {raw!r}") from None


def _parse_values(raw: str) -> list:
    values = []
    for tok in raw.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok == "inf":
            values.append(math.inf)
        else:
            try:
                values.append(float(tok))
            except ValueError:
                raise ConfigError(f"bad sweep value {tok!r}") from None
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ionjc",
        description="Dressed-state dephasing dynamics of a trapped-ion "
                    "anti-Jaynes-Cummings system",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output_help="output artifact path"):
        p.add_argument("--config", required=True, help="flat key = value config file")
        p.add_argument("--output", required=True, help=output_help)
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    common(sub.add_parser("simulate", help="write a population trace"))
    p_rates = sub.add_parser("rates", help="write a per-n rate table")
    common(p_rates)
    p_rates.add_argument("--n-max", type=int, default=None,
                         help="highest block index (default: config n_max, else 20)")
    p_fit = sub.add_parser("fit-nu", help="fit the power-law exponent of the rates")
    common(p_fit)
    p_fit.add_argument("--n-range", default="0:20", help="fit window LO:HI (inclusive)")
    p_sweep = sub.add_parser("sweep", help="run a parameter sweep")
    common(p_sweep, output_help="output directory for the artifact set")
    p_sweep.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated values; 'inf' allowed for T_tilde")
    p_sweep.add_argument("--n-range", default="0:20")
    common(sub.add_parser("calibrate", help="effective couplings from Raman beam parameters"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "calibrate":
            inputs = parse_raman_config(_read_text(args.config))
            return cmd_calibrate(inputs, args.output, args.format)
        cfg = parse_run_config(_read_text(args.config))
        if args.command == "simulate":
            return cmd_simulate(cfg, args.output, args.format)
        if args.command == "rates":
            n_max = args.n_max
            if n_max is None:
                n_max = cfg.n_max if cfg.n_max is not None else 20
            return cmd_rates(cfg, n_max, args.output, args.format)
        if args.command == "fit-nu":
            return cmd_fit_nu(cfg, _parse_n_range(args.n_range), args.output, args.format)
        if args.command == "sweep":
            return cmd_sweep(cfg, args.axis, _parse_values(args.values),
                             args.output, args.format, _parse_n_range(args.n_range))
        raise ConfigError(f"unknown command {args.command!r}")
    except _IOFailure as exc:
        print(f"ionjc: i/o error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError, ZeroDivisionError, IntegrationError) as exc:
        print(f"ionjc: config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

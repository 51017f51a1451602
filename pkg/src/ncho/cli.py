"""Command-line front end: sweeps, single-point reports, state export, verify.

Subcommands
-----------
sweep   closed-form (optionally quadrature) information reports over a
        Cartesian (theta, eta) grid, one CSV row per point, theta-major.
info    one configuration as a JSON report to stdout.
state   sampled position/momentum fields written as CSV + binary.
verify  the full oracle suite; exit code 0 only if every check passes.

All values can come from a JSON config file (--config); command-line flags
win.  Runs are fully deterministic: identical configurations produce
byte-identical outputs.

Exit codes: 0 success, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .model import (
    ConstantSignal,
    DriveField,
    NCSpace,
    OscillatorConfig,
    RampSignal,
    SinusoidSignal,
    TabulatedSignal,
    ZeroSignal,
)
from .wavefunctions import OscillatorSystem, evaluate_on_grid, momentum_numeric
from .infotheory import (
    InfoReport,
    closed_forms,
    info_from_state,
    nc_uncertainty_bounds,
)
from .validation import run_verification_suite

__all__ = ["RunConfig", "main"]


def _parse_values(text: str, name: str) -> list[float]:
    """A scalar like '1.0' or a sweep range 'min:max:count'."""
    parts = str(text).split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ValueError
            return [float(v) for v in np.linspace(lo, hi, count)]
    except ValueError:
        pass
    raise ValueError(f"{name} must be a number or min:max:count, got {text!r}")


def _parse_drive_spec(spec: str):
    kind, _, rest = str(spec).partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind == "zero":
            return ZeroSignal()
        if kind == "const":
            return ConstantSignal(float(args[0]))
        if kind == "sin":
            phase = float(args[2]) if len(args) > 2 else 0.0
            return SinusoidSignal(float(args[0]), float(args[1]), phase)
        if kind == "ramp":
            offset = float(args[1]) if len(args) > 1 else 0.0
            return RampSignal(float(args[0]), offset)
        if kind == "table":
            data = np.loadtxt(args[0], delimiter=",", comments="#")
            return TabulatedSignal(data[:, 0], data[:, 1])
    except (IndexError, ValueError, OSError) as exc:
        raise ValueError(f"bad drive spec {spec!r}: {exc}") from None
    raise ValueError(
        f"unknown drive preset {kind!r} "
        "(use zero | const:LEVEL | sin:AMP:OMEGA[:PHASE] | "
        "ramp:RATE[:OFFSET] | table:PATH)"
    )


@dataclass
class RunConfig:
    """Everything one run needs; serializable to/from a flat JSON object."""

    dim: int = 2
    theta: list = field(default_factory=lambda: [0.0])
    eta: list = field(default_factory=lambda: [0.0])
    m: float = 1.0
    omega0: float = 1.0
    q: float = 1.0
    hbar: float = 1.0
    drive: list = field(default_factory=list)  # per-axis spec strings
    t: float = 0.0
    grid_points: int | None = None
    grid_sigmas: float = 8.0
    quadrature: bool = False
    out: str | None = None
    perturb_phase: float = 0.0
    n: list = field(default_factory=list)  # quantum numbers for `state`
    domain: str = "both"

    def validate(self):
        if self.dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        if not isinstance(self.theta, list) or not isinstance(self.eta, list):
            raise ValueError("theta and eta must be numbers or sweep lists")
        if any(v < 0 for v in self.theta) or any(v < 0 for v in self.eta):
            raise ValueError("theta and eta must be nonnegative")
        if self.t < 0:
            raise ValueError("t must be nonnegative")
        if not isinstance(self.drive, list):
            raise ValueError("drive must be a list of per-axis spec strings")
        if len(self.drive) > self.dim:
            raise ValueError("more drive specs than axes")
        if self.grid_points is not None and self.grid_points < 8:
            raise ValueError("grid_points must be at least 8")
        if self.grid_sigmas <= 0:
            raise ValueError("grid_sigmas must be positive")
        if self.domain not in ("position", "momentum", "both"):
            raise ValueError("domain must be position, momentum or both")

    def scalar(self, name: str) -> float:
        values = getattr(self, name)
        if len(values) != 1:
            raise ValueError(f"{name} must be a single value here, got a sweep")
        return values[0]

    def drive_field(self) -> DriveField:
        signals = [_parse_drive_spec(s) for s in self.drive]
        signals += [ZeroSignal()] * (self.dim - len(signals))
        return DriveField(tuple(signals))

    def oscillator(self) -> OscillatorConfig:
        return OscillatorConfig(self.m, self.omega0, self.q, self.drive_field())

    def space(self, theta: float, eta: float) -> NCSpace:
        return NCSpace(theta, eta, self.dim, self.hbar)


def _load_config(path: str) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return data


def _build_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = replace(cfg, **_load_config(args.config))
    overrides = {}
    for name in ("dim", "m", "omega0", "q", "hbar", "t", "grid_points",
                 "grid_sigmas", "out", "perturb_phase", "domain"):
        value = getattr(args, name.replace("-", "_"), None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "theta", None) is not None:
        overrides["theta"] = _parse_values(args.theta, "theta")
    if getattr(args, "eta", None) is not None:
        overrides["eta"] = _parse_values(args.eta, "eta")
    if getattr(args, "drive", None):
        overrides["drive"] = list(args.drive)
    if getattr(args, "quadrature", False):
        overrides["quadrature"] = True
    if getattr(args, "n", None) is not None:
        overrides["n"] = [int(v) for v in args.n.split(",")]
    cfg = replace(cfg, **overrides)
    # config files may hold scalars or "min:max:count" strings
    for name in ("theta", "eta"):
        value = getattr(cfg, name)
        if isinstance(value, (int, float, str)):
            setattr(cfg, name, _parse_values(value, name))
    cfg.validate()
    return cfg


def _make_system(config: RunConfig, cfg, space) -> OscillatorSystem:
    horizon = max(config.t, 0.5) + 0.5
    return OscillatorSystem(cfg, space, window=(0.0, horizon))


def _quadrature_report(config: RunConfig, theta: float, eta: float) -> InfoReport:
    cfg = config.oscillator()
    space = config.space(theta, eta)
    system = _make_system(config, cfg, space)
    state = system.state((0,) * config.dim, config.t)
    return info_from_state(state, sigmas=config.grid_sigmas,
                           base_points=config.grid_points)


def cmd_sweep(config: RunConfig) -> int:
    cfg = config.oscillator()
    lines = [InfoReport.CSV_HEADER]
    for theta in config.theta:
        for eta in config.eta:
            lines.append(closed_forms(cfg, config.space(theta, eta)).to_csv_row())
            if config.quadrature:
                lines.append(_quadrature_report(config, theta, eta).to_csv_row())
    text = "\n".join(lines) + "\n"
    if config.out:
        with open(config.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_info(config: RunConfig) -> int:
    theta, eta = config.scalar("theta"), config.scalar("eta")
    cfg = config.oscillator()
    space = config.space(theta, eta)
    closed = closed_forms(cfg, space)
    bounds = nc_uncertainty_bounds(closed, space)
    payload = {
        "closed_form": closed.to_json_dict(),
        "uncertainty_floors": {
            "delta_r": bounds.delta_r,
            "delta_p": bounds.delta_p,
            "floor_r": bounds.floor_r,
            "floor_p": bounds.floor_p,
            "margin_r": bounds.margin_r,
            "margin_p": bounds.margin_p,
            "satisfied": bounds.satisfied,
        },
    }
    if config.quadrature:
        payload["quadrature"] = _quadrature_report(config, theta, eta).to_json_dict()
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_state(config: RunConfig) -> int:
    theta, eta = config.scalar("theta"), config.scalar("eta")
    cfg = config.oscillator()
    space = config.space(theta, eta)
    system = _make_system(config, cfg, space)
    ns = tuple(config.n) if config.n else (0,) * config.dim
    state = system.state(ns, config.t, phase_drift=config.perturb_phase)
    prefix = config.out or "state"

    written = []
    pos = evaluate_on_grid(state, domain="position", sigmas=config.grid_sigmas,
                           base_points=config.grid_points)
    if config.domain in ("position", "both"):
        pos.to_csv(f"{prefix}_position.csv")
        pos.to_binary(f"{prefix}_position.bin")
        written += [f"{prefix}_position.csv", f"{prefix}_position.bin"]
    if config.domain in ("momentum", "both"):
        mom = momentum_numeric(pos, space.hbar)
        mom.to_csv(f"{prefix}_momentum.csv")
        mom.to_binary(f"{prefix}_momentum.bin")
        written += [f"{prefix}_momentum.csv", f"{prefix}_momentum.bin"]
    for path in written:
        sys.stdout.write(path + "\n")
    return 0


def cmd_verify(config: RunConfig) -> int:
    theta, eta = config.scalar("theta"), config.scalar("eta")
    cfg = config.oscillator()
    space = config.space(theta, eta)
    table = run_verification_suite(
        cfg, space, t=config.t, perturb_phase=config.perturb_phase,
        sigmas=config.grid_sigmas, base_points=config.grid_points,
    )
    sys.stdout.write(table.summary() + "\n")
    if config.out:
        table.to_csv(config.out)
    return 0 if table.all_passed else 1


def _add_common(parser):
    parser.add_argument("--config", help="JSON config file; flags override it")
    parser.add_argument("--dim", type=int, choices=(2, 3))
    parser.add_argument("--theta", help="scalar or min:max:count")
    parser.add_argument("--eta", help="scalar or min:max:count")
    parser.add_argument("--m", type=float, help="mass (default 1)")
    parser.add_argument("--omega0", type=float, help="trap frequency (default 1)")
    parser.add_argument("--q", type=float, help="charge (default 1)")
    parser.add_argument("--hbar", type=float, help="unit of action (default 1)")
    parser.add_argument("--drive", action="append",
                        help="per-axis drive spec, repeatable: zero | "
                             "const:LEVEL | sin:AMP:OMEGA[:PHASE] | "
                             "ramp:RATE[:OFFSET] | table:PATH")
    parser.add_argument("--t", type=float, help="evaluation time (default 0)")
    parser.add_argument("--grid-points", type=int, dest="grid_points",
                        help="base points per axis")
    parser.add_argument("--grid-sigmas", type=float, dest="grid_sigmas",
                        help="half extent in Gaussian widths (default 8)")
    parser.add_argument("--quadrature", action="store_true",
                        help="also compute the quadrature route")
    parser.add_argument("--out", help="output path (sweep/verify) or prefix (state)")
    parser.add_argument("--perturb-phase", type=float, dest="perturb_phase",
                        help="test hook: corrupt the phase by this rate")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncho",
        description="Driven harmonic oscillator on a noncommutative phase "
                    "space: exact states, Fisher information and Shannon "
                    "entropy with closed-form and quadrature routes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="CSV of information reports over a "
                                     "(theta, eta) grid")
    _add_common(p)

    p = sub.add_parser("info", help="single-point JSON report")
    _add_common(p)

    p = sub.add_parser("state", help="export sampled wavefunction fields")
    _add_common(p)
    p.add_argument("--n", help="quantum numbers, e.g. 1,0 (default ground)")
    p.add_argument("--domain", choices=("position", "momentum", "both"))

    p = sub.add_parser("verify", help="run the oracle suite; exit 0 iff all pass")
    _add_common(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        config = _build_config(args)
        handler = {
            "sweep": cmd_sweep,
            "info": cmd_info,
            "state": cmd_state,
            "verify": cmd_verify,
        }[args.command]
        return handler(config)
    except (ValueError, MemoryError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())

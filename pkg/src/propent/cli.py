"""Command-line front end: concurrence and tangle sweeps, identity reports, CSV output.

Every CSV starts with ``# key = value`` lines echoing the resolved
configuration.  Those lines are valid ``--config`` input, so a run can be
reproduced from its own output.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import ghz
from .entanglement import TwoPhotonAmplitudes, concurrence_pure, three_tangle
from .postselect import DEFAULT_MAX_N, detected_state, farfield_two_photon_state
from .qstate import PureState, ZeroStateError, basis_state, normalize, superposition
from .scene import EmitterModel, build_array_scene, build_two_source_scene

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ALL_ZERO = 3

TWO_PI = 2 * math.pi


class ConfigError(ValueError):
    pass


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"not a comma-separated list of numbers: {text!r}") from None
    return vals


def _parse_model(text: str) -> str:
    t = text.strip().lower()
    if t not in ("pinhole", "dipole"):
        raise ConfigError(f"emitter model must be pinhole or dipole, got {text!r}")
    return t


PARSERS: dict[str, Callable[[str], object]] = {
    "command": str,
    "steps": int,
    "min": float,
    "max": float,
    "log": _parse_bool,
    "emitter_model": _parse_model,
    "state": str,
    "kd": _parse_float_list,
    "kr": float,
    "kz": float,
    "theta": float,
    "n": int,
    "n_max": int,
    "eta_q": float,
    "omega": float,
    "max_n": int,
}

_SCAN = {"emitter_model": "dipole", "state": "xy+iyx", "max_n": DEFAULT_MAX_N}

DEFAULTS: dict[str, dict[str, object]] = {
    "fig2": {"min": 0.0, "max": 180.0, "steps": 361, "log": False},
    "scan-r": {**_SCAN, "kd": (3.45,), "theta": 45.0, "min": 1e-2, "max": 1e3, "steps": 400, "log": True},
    "scan-theta": {**_SCAN, "kd": (4.45,), "kr": 1000.0, "min": -90.0, "max": 90.0, "steps": 361, "log": False},
    "fig8": {"emitter_model": "dipole", "max_n": DEFAULT_MAX_N, "kd": (TWO_PI, 2 * TWO_PI),
             "min": 0.1, "max": 1e5, "steps": 200, "log": True},
    "ghz": {"n": 8},
    "identity": {"n_max": 21},
    "coincidence": {"n": 10, "eta_q": 1.0, "omega": 4 * math.pi},
}


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ",".join(format_value(v) for v in value)
    return str(value)


def parse_config_lines(lines) -> dict[str, object]:
    """Parse ``key = value`` lines; blank lines and ``#`` comments are skipped."""
    out: dict[str, object] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.rstrip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            out[key] = PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    return out


def parse_provenance(text: str) -> dict[str, object]:
    """Recover the configuration from the ``# key = value`` header of a CSV."""
    lines = []
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        lines.append(line[1:])
    return parse_config_lines(lines)


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    min: float
    max: float
    steps: int
    log: bool = False

    def __post_init__(self):
        if self.steps < 2:
            raise ConfigError("steps must be at least 2")
        if not self.min < self.max:
            raise ConfigError("min must be smaller than max")
        if self.log and self.min <= 0:
            raise ConfigError("a log sweep needs min > 0")

    def values(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.min, self.max, self.steps)
        return np.linspace(self.min, self.max, self.steps)


@dataclass
class Dataset:
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    provenance: dict[str, object] = field(default_factory=dict)
    skipped: int = 0

    def to_csv(self) -> str:
        out = [f"# {k} = {format_value(v)}" for k, v in self.provenance.items()]
        out.append(",".join(self.columns))
        for row in self.rows:
            out.append(",".join(_fmt(x) for x in row))
        return "\n".join(out) + "\n"


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".12g")


def state_from_spec(spec: str) -> PureState:
    """Two-emitter initial state from a CLI name.

    ``xy`` / ``hv``, ``xy+iyx``, ``xy+yx`` or ``custom:`` followed by eight
    comma-separated numbers (re, im of the xx, xy, yx, yy amplitudes).
    """
    s = spec.strip().lower()
    if s in ("xy", "hv"):
        return basis_state("HV")
    if s in ("xy+iyx", "hv+ivh"):
        return normalize(superposition({"HV": 1, "VH": 1j}))[0]
    if s in ("xy+yx", "hv+vh"):
        return normalize(superposition({"HV": 1, "VH": 1}))[0]
    if s.startswith("custom:"):
        vals = _parse_float_list(s[len("custom:"):])
        if len(vals) != 8:
            raise ConfigError("custom state needs 8 numbers: re,im for xx, xy, yx, yy")
        amps = [complex(vals[2 * i], vals[2 * i + 1]) for i in range(4)]
        try:
            return normalize(PureState(amps))[0]
        except ZeroStateError:
            raise ConfigError("custom state is all zero") from None
    raise ConfigError(f"unknown state {spec!r}")


def _diag(msg: str):
    print(f"propent: {msg}", file=sys.stderr)


def _sweep(cfg, variable: str) -> SweepSpec:
    return SweepSpec(variable, cfg["min"], cfg["max"], cfg["steps"], cfg["log"])


def _single_kd(cfg) -> float:
    kd = cfg["kd"]
    if len(kd) != 1:
        raise ConfigError("this command takes a single --kd value")
    if not kd[0] > 0:
        raise ConfigError("kd must be positive")
    return kd[0]


def _run_sweep(ds: Dataset, xs, point: Callable[[float], tuple]):
    for x in xs:
        try:
            row = point(float(x))
        except (ZeroStateError, ArithmeticError, ValueError) as exc:
            _diag(f"skipped {ds.columns[0]}={float(x):.12g}: {exc}")
            ds.skipped += 1
            continue
        if not all(np.isfinite(v) for v in row):
            _diag(f"skipped {ds.columns[0]}={float(x):.12g}: non-finite value")
            ds.skipped += 1
            continue
        ds.rows.append(row)


def cmd_fig2(cfg) -> Dataset:
    """Far-field concurrence versus path phase for |HV> and (|HV> + i|VH>)/sqrt(2)."""
    hv = TwoPhotonAmplitudes(beta=1)
    hv_ivh = TwoPhotonAmplitudes(beta=1 / math.sqrt(2), gamma=1j / math.sqrt(2))
    ds = Dataset(["phi", "C_HV", "C_HViVH"])

    def point(phi_deg):
        phi = math.radians(phi_deg)
        return (phi_deg,
                concurrence_pure(farfield_two_photon_state(hv, phi)),
                concurrence_pure(farfield_two_photon_state(hv_ivh, phi)))

    _run_sweep(ds, _sweep(cfg, "phi").values(), point)
    return ds


def _two_source_concurrence(cfg, kd, kr, theta_deg, state):
    scene = build_two_source_scene(kd, kr, math.radians(theta_deg), EmitterModel(cfg["emitter_model"]))
    return concurrence_pure(detected_state(scene, state, max_n=cfg["max_n"]).state)


def cmd_scan_r(cfg) -> Dataset:
    kd = _single_kd(cfg)
    state = state_from_spec(cfg["state"])
    ds = Dataset(["kr", "concurrence"])
    _run_sweep(ds, _sweep(cfg, "kr").values(),
               lambda kr: (kr, _two_source_concurrence(cfg, kd, kr, cfg["theta"], state)))
    return ds


def cmd_scan_theta(cfg) -> Dataset:
    kd = _single_kd(cfg)
    state = state_from_spec(cfg["state"])
    if cfg["min"] < -90 or cfg["max"] > 90:
        raise ConfigError("theta sweep must stay within [-90, 90] degrees")
    ds = Dataset(["theta", "concurrence"])
    _run_sweep(ds, _sweep(cfg, "theta").values(),
               lambda th: (th, _two_source_concurrence(cfg, kd, cfg["kr"], th, state)))
    return ds


def cmd_fig8(cfg) -> Dataset:
    """Three-tangle of the detected three-photon state versus detector height."""
    kds = cfg["kd"]
    if any(not kd > 0 for kd in kds):
        raise ConfigError("kd must be positive")
    model = EmitterModel(cfg["emitter_model"])
    magic = ghz.magic_product_state(3)
    ds = Dataset(["kz"] + [f"tau_d{i + 1}" for i in range(len(kds))])

    def point(kz):
        taus = []
        for kd in kds:
            chi = detected_state(build_array_scene(3, kd, kz, model), magic, max_n=cfg["max_n"]).state
            taus.append(three_tangle(chi).tau)
        return (kz, *taus)

    _run_sweep(ds, _sweep(cfg, "kz").values(), point)
    return ds


def cmd_ghz(cfg) -> Dataset:
    n_top = cfg["n"]
    if not 2 <= n_top <= ghz.MAX_N:
        raise ConfigError(f"--n must lie in [2, {ghz.MAX_N}]")
    ds = Dataset(["n", "fidelity", "infidelity", "condition_a", "condition_b"])
    for n in range(2, n_top + 1):
        f = ghz.ghz_fidelity(n)
        rep = ghz.verify_conditions(n)
        ds.rows.append((n, f, 1 - f, rep.even_max_rel, rep.odd_ratio_max_dev))
    return ds


def cmd_identity(cfg) -> Dataset:
    n_max = cfg["n_max"]
    if not 2 <= n_max <= 200:
        raise ConfigError("--n-max must lie in [2, 200]")
    ds = Dataset(["n", "m", "lhs", "rhs", "rel_error"])
    for n in range(2, n_max + 1):
        for m in range(1, n + 1, 2):
            if (m - 1) // 2 > (n - 1) // 2:
                break
            lhs, rhs = ghz.cotangent_identity(n, m)
            ds.rows.append((n, m, lhs, rhs, abs(lhs - rhs) / rhs))
    return ds


def cmd_coincidence(cfg) -> Dataset:
    n_top = cfg["n"]
    if n_top < 1:
        raise ConfigError("--n must be at least 1")
    ds = Dataset(["n", "eta", "p_n", "stirling", "stirling_ratio"])
    for n in range(1, n_top + 1):
        spec = ghz.coincidence_probability(n, cfg["eta_q"], cfg["omega"])
        ds.rows.append((n, spec.eta, spec.p_n, spec.stirling, spec.stirling_ratio))
    return ds


COMMANDS = {
    "fig2": cmd_fig2,
    "scan-r": cmd_scan_r,
    "scan-theta": cmd_scan_theta,
    "fig8": cmd_fig8,
    "ghz": cmd_ghz,
    "identity": cmd_identity,
    "coincidence": cmd_coincidence,
}

SWEEP_COMMANDS = {"fig2", "scan-r", "scan-theta", "fig8"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="output CSV (default: stdout)")
    common.add_argument("--config", metavar="PATH", help="key = value configuration file")
    common.add_argument("--steps", type=int)
    common.add_argument("--min", type=float)
    common.add_argument("--max", type=float)
    common.add_argument("--log", action="store_const", const=True, help="logarithmic sweep")
    common.add_argument("--emitter-model", choices=["pinhole", "dipole"])
    common.add_argument("--state", help="xy, xy+iyx, xy+yx, hv or custom:<8 numbers>")
    common.add_argument("--kd", type=_parse_float_list, help="emitter spacing k*d (comma list for fig8)")
    common.add_argument("--kr", type=float, help="detector distance k*r")
    common.add_argument("--kz", type=float, help="detector height k*z")
    common.add_argument("--theta", type=float, help="detector angle in degrees")
    common.add_argument("--n", type=int)
    common.add_argument("--n-max", type=int)
    common.add_argument("--eta-q", type=float, help="detector quantum efficiency")
    common.add_argument("--omega", type=float, help="total detection solid angle (sr)")
    common.add_argument("--max-n", type=int, help="raise the permutation-sum cap")

    parser = argparse.ArgumentParser(prog="propent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def resolve_config(command: str, args: argparse.Namespace) -> dict[str, object]:
    """Command defaults, overridden by the config file, overridden by explicit flags."""
    defaults = DEFAULTS[command]
    cfg = dict(defaults)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                from_file = parse_config_lines(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        file_cmd = from_file.pop("command", command)
        if file_cmd != command:
            raise ConfigError(f"config file is for command {file_cmd!r}, not {command!r}")
        for key, value in from_file.items():
            if key in defaults:
                cfg[key] = value
            else:
                _diag(f"config key {key!r} is not used by {command}")
    for key in PARSERS:
        if key == "command":
            continue
        value = getattr(args, key, None)
        if value is None:
            continue
        if key in defaults:
            cfg[key] = value
        else:
            raise ConfigError(f"--{key.replace('_', '-')} is not used by {command}")
    return {"command": command, **cfg}


def run(command: str, cfg: dict[str, object]) -> Dataset:
    ds = COMMANDS[command](cfg)
    ds.provenance = dict(cfg)
    return ds


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    try:
        cfg = resolve_config(command, args)
        if cfg.get("max_n", DEFAULT_MAX_N) < 2:
            raise ConfigError("--max-n must be at least 2")
        ds = run(command, cfg)
    except (ConfigError, ValueError) as exc:
        _diag(str(exc))
        return EXIT_USAGE
    text = ds.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if command in SWEEP_COMMANDS and not ds.rows:
        _diag("every sweep point was skipped")
        return EXIT_ALL_ZERO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

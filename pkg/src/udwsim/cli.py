"""Command-line front end: ``udwsim run``, ``udwsim fig2`` and ``udwsim check``.

Scenario files are TOML.  Every physical quantity carries its unit in the key
name (``gap_rad_per_s``, ``L_um``); unknown keys are rejected, so a bare
``gap = 1.0`` is a configuration error rather than a silent guess.

Exit codes: 0 success, 1 physics-domain or numerical failure (including a
failed ``check``), 2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import time
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .analogy import amplitude_equivalence_check
from .checks import QUOTED_GAP, run_checks
from .dispersion import Chi2Profile, exponential_epsilon_profile, ktp_operating_point, load_sellmeier
from .errors import ConfigError, DomainError
from .oscquad import QuadConfig, QuadratureError
from .spdc import PoledReference, PumpPulse, SpdcScenario, WaveguideSpec, poled_reference, spdc_amplitude
from .sweep import DEFAULT_A_POINTS, DEFAULT_LENGTHS_UM, default_accelerations, fig2_sweep
from .udw import (DetectorSpec, FieldMode, SwitchingFunction, Trajectory, accel_closed_form,
                  b_coefficient, inertial_amplitude, transition_amplitude)

__all__ = ["main", "load_config", "ScenarioConfig", "WORKERS_ENV"]

WORKERS_ENV = "UDWSIM_WORKERS"
EXIT_OK, EXIT_DOMAIN, EXIT_CONFIG = 0, 1, 2

KINDS = {"udw": "udw", "spdc": "spdc", "analogy-check": "spdc", "fig2-sweep": "sweep"}

_REAL = (int, float)
# section -> key -> (accepted types, default); a default of _REQUIRED must be given
_REQUIRED = object()
_SCHEMA = {
    "output": {
        "dir_path": (str, "udwsim-out"),
        "csv_name": (str, "results.csv"),
    },
    "quad": {
        "rel_tol": (_REAL, 1e-8),
        "abs_tol": (_REAL, 0.0),
        "max_phase_per_panel_rad": (_REAL, math.pi / 2),
        "max_panels": (int, 200_000),
        "method": (str, "auto"),
    },
    "udw": {
        "trajectory": (str, _REQUIRED),
        "gap_rad_per_s": (_REAL, _REQUIRED),
        "omega_rad_per_s": (_REAL, _REQUIRED),
        "velocity_c": (_REAL, 0.0),
        "x0_light_s": (_REAL, 0.0),
        "accel_per_s": (_REAL, None),
        "q_offset_s": (_REAL, 0.0),
        "switching": (str, "rect"),
        "tau_i_s": (_REAL, None),
        "tau_f_s": (_REAL, None),
        "center_s": (_REAL, 0.0),
        "width_s": (_REAL, None),
        "switch_off": (str, "sudden"),
        "coupling_dimensionless": (_REAL, 1.0),
        "monopole_dimensionless": (_REAL, 1.0),
    },
    "spdc": {
        "omega3_rad_per_s": (_REAL, 3.6e15),
        "omega2_rad_per_s": (_REAL, 2.0e15),
        "L_um": (_REAL, _REQUIRED),
        "window": (str, "centered"),
        "profile": (str, "uniform"),
        "accel_per_s": (_REAL, None),
        "poling_period_um": (_REAL, None),
        "duty_fraction": (_REAL, 0.5),
        "pump_duration_s": (_REAL, 1e-12),
        "pump_energy_J": (_REAL, 1e-9),
        "area_um2": (_REAL, 25.0),
    },
    "sweep": {
        "lengths_um": (list, list(DEFAULT_LENGTHS_UM)),
        "a_min_per_s": (_REAL, None),
        "a_max_per_s": (_REAL, None),
        "a_points": (int, DEFAULT_A_POINTS),
        "workers": (int, None),
        "max_length_um": (_REAL, 100.0),
    },
}
_CHOICES = {
    ("quad", "method"): ("auto", "adaptive_gk", "filon"),
    ("udw", "trajectory"): ("inertial", "uniform_accel"),
    ("udw", "switching"): ("rect", "gaussian"),
    ("udw", "switch_off"): ("sudden", "adiabatic"),
    ("spdc", "window"): ("centered", "origin"),
    ("spdc", "profile"): ("uniform", "exponential", "poled"),
}

_RELOC = (
    "Omega from the Sellmeier set; the quoted 1.8e14 rad/s is only reproduced to a factor of "
    "two because the quoted parameters are not mutually consistent"
)


# ------------------------------------------------------------------ config


class _Locator:
    """Maps (section, key) to a 1-based line/column in the raw TOML text."""

    _HEADER = re.compile(r"^\s*\[\s*([A-Za-z0-9_.-]+)\s*\]")
    _KEY = re.compile(r"^(\s*)([A-Za-z0-9_-]+)\s*=")

    def __init__(self, text):
        self.positions = {}
        section = None
        for number, raw in enumerate(text.splitlines(), start=1):
            head = self._HEADER.match(raw)
            if head:
                section = head.group(1)
                self.positions.setdefault((section, None), (number, raw.index("[") + 1))
                continue
            key = self._KEY.match(raw)
            if key:
                self.positions.setdefault((section, key.group(2)), (number, len(key.group(1)) + 1))

    def __call__(self, section, key=None):
        return self.positions.get((section, key)) or self.positions.get((section, None)) or (None, None)


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    sections: dict
    source: str = "<string>"

    @property
    def output(self):
        return self.sections["output"]

    @property
    def params(self):
        return self.sections[KINDS[self.kind]]

    def quad(self):
        q = self.sections["quad"]
        try:
            return QuadConfig(rel_tol=float(q["rel_tol"]), abs_tol=float(q["abs_tol"]),
                              max_phase_per_panel=float(q["max_phase_per_panel_rad"]),
                              max_panels=int(q["max_panels"]), method=q["method"])
        except DomainError as exc:
            raise ConfigError(f"[quad] {exc}") from exc

    def echo(self):
        return {"kind": self.kind, **self.sections}


def _type_ok(value, types):
    if isinstance(value, bool):
        return types is bool
    return isinstance(value, types)


def _suggest(section, key):
    stems = [k for k in _SCHEMA[section] if k.startswith(key + "_")]
    if stems:
        return f"; physical quantities need a unit suffix, did you mean {stems[0]!r}?"
    return ""


def load_config(text, source="<string>"):
    """Parse and validate a scenario file; raises :class:`ConfigError`."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        col = getattr(exc, "colno", None)
        if line is None:
            m = re.search(r"line (\d+), column (\d+)", str(exc))
            line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
        msg = getattr(exc, "msg", str(exc))
        raise ConfigError(f"{source}: TOML syntax error: {msg}", line, col) from exc
    where = _Locator(text)

    kind = raw.pop("kind", None)
    if kind is None:
        raise ConfigError(f"{source}: missing top-level key 'kind'", 1, 1)
    if kind not in KINDS:
        raise ConfigError(f"{source}: kind must be one of {sorted(KINDS)}, got {kind!r}", *where(None, "kind"))
    allowed = {"output", "quad", KINDS[kind]}
    sections = {}
    for name, body in raw.items():
        if name not in allowed:
            what = "section" if isinstance(body, dict) else "key"
            raise ConfigError(f"{source}: unknown {what} {name!r} for kind {kind!r}",
                              *where(name) if isinstance(body, dict) else where(None, name))
        if not isinstance(body, dict):
            raise ConfigError(f"{source}: {name!r} must be a table", *where(None, name))
    for name in sorted(allowed):
        body = dict(raw.get(name, {}))
        schema = _SCHEMA[name]
        out = {}
        for key, value in body.items():
            if key not in schema:
                raise ConfigError(f"{source}: unknown key {key!r} in [{name}]{_suggest(name, key)}",
                                  *where(name, key))
            types, _ = schema[key]
            if not _type_ok(value, types):
                raise ConfigError(f"{source}: [{name}] {key} has the wrong type ({type(value).__name__})",
                                  *where(name, key))
            if isinstance(value, float) and not math.isfinite(value):
                raise ConfigError(f"{source}: [{name}] {key} must be finite", *where(name, key))
            choices = _CHOICES.get((name, key))
            if choices and value not in choices:
                raise ConfigError(f"{source}: [{name}] {key} must be one of {list(choices)}, got {value!r}",
                                  *where(name, key))
            out[key] = value
        for key, (_, default) in schema.items():
            if key not in out:
                if default is _REQUIRED:
                    raise ConfigError(f"{source}: [{name}] is missing required key {key!r}", *where(name))
                out[key] = list(default) if isinstance(default, list) else default
        sections[name] = out
    cfg = ScenarioConfig(kind, sections, source)
    _validate(cfg, where)
    return cfg


def _validate(cfg, where):
    name = KINDS[cfg.kind]
    p = cfg.params

    def fail(key, message):
        raise ConfigError(f"{cfg.source}: [{name}] {key}: {message}", *where(name, key))

    def positive(*keys):
        for key in keys:
            if p[key] is not None and not p[key] > 0:
                fail(key, "must be positive")

    if name == "udw":
        positive("omega_rad_per_s", "accel_per_s", "width_s")
        if p["trajectory"] == "uniform_accel" and p["accel_per_s"] is None:
            fail("accel_per_s", "required for a uniform_accel trajectory")
        if not -1 < p["velocity_c"] < 1:
            fail("velocity_c", "must lie strictly between -1 and 1")
        if p["switching"] == "rect":
            if p["tau_i_s"] is None or p["tau_f_s"] is None:
                fail("tau_i_s", "rect switching needs tau_i_s and tau_f_s")
            if not p["tau_i_s"] < p["tau_f_s"]:
                fail("tau_f_s", "must exceed tau_i_s")
        elif p["width_s"] is None:
            fail("width_s", "required for gaussian switching")
    elif name == "spdc":
        positive("omega3_rad_per_s", "omega2_rad_per_s", "L_um", "poling_period_um",
                 "pump_duration_s", "pump_energy_J", "area_um2")
        if not p["omega2_rad_per_s"] < p["omega3_rad_per_s"]:
            fail("omega2_rad_per_s", "must be below omega3_rad_per_s")
        if p["profile"] == "exponential" and p["accel_per_s"] is None:
            fail("accel_per_s", "required for the exponential profile")
        if not 0 < p["duty_fraction"] < 1:
            fail("duty_fraction", "must lie strictly between 0 and 1")
        if cfg.kind == "analogy-check" and p["profile"] == "poled":
            fail("profile", "analogy-check supports the uniform and exponential profiles")
    else:
        lengths = p["lengths_um"]
        if not lengths:
            fail("lengths_um", "must not be empty")
        if any(not _type_ok(x, _REAL) or not x > 0 for x in lengths):
            fail("lengths_um", "entries must be positive numbers")
        if (p["a_min_per_s"] is None) != (p["a_max_per_s"] is None):
            fail("a_min_per_s", "give both a_min_per_s and a_max_per_s or neither")
        positive("a_min_per_s", "a_max_per_s", "max_length_um", "workers")
        if p["a_min_per_s"] is not None and not p["a_min_per_s"] < p["a_max_per_s"]:
            fail("a_max_per_s", "must exceed a_min_per_s")
        if p["a_points"] < 2:
            fail("a_points", "need at least two points")


# ------------------------------------------------------------------ runners


def _fmt(x):
    return format(float(x), ".17g")


def _csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _operating_point_info(op):
    return {
        "omega1_rad_per_s": op.omega1,
        "omega2_rad_per_s": op.omega2,
        "omega3_rad_per_s": op.omega3,
        "wavelengths_nm": list(op.wavelengths_nm()),
        "delta_k0_per_m": op.delta_k0,
        "inv_group_velocity_s_per_m": op.v_inv,
        "scaling_velocity_m_per_s": op.v,
        "omega_tilde_per_m": op.omega_tilde,
        "gap_rad_per_s": op.gap,
        "gap_ratio_to_quoted": op.gap / QUOTED_GAP,
        "quoted_gap_rad_per_s": QUOTED_GAP,
        "poling_period_um": op.poling_period * 1e6,
        "note": _RELOC,
    }


def _run_udw(cfg):
    p = cfg.params
    spec = DetectorSpec.constant(p["gap_rad_per_s"], p["coupling_dimensionless"], p["monopole_dimensionless"])
    mode = FieldMode(p["omega_rad_per_s"])
    if p["trajectory"] == "inertial":
        traj = Trajectory.inertial(p["velocity_c"], p["x0_light_s"])
    else:
        traj = Trajectory.uniform_accel(p["accel_per_s"], p["q_offset_s"])
    if p["switching"] == "rect":
        switching = SwitchingFunction.rect(p["tau_i_s"], p["tau_f_s"])
    else:
        switching = SwitchingFunction.gaussian(p["center_s"], p["width_s"])
    res = transition_amplitude(spec, traj, switching, mode, quad=cfg.quad(), switch_off=p["switch_off"])

    ref_kind, ref_prob, ref_amp = "none", math.nan, complex(math.nan, math.nan)
    symmetric = p["switching"] == "rect" and p["tau_i_s"] == -p["tau_f_s"]
    if p["trajectory"] == "inertial" and symmetric:
        ref_kind = "inertial_exact"
        ref_amp = inertial_amplitude(spec, mode, p["velocity_c"], p["x0_light_s"], p["tau_f_s"])
        ref_prob = abs(ref_amp) ** 2
    elif p["trajectory"] == "uniform_accel" and p["gap_rad_per_s"] > 0:
        ref_kind = "accel_infinite_time"
        ref_prob = abs(b_coefficient(spec, mode)) ** 2 * accel_closed_form(
            p["gap_rad_per_s"], p["omega_rad_per_s"], p["accel_per_s"])
    header = ("amplitude_re", "amplitude_im", "abs_error", "probability",
              "reference_re", "reference_im", "reference_probability", "reference", "status")
    row = [_fmt(res.amplitude.real), _fmt(res.amplitude.imag), _fmt(res.abs_error), _fmt(res.probability),
           _fmt(ref_amp.real), _fmt(ref_amp.imag), _fmt(ref_prob), ref_kind, "ok"]
    return _csv(header, [row]), None, {"quadrature": _jsonable(res.diagnostics)}


def _spdc_scenario(p):
    op = ktp_operating_point(p["omega3_rad_per_s"], p["omega2_rad_per_s"])
    length = p["L_um"] * 1e-6
    z_i, z_f = (-0.5 * length, 0.5 * length) if p["window"] == "centered" else (0.0, length)
    accel = p["accel_per_s"] if p["profile"] == "exponential" else 0.0
    medium = exponential_epsilon_profile(op.delta_k0, accel, op.v, op.omega1)
    chi2 = Chi2Profile.uniform()
    period = op.poling_period if p["poling_period_um"] is None else p["poling_period_um"] * 1e-6
    if p["profile"] == "poled":
        chi2 = Chi2Profile.poled(1.0, period, p["duty_fraction"], origin=z_i)
    wg = WaveguideSpec(z_i, z_f, p["area_um2"] * 1e-12, chi2)
    pump = PumpPulse(op.omega3, p["pump_duration_s"], p["pump_energy_J"])
    return op, SpdcScenario(pump, op.omega2, wg, medium), period


def _run_spdc(cfg):
    p = cfg.params
    op, scenario, period = _spdc_scenario(p)
    length = scenario.waveguide.length
    res = spdc_amplitude(scenario, quad=cfg.quad())
    integral = res.diagnostics["integral"]
    normalized = abs(integral / length) ** 2
    sinc2 = math.sin(op.delta_k0 * length / 2) ** 2 / (op.delta_k0 * length / 2) ** 2
    header = ("L_um", "amplitude_re", "amplitude_im", "abs_error", "integral_re", "integral_im",
              "normalized_probability", "sinc2_reference", "route", "status")
    row = [_fmt(p["L_um"]), _fmt(res.amplitude.real), _fmt(res.amplitude.imag), _fmt(res.abs_error),
           _fmt(integral.real), _fmt(integral.imag), _fmt(normalized), _fmt(sinc2),
           res.diagnostics.get("route", "quadrature"), "ok"]
    extra = {"operating_point": _operating_point_info(op), "quadrature": _jsonable(res.diagnostics)}
    if p["profile"] == "poled":
        extra["poled_reference"] = asdict(poled_reference(op.delta_k0, period, length, p["duty_fraction"]))
    return _csv(header, [row]), None, extra


def _run_analogy(cfg):
    p = cfg.params
    op, scenario, _ = _spdc_scenario(p)
    rep = amplitude_equivalence_check(scenario, quad=cfg.quad())
    header = ("L_um", "spdc_re", "spdc_im", "spdc_abs_error", "udw_re", "udw_im", "udw_abs_error",
              "rel_diff", "status")
    row = [_fmt(p["L_um"]), _fmt(rep.spdc_value.real), _fmt(rep.spdc_value.imag), _fmt(rep.spdc_error),
           _fmt(rep.udw_value.real), _fmt(rep.udw_value.imag), _fmt(rep.udw_error), _fmt(rep.rel_diff), "ok"]
    return _csv(header, [row]), None, {"operating_point": _operating_point_info(op)}


def _sweep(lengths_um, a_min, a_max, a_points, workers, max_length_um, quad=None):
    op = ktp_operating_point()
    if a_min is None:
        accels = default_accelerations(op.gap, a_points)
    else:
        accels = [a_min * (a_max / a_min) ** (i / (a_points - 1)) for i in range(a_points)]
    result = fig2_sweep(lengths_um, accels, workers=workers, operating_point=op, quad=quad,
                        length_limit_um=max_length_um)
    extra = {
        "operating_point": _operating_point_info(op),
        "references": result.references,
        "rows": len(result.rows),
        "failed_rows": sum(r.status != "ok" for r in result.rows),
        "workers": workers,
    }
    return result.csv_text(), result.timings_text(), extra


def _run_sweep(cfg):
    p = cfg.params
    workers = p["workers"] if p["workers"] is not None else _env_workers()
    return _sweep(p["lengths_um"], p["a_min_per_s"], p["a_max_per_s"], p["a_points"], workers,
                  p["max_length_um"], cfg.quad())


_RUNNERS = {"udw": _run_udw, "spdc": _run_spdc, "analogy-check": _run_analogy, "fig2-sweep": _run_sweep}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if isinstance(obj, PoledReference):
        return asdict(obj)
    try:
        return float(obj)
    except (TypeError, ValueError):
        return repr(obj)


def _env_workers():
    raw = os.environ.get(WORKERS_ENV)
    if raw is None or raw == "":
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return value


def _write_outputs(out_dir, csv_name, body, timings, manifest):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / csv_name).write_text(body)
    outputs = {"csv": csv_name}
    if timings is not None:
        name = Path(csv_name).stem + "_timings.csv"
        (out_dir / name).write_text(timings)
        outputs["timings"] = name
    manifest["outputs"] = outputs
    (out_dir / "manifest.json").write_text(json.dumps(_jsonable(manifest), indent=2, sort_keys=True) + "\n")
    return out_dir / csv_name


def _manifest(command, config_echo, extra, wall, started):
    _, citation = load_sellmeier()
    return {
        "udwsim_version": __version__,
        "command": command,
        "config": config_echo,
        "sellmeier": {"citation": citation, "file": "udwsim/data/ktp_sellmeier.json"},
        "started_utc": started,
        "wall_time_s": wall,
        **extra,
    }


def _execute(command, config_echo, job, out_dir, csv_name):
    started = datetime.now(timezone.utc).isoformat(timespec="seconds")
    t0 = time.perf_counter()
    body, timings, extra = job()
    wall = time.perf_counter() - t0
    path = _write_outputs(out_dir, csv_name, body, timings, _manifest(command, config_echo, extra, wall, started))
    return path


# ------------------------------------------------------------------ entry point


def _cmd_run(args):
    path = Path(args.config)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    cfg = load_config(text, str(path))
    out_dir = args.out or cfg.output["dir_path"]
    written = _execute("run", cfg.echo(), lambda: _RUNNERS[cfg.kind](cfg), out_dir, cfg.output["csv_name"])
    print(f"wrote {written}")
    return EXIT_OK


def _cmd_fig2(args):
    if args.lengths is not None and not args.lengths:
        raise ConfigError("--lengths needs at least one value")
    lengths = tuple(args.lengths) if args.lengths else DEFAULT_LENGTHS_UM
    if any(not x > 0 for x in lengths):
        raise ConfigError("--lengths must be positive")
    if (args.a_min is None) != (args.a_max is None):
        raise ConfigError("give both --a-min and --a-max or neither")
    if args.a_min is not None and not 0 < args.a_min < args.a_max:
        raise ConfigError("need 0 < --a-min < --a-max")
    if args.a_points < 2:
        raise ConfigError("--a-points must be at least 2")
    workers = args.workers if args.workers is not None else _env_workers()
    if workers < 1:
        raise ConfigError("--workers must be at least 1")
    echo = {"lengths_um": list(lengths), "a_min_per_s": args.a_min, "a_max_per_s": args.a_max,
            "a_points": args.a_points, "max_length_um": args.max_length_um}
    written = _execute(
        "fig2", echo,
        lambda: _sweep(lengths, args.a_min, args.a_max, args.a_points, workers, args.max_length_um),
        args.out, "fig2.csv")
    print(f"wrote {written}")
    return EXIT_OK


def _cmd_check(args):
    results = run_checks(args.only or None)
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_DOMAIN


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(f"{self.prog}: {message}")


def build_parser():
    parser = _Parser(prog="udwsim", description="Detector / SPDC analogy simulator.")
    parser.add_argument("--version", action="version", version=f"udwsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="evaluate a TOML scenario file")
    run.add_argument("config")
    run.add_argument("--out", help="output directory (overrides [output] dir_path)")
    run.set_defaults(func=_cmd_run)

    fig2 = sub.add_parser("fig2", help="acceleration x length sweep on the KTP operating point")
    fig2.add_argument("--out", default="fig2-out", help="output directory (default: %(default)s)")
    fig2.add_argument("--lengths", type=float, nargs="*", metavar="L_UM", help="crystal lengths in um")
    fig2.add_argument("--a-min", type=float, metavar="PER_S", help="smallest acceleration, 1/s")
    fig2.add_argument("--a-max", type=float, metavar="PER_S", help="largest acceleration, 1/s")
    fig2.add_argument("--a-points", type=int, default=DEFAULT_A_POINTS)
    fig2.add_argument("--max-length-um", type=float, default=100.0,
                      help="lengths above this are reported as row errors (default: %(default)s)")
    fig2.add_argument("--workers", type=int, help=f"process count (default: ${WORKERS_ENV} or 1)")
    fig2.set_defaults(func=_cmd_fig2)

    check = sub.add_parser("check", help="run the acceptance checks")
    check.add_argument("--only", type=int, nargs="*", metavar="N", help="check numbers to run")
    check.set_defaults(func=_cmd_check)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, QuadratureError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

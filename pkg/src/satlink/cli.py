"""Command-line front end: sweeps, pass planning, validation, comparisons.

Configuration is a flat key=value text file with dotted namespaces; CLI
flags and repeated --set key=value pairs override file values.  Quantities
accept unit suffixes (km, m, cm, nm, pm, deg, rad, ns, MHz, ...) and are
converted to SI at parse time.  Every CSV starts with a comment line that
records the fully resolved configuration; identical invocations produce
byte-identical output.

Exit codes: 0 ok, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import contextlib
import json
import math
import re
import sys

import numpy as np

from . import bounds, fading, noise, orbit
from .atmosphere import ExtinctionModel
from .beam import BeamParams, ReceiverParams
from .cvqkd import ProtocolParams
from .errors import ConfigError, NumericalError
from .scenario import SETUPS, Scenario
from .turbulence import TurbulenceProfile

_UNITS = {
    "": 1.0,
    "m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "nm": 1e-9, "pm": 1e-12, "km": 1e3,
    "rad": 1.0, "deg": math.pi / 180.0,
    "s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9,
    "hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9,
    "sr": 1.0,
}

_QUANTITY_RE = re.compile(r"^\s*([+-]?\d*\.?\d+(?:[eE][+-]?\d+)?)\s*([a-zA-Z]*)\s*$")


def parse_quantity(text: str) -> float:
    """Parse '530km', '1 deg', '0.1pm', '5MHz' or a bare number to SI."""
    if text.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    m = _QUANTITY_RE.match(text)
    if not m:
        raise ConfigError(f"cannot parse quantity {text!r}")
    value, unit = float(m.group(1)), m.group(2).lower()
    if unit not in _UNITS:
        raise ConfigError(f"unknown unit {m.group(2)!r} in {text!r}")
    return value * _UNITS[unit]


def parse_grid(spec: str) -> list[float]:
    """Parse 'start:stop:n[:log]' into a list of SI values."""
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ConfigError(f"grid spec {spec!r} is not start:stop:n[:log]")
    lo, hi = parse_quantity(parts[0]), parse_quantity(parts[1])
    try:
        n = int(parts[2])
    except ValueError:
        raise ConfigError(f"grid point count {parts[2]!r} is not an integer") from None
    if n < 1:
        raise ConfigError("grid needs at least one point")
    if len(parts) == 4:
        if parts[3] != "log":
            raise ConfigError(f"unknown grid mode {parts[3]!r}")
        if lo <= 0:
            raise ConfigError("log grid needs a positive start")
        return [float(x) for x in np.geomspace(lo, hi, n)]
    return [float(x) for x in np.linspace(lo, hi, n)]


# -- configuration -----------------------------------------------------------

_STRING_KEYS = {
    "scenario.link", "scenario.period", "scenario.sky", "scenario.profile",
    "protocol.detection", "protocol.tail",
}
_INT_KEYS = {"scenario.setup", "protocol.N", "protocol.m", "protocol.d"}
_FLOAT_KEYS = {
    "beam.wavelength", "beam.waist", "beam.curvature",
    "receiver.aperture", "receiver.fov_sr", "receiver.detection_time",
    "receiver.filter", "receiver.efficiency", "receiver.excess_photons",
    "atmosphere.alpha0", "atmosphere.scale_height",
    "pointing.error_rad",
    "protocol.f_et", "protocol.beta", "protocol.p_ec",
    "protocol.eps_s", "protocol.eps_h", "protocol.eps_pe", "protocol.eps_cor",
    "protocol.mu", "protocol.phi", "protocol.clock_hz",
    "noise.h_sky", "noise.kappa",
}
_KNOWN_KEYS = _STRING_KEYS | _INT_KEYS | _FLOAT_KEYS


def read_config_file(path: str) -> dict[str, str]:
    raw: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                stripped = line.split("#", 1)[0].strip()
                if not stripped:
                    continue
                if "=" not in stripped:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                key, value = (part.strip() for part in stripped.split("=", 1))
                raw[key] = value
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return raw


def apply_sets(raw: dict[str, str], sets: list[str] | None) -> dict[str, str]:
    for item in sets or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = (part.strip() for part in item.split("=", 1))
        raw[key] = value
    return raw


def scenario_from_config(raw: dict[str, str]) -> Scenario:
    for key in raw:
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"unknown configuration key {key!r}")

    def value(key: str, default):
        if key not in raw:
            return default
        if key in _STRING_KEYS:
            return raw[key]
        if key in _INT_KEYS:
            return int(float(parse_quantity(raw[key])))
        return parse_quantity(raw[key])

    setup = value("scenario.setup", 1)
    if setup not in SETUPS:
        raise ConfigError(f"setup must be one of {sorted(SETUPS)}")
    w0, a_r, filt = SETUPS[setup]

    beam = BeamParams(
        wavelength=value("beam.wavelength", 800e-9),
        waist=value("beam.waist", w0),
        curvature=value("beam.curvature", math.inf),
    )
    receiver = ReceiverParams(
        aperture=value("receiver.aperture", a_r),
        fov_sr=value("receiver.fov_sr", 1e-10),
        detection_time=value("receiver.detection_time", 10e-9),
        filter_width=value("receiver.filter", filt),
        efficiency=value("receiver.efficiency", 0.4),
        excess_photons=value("receiver.excess_photons", 0.0),
    )
    extinction = ExtinctionModel(
        alpha0=value("atmosphere.alpha0", 5e-6),
        h_scale=value("atmosphere.scale_height", 6600.0),
    )
    protocol = ProtocolParams(
        block_size=value("protocol.N", 100_000_000),
        pilots=value("protocol.m", 15_000_000),
        energy_test_fraction=value("protocol.f_et", 0.0),
        beta=value("protocol.beta", 0.96),
        p_ec=value("protocol.p_ec", 0.9),
        eps_s=value("protocol.eps_s", 2.0**-33),
        eps_h=value("protocol.eps_h", 2.0**-33),
        eps_pe=value("protocol.eps_pe", 2.0**-33),
        eps_cor=value("protocol.eps_cor", 2.0**-33),
        alphabet=value("protocol.d", 32),
        mu=value("protocol.mu", 9.28),
        phi_thr=value("protocol.phi", 0.73),
        clock_hz=value("protocol.clock_hz", 5e6),
        detection=value("protocol.detection", "het"),
        tail=value("protocol.tail", "gaussian"),
    )
    profile = None
    if "scenario.profile" in raw:
        try:
            profile = TurbulenceProfile.from_name(raw["scenario.profile"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    try:
        return Scenario(
            link=value("scenario.link", "down"),
            period=value("scenario.period", "night"),
            sky=value("scenario.sky", "clear"),
            setup=setup,
            beam=beam,
            receiver=receiver,
            profile=profile,
            extinction=extinction,
            pointing_error=value("pointing.error_rad", 1e-6),
            protocol=protocol,
            h_sky_override=value("noise.h_sky", None),
            kappa_override=value("noise.kappa", None),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def resolve_scenario(args) -> Scenario:
    raw = read_config_file(args.config) if args.config else {}
    apply_sets(raw, args.set)
    return scenario_from_config(raw)


# -- output helpers ----------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".10g")
    return str(x)


def config_comment(scn: Scenario) -> str:
    desc = scn.describe()
    return "# config: " + " ".join(f"{k}={_fmt(v)}" for k, v in sorted(desc.items()))


def write_csv(out, scn: Scenario, header: list[str], rows, extra_comments=()):
    out.write(config_comment(scn) + "\n")
    for comment in extra_comments:
        out.write(f"# {comment}\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")


@contextlib.contextmanager
def _open_out(args):
    if args.output and args.output != "-":
        fh = open(args.output, "w", encoding="utf-8", newline="\n")
        try:
            yield fh
        finally:
            fh.close()
    else:
        yield sys.stdout


# -- subcommands -------------------------------------------------------------

def _bounds_point(task):
    scn, h, theta = task
    vals = scn.bounds_at(h, theta)
    return (
        h / 1e3, theta, vals["U"], vals["V"], vals["B"], vals["upper"], vals["lower"],
        vals["eta"], vals["nbar"],
    )


def _rate_point(task):
    scn, h, theta, attacks = task
    res = scn.rate_at(h, theta, attacks)
    return (h / 1e3, theta, res.rate, res.unclamped)


def _map_tasks(fn, tasks, jobs: int):
    if jobs <= 1:
        return [fn(t) for t in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserves input order regardless of completion order
        return list(pool.map(fn, tasks, chunksize=1))


def cmd_bounds(args) -> int:
    scn = resolve_scenario(args)
    h_grid = parse_grid(args.h_grid)
    if not h_grid:
        raise ConfigError("empty altitude grid")
    thetas = [parse_quantity(t) for t in args.theta] or [0.0]
    tasks = [(scn, h, th) for h in h_grid for th in thetas]
    rows = _map_tasks(_bounds_point, tasks, args.jobs)
    with _open_out(args) as out:
        write_csv(
            out, scn,
            ["h_km", "theta", "U", "V", "B", "thermal_upper", "thermal_lower", "eta", "nbar"],
            rows,
        )
    return 0


def cmd_rate(args) -> int:
    scn = resolve_scenario(args)
    h = parse_quantity(args.h)
    thetas = parse_grid(args.theta_grid)
    tasks = [(scn, h, th, args.attacks) for th in thetas]
    rows = _map_tasks(_rate_point, tasks, args.jobs)
    with _open_out(args) as out:
        write_csv(out, scn, ["h_km", "theta", "rate", "rate_unclamped"], rows)
    return 0


def cmd_pass(args) -> int:
    scn = resolve_scenario(args)
    h = parse_quantity(args.h)
    report = scn.pass_report(h, args.blocks, args.attacks)
    report["config"] = {k: v for k, v in sorted(scn.describe().items())}
    with _open_out(args) as out:
        json.dump(report, out, indent=2, sort_keys=True)
        out.write("\n")
    return 0


def _parse_sat_spec(spec: str, base_sets: list[str] | None) -> tuple[str, list[str], float, int]:
    """Parse --sat 'h=530km,blocks=10,link=down,period=night,setup=2,mu=9.28,...'."""
    shorthand = {
        "link": "scenario.link", "period": "scenario.period", "sky": "scenario.sky",
        "setup": "scenario.setup", "mu": "protocol.mu", "phi": "protocol.phi",
    }
    h = None
    blocks = 10
    label = None
    sets = list(base_sets or [])
    for item in spec.split(","):
        if "=" not in item:
            raise ConfigError(f"--sat expects key=value pairs, got {item!r}")
        key, value = (part.strip() for part in item.split("=", 1))
        if key == "h":
            h = parse_quantity(value)
        elif key == "blocks":
            blocks = int(value)
        elif key == "label":
            label = value
        else:
            sets.append(f"{shorthand.get(key, key)}={value}")
    if h is None:
        raise ConfigError(f"--sat spec {spec!r} needs h=<altitude>")
    if label is None:
        label = f"sat_{h/1e3:g}km"
    return label, sets, h, blocks


def cmd_compare_fiber(args) -> int:
    base = read_config_file(args.config) if args.config else {}
    apply_sets(base, args.set)
    scn = scenario_from_config(dict(base))

    d_grid = parse_grid(args.d_grid)
    n_reps = [int(n) for n in args.n_rep]
    comparison = orbit.GroundComparison(clock_hz=scn.protocol.clock_hz)

    sat_cols: list[tuple[str, float]] = []
    for spec in args.sat or []:
        label, sets, h, blocks = _parse_sat_spec(spec, None)
        raw = dict(base)
        apply_sets(raw, sets)
        sat_scn = scenario_from_config(raw)
        report = sat_scn.pass_report(h, blocks)
        sat_cols.append((label, report["bits_per_day"]))

    header = ["d_km", "fiber_bits_day"]
    header += [f"rep{n}_bits_day" for n in n_reps]
    header += [f"{label}_bits_day" for label, _ in sat_cols]
    rows = []
    for d in d_grid:
        row = [d / 1e3, orbit.bits_per_day(orbit.fiber_rate(d, comparison), comparison.clock_hz)]
        for n in n_reps:
            row.append(orbit.bits_per_day(orbit.repeater_rate(d, n, comparison), comparison.clock_hz))
        row.extend(bits for _, bits in sat_cols)
        rows.append(tuple(row))
    with _open_out(args) as out:
        write_csv(out, scn, header, rows)
    return 0


def cmd_validate_mc(args) -> int:
    scn = resolve_scenario(args)
    h = parse_quantity(args.h)
    theta = parse_quantity(args.theta)
    model = scn.fading_model(h, theta)
    samples = fading.sample_fading(model, args.samples, args.seed)

    # KS distance of the empirical CDF against the analytic law
    ordered = np.sort(samples)
    analytic = np.array([fading.fading_cdf(t, model) for t in ordered])
    n = len(ordered)
    steps_hi = np.arange(1, n + 1) / n
    steps_lo = np.arange(0, n) / n
    ks = float(np.max(np.maximum(np.abs(steps_hi - analytic), np.abs(analytic - steps_lo))))

    edges = np.linspace(0.0, model.eta, args.bins + 1)
    counts, _ = np.histogram(samples, bins=edges)
    rows = []
    for i in range(args.bins):
        emp = counts[i] / n
        ana = fading.fading_cdf(float(edges[i + 1]), model) - fading.fading_cdf(float(edges[i]), model)
        rows.append((float(edges[i]), float(edges[i + 1]), emp, ana))
    with _open_out(args) as out:
        write_csv(
            out, scn,
            ["tau_bin_lo", "tau_bin_hi", "empirical_p", "analytic_p"],
            rows,
            extra_comments=[
                f"h_km={_fmt(h / 1e3)} theta={_fmt(theta)} samples={args.samples} seed={args.seed}",
                f"ks_statistic={_fmt(ks)}",
            ],
        )
    return 0


def cmd_max_range(args) -> int:
    scn = resolve_scenario(args)
    result = scn.max_range(args.mode)
    with _open_out(args) as out:
        write_csv(
            out, scn,
            ["mode", "z_max_km", "secure_anywhere"],
            [(result.mode, result.z_max / 1e3, result.secure_anywhere)],
        )
    return 0


def cmd_show_config(args) -> int:
    scn = resolve_scenario(args)
    with _open_out(args) as out:
        for key, value in sorted(scn.describe().items()):
            out.write(f"{key} = {_fmt(value)}\n")
    return 0


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satlink",
        description="Satellite optical link budgets, capacity bounds and CV-QKD rates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value configuration file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a configuration key (repeatable)")
        p.add_argument("-o", "--output", default="-", help="output path (default stdout)")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    p = sub.add_parser("bounds", help="upper/lower bound sweep over altitude")
    common(p)
    p.add_argument("--h-grid", required=True, metavar="LO:HI:N[:log]")
    p.add_argument("--theta", action="append", default=[], metavar="ANGLE",
                   help="zenith angle (repeatable; default 0)")
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("rate", help="composable key rate vs zenith angle")
    common(p)
    p.add_argument("--h", required=True, help="satellite altitude")
    p.add_argument("--theta-grid", required=True, metavar="LO:HI:N")
    p.add_argument("--attacks", choices=("collective", "general"), default="collective")
    p.set_defaults(fn=cmd_rate)

    p = sub.add_parser("pass", help="zenith-crossing pass report (JSON)")
    common(p)
    p.add_argument("--h", required=True, help="satellite altitude")
    p.add_argument("--blocks", type=int, default=10, help="data blocks per pass")
    p.add_argument("--attacks", choices=("collective", "general"), default="collective")
    p.set_defaults(fn=cmd_pass)

    p = sub.add_parser("compare-fiber", help="satellite vs fiber/repeater bits per day")
    common(p)
    p.add_argument("--d-grid", required=True, metavar="LO:HI:N[:log]",
                   help="station separation grid")
    p.add_argument("--n-rep", nargs="*", default=["1", "5", "30"],
                   help="ideal repeater counts")
    p.add_argument("--sat", action="append", metavar="SPEC",
                   help="satellite column, e.g. h=530km,blocks=10,period=night,setup=2,mu=9.28,phi=0.73")
    p.set_defaults(fn=cmd_compare_fiber)

    p = sub.add_parser("validate-mc", help="Monte Carlo check of the fading law")
    common(p)
    p.add_argument("--h", required=True, help="satellite altitude")
    p.add_argument("--theta", default="0", help="zenith angle (default 0)")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--bins", type=int, default=60)
    p.set_defaults(fn=cmd_validate_mc)

    p = sub.add_parser("max-range", help="maximum secure slant range")
    common(p)
    p.add_argument("--mode", choices=("simple", "tight"), default="tight")
    p.set_defaults(fn=cmd_max_range)

    p = sub.add_parser("show-config", help="print the fully resolved configuration")
    common(p)
    p.set_defaults(fn=cmd_show_config)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError) as exc:
        # parameter-validation ValueErrors count as configuration mistakes
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

    epdyn spectrum --preset paper --lambda 0.53
    epdyn eps      --preset paper
    epdyn evolve   --preset paper --lambda 0.563 --psi0 0,1 --tmax 300 --steps 2000
    epdyn sweep    --preset paper --from 0.53 --to 0.59 --n 400 --plot fig1.png
    epdyn critical --preset paper --from 0.53 --to 0.59
    epdyn jordan   --preset paper --ep 1

Complex numbers on the command line are written ``a,b`` for a+bi (a bare
``a`` is real). ``--psi0`` instead takes the two state components separated
by a comma, each a real number or a Python complex literal such as ``0.5+0.5j``.

State components are in the observational basis, obtained from the model basis
with the rotation ``[[cos, -sin], [sin, cos]]`` at pi/4. ``--basis original``
declares that ``--psi0`` is given in the model basis instead; output is always
observational.

Exit status: 0 success, 2 usage/config error, 1 computation error.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from . import __version__
from .errors import EPDynError, InvalidArgumentError
from .evolution import ep_energy
from .jordan import ep_jordan_form
from .model import PAPER_PARAMS, ModelParams, StateVector, to_observational
from .spectral import eigenvalues, exceptional_points
from .sweep import (
    T_MAX_SEPARATED,
    TIME_POINTS,
    TRAJECTORY_POINTS,
    critical_summary,
    thread_count,
    time_series,
    trajectory_sweep,
)
from .tables import FORMATS, render

PRESETS = {"paper": PAPER_PARAMS}
PARAM_KEYS = ("omega1", "omega2", "epsilon1", "epsilon2", "delta")
CONFIG_KEYS = PARAM_KEYS + (
    "preset",
    "lambda",
    "lambda_from",
    "lambda_to",
    "psi0",
    "basis",
    "steps",
    "tmax",
    "grid",
    "format",
    "output",
)
BASES = ("rotated", "original")
DEFAULT_RANGE = (0.53, 0.59)
DEFAULT_GRID = 601

EVOLVE_HEADER = ["t", "re_z1", "im_z1", "re_z2", "im_z2", "abs_z1", "abs_z2"]
SWEEP_HEADER = ["lambda", "re_e1", "im_e1", "re_e2", "im_e2"]
SCALAR_HEADER = ["quantity", "re", "im"]


class ConfigError(InvalidArgumentError):
    """Malformed or invalid run configuration (maps to exit status 2)."""


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    lam: Optional[complex] = None
    lam_range: Optional[tuple] = None
    psi0: StateVector = StateVector(0, 1)
    basis: str = "rotated"
    steps: Optional[int] = None
    t_max: Optional[float] = None
    grid: int = DEFAULT_GRID
    fmt: str = "csv"
    output: Optional[str] = None


# --------------------------------------------------------------------------
# config file


def _split_line(lineno, line):
    for sep in ("=", ":"):
        if sep in line:
            key, raw = line.split(sep, 1)
            key, raw = key.strip(), raw.strip()
            if key and raw:
                return key, raw
    raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")


def _json_or_str(raw):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw.strip("\"'")


def _is_real(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _complex_pair(value):
    if isinstance(value, list) and len(value) == 2 and all(_is_real(v) for v in value):
        return complex(value[0], value[1])
    raise ValueError("expected a two-element array [re, im]")


def _complex_scalar(value):
    if _is_real(value):
        return complex(value)
    return _complex_pair(value)


def parse_config(text):
    """Parse a ``key = value`` run configuration.

    Values are JSON (complex numbers as ``[re, im]``) or bare words. Lines
    starting with ``#`` are comments. ``preset = paper`` supplies the model
    constants; explicit keys override it.
    """
    entries = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, raw = _split_line(lineno, stripped)
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = (lineno, _json_or_str(raw))

    problems = []

    def bad(key, msg):
        problems.append(f"line {entries[key][0]}: {key}: {msg}")

    values = {}
    if "preset" in entries:
        name = entries["preset"][1]
        if name in PRESETS:
            values.update(PRESETS[name].as_dict())
        else:
            bad("preset", f"unknown preset {name!r} (known: {', '.join(PRESETS)})")
    for key in PARAM_KEYS:
        if key in entries:
            try:
                values[key] = _complex_pair(entries[key][1])
            except ValueError as exc:
                bad(key, str(exc))
    missing = [k for k in PARAM_KEYS if k not in values and k not in entries]
    if missing:
        problems.append("missing required keys: " + ", ".join(missing))

    extra = {}
    if "lambda" in entries:
        try:
            extra["lam"] = _complex_scalar(entries["lambda"][1])
        except ValueError as exc:
            bad("lambda", str(exc))
    has_from, has_to = "lambda_from" in entries, "lambda_to" in entries
    if has_from != has_to:
        problems.append("lambda_from and lambda_to must be given together")
    elif has_from:
        lo, hi = entries["lambda_from"][1], entries["lambda_to"][1]
        if not (_is_real(lo) and _is_real(hi)):
            bad("lambda_from", "lambda range bounds must be real numbers")
        elif not lo < hi:
            bad("lambda_from", f"empty range [{lo}, {hi}]")
        else:
            extra["lam_range"] = (float(lo), float(hi))
        if "lambda" in entries:
            problems.append("give either lambda or lambda_from/lambda_to, not both")
    if "psi0" in entries:
        v = entries["psi0"][1]
        try:
            if not (isinstance(v, list) and len(v) == 2):
                raise ValueError("expected two components")
            extra["psi0"] = StateVector(*(_complex_scalar(c) for c in v))
        except (ValueError, InvalidArgumentError) as exc:
            bad("psi0", str(exc))
    if "basis" in entries:
        if entries["basis"][1] in BASES:
            extra["basis"] = entries["basis"][1]
        else:
            bad("basis", f"must be one of {', '.join(BASES)}")
    if "format" in entries:
        if entries["format"][1] in FORMATS:
            extra["fmt"] = entries["format"][1]
        else:
            bad("format", f"must be one of {', '.join(FORMATS)}")
    for key, attr, lowest in (("steps", "steps", 2), ("grid", "grid", 3)):
        if key in entries:
            v = entries[key][1]
            if isinstance(v, int) and not isinstance(v, bool) and v >= lowest:
                extra[attr] = v
            else:
                bad(key, f"must be an integer >= {lowest}")
    if "tmax" in entries:
        v = entries["tmax"][1]
        if _is_real(v) and v > 0:
            extra["t_max"] = float(v)
        else:
            bad("tmax", "must be a positive number")
    if "output" in entries:
        extra["output"] = str(entries["output"][1])

    params = None
    if not problems:
        try:
            params = ModelParams(**values)
        except InvalidArgumentError as exc:
            problems.append(str(exc))
    if problems:
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(problems))
    return RunConfig(params=params, **extra)


# --------------------------------------------------------------------------
# argument parsing


def parse_complex(text):
    """``"a,b"`` -> a+bi; ``"a"`` -> a."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            z = complex(float(parts[0]))
        elif len(parts) == 2:
            z = complex(float(parts[0]), float(parts[1]))
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number 'a,b': {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise argparse.ArgumentTypeError(f"non-finite value {text!r}")
    return z


def parse_state(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"--psi0 needs two components 'c1,c2', got {text!r}")
    try:
        return StateVector(*(complex(p.strip().replace(" ", "")) for p in parts))
    except (ValueError, InvalidArgumentError):
        raise argparse.ArgumentTypeError(f"bad state components {text!r}") from None


def _positive_float(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(x) and x > 0):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text!r}")
    return x


def _int_at_least(lowest):
    def conv(text):
        try:
            n = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if n < lowest:
            raise argparse.ArgumentTypeError(f"must be >= {lowest}, got {n}")
        return n

    return conv


def _real(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"non-finite value {text!r}")
    return x


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("model")
    src.add_argument("--preset", choices=sorted(PRESETS), help="built-in parameter set")
    src.add_argument("--config", metavar="FILE", help="key = value configuration file")
    for key in PARAM_KEYS:
        src.add_argument(f"--{key}", type=parse_complex, metavar="A,B", help=f"override {key}")
    out = common.add_argument_group("output")
    out.add_argument("--format", choices=FORMATS, dest="fmt")
    out.add_argument("--output", "-o", metavar="PATH", help="write here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="epdyn",
        description="Two-level non-Hermitian dynamics near exceptional points.",
    )
    parser.add_argument("--version", action="version", version=f"epdyn {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues E1, E2 and D at lambda")
    p.add_argument("--lambda", dest="lam", type=parse_complex, metavar="A,B")

    sub.add_parser("eps", parents=[common], help="exceptional points EP1, EP2")

    p = sub.add_parser("evolve", parents=[common], help="time series z1(t), z2(t)")
    p.add_argument("--lambda", dest="lam", type=parse_complex, metavar="A,B")
    p.add_argument("--psi0", type=parse_state, metavar="C1,C2")
    p.add_argument("--basis", choices=BASES, help="basis of --psi0 (default: rotated)")
    p.add_argument("--tmax", type=_positive_float)
    p.add_argument("--steps", type=_int_at_least(2))
    p.add_argument("--plot", metavar="PATH", help="also render the series (needs matplotlib)")

    p = sub.add_parser("sweep", parents=[common], help="eigenvalue trajectories over lambda")
    p.add_argument("--from", dest="lo", type=_real)
    p.add_argument("--to", dest="hi", type=_real)
    p.add_argument("--n", "--steps", dest="steps", type=_int_at_least(2))
    p.add_argument("--plot", metavar="PATH", help="also render the trajectories (needs matplotlib)")

    p = sub.add_parser("critical", parents=[common], help="critical coupling and widths")
    p.add_argument("--from", dest="lo", type=_real)
    p.add_argument("--to", dest="hi", type=_real)
    p.add_argument("--grid", type=_int_at_least(3))

    p = sub.add_parser("jordan", parents=[common], help="Jordan basis at an exceptional point")
    p.add_argument("--ep", choices=("1", "2", "EP1", "EP2"), default="1")
    return parser


class UsageError(Exception):
    pass


def _config_from_args(args):
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        cfg = parse_config(text)
        if args.preset:
            cfg = replace(cfg, params=PRESETS[args.preset])
    elif args.preset:
        cfg = RunConfig(params=PRESETS[args.preset])
    else:
        overrides = [k for k in PARAM_KEYS if getattr(args, k) is not None]
        if len(overrides) != len(PARAM_KEYS):
            raise UsageError("give --preset, --config, or all of --" + ", --".join(PARAM_KEYS))
        cfg = RunConfig(params=ModelParams(*(getattr(args, k) for k in PARAM_KEYS)))

    given = {k: getattr(args, k) for k in PARAM_KEYS if getattr(args, k) is not None}
    if given:
        cfg = replace(cfg, params=replace(cfg.params, **given))

    updates = {}
    if getattr(args, "lam", None) is not None:
        updates["lam"] = args.lam
    lo, hi = getattr(args, "lo", None), getattr(args, "hi", None)
    if lo is not None or hi is not None:
        base = cfg.lam_range or DEFAULT_RANGE
        updates["lam_range"] = (base[0] if lo is None else lo, base[1] if hi is None else hi)
    for attr, name in (("psi0", "psi0"), ("basis", "basis"), ("steps", "steps"),
                       ("t_max", "tmax"), ("grid", "grid"), ("fmt", "fmt"), ("output", "output")):
        v = getattr(args, name, None)
        if v is not None:
            updates[attr] = v
    return replace(cfg, **updates)


def _require_lambda(cfg):
    if cfg.lam is None:
        raise UsageError("this command needs --lambda (or 'lambda' in the config)")
    return cfg.lam


def _range(cfg):
    lo, hi = cfg.lam_range or DEFAULT_RANGE
    if not lo < hi:
        raise UsageError(f"empty lambda range [{lo}, {hi}]")
    return lo, hi


def _crow(name, z):
    z = complex(z)
    return [name, z.real, z.imag]


def cmd_spectrum(cfg, args):
    lam = _require_lambda(cfg)
    s = eigenvalues(cfg.params, lam)
    return SCALAR_HEADER, [_crow("lambda", lam), _crow("e1", s.e1), _crow("e2", s.e2), _crow("d", s.d)]


def cmd_eps(cfg, args):
    eps = exceptional_points(cfg.params)
    return SCALAR_HEADER, [_crow("ep1", eps.ep1), _crow("ep2", eps.ep2), _crow("cc", eps.cc)]


def cmd_evolve(cfg, args):
    lam = _require_lambda(cfg)
    psi0 = cfg.psi0 if cfg.basis == "rotated" else to_observational(cfg.psi0)
    series = time_series(
        cfg.params, lam, psi0, cfg.t_max or T_MAX_SEPARATED, cfg.steps or TIME_POINTS
    )
    rows = [
        [t, s.z1.real, s.z1.imag, s.z2.real, s.z2.imag, abs(s.z1), abs(s.z2)]
        for t, s in zip(series.times, series.states)
    ]
    if args.plot:
        from .plotting import plot_time_series

        plot_time_series(series, args.plot)
    return EVOLVE_HEADER, rows


def cmd_sweep(cfg, args):
    lo, hi = _range(cfg)
    traj = trajectory_sweep(cfg.params, lo, hi, cfg.steps or TRAJECTORY_POINTS)
    rows = [
        [lam, a.real, a.imag, b.real, b.imag]
        for lam, a, b in zip(traj.lambdas, traj.e1_path, traj.e2_path)
    ]
    if args.plot:
        from .plotting import plot_trajectory

        plot_trajectory(traj, args.plot)
    return SWEEP_HEADER, rows


def cmd_critical(cfg, args):
    lo, hi = _range(cfg)
    lam_c, spec, wb = critical_summary(cfg.params, lo, hi, cfg.grid)
    top, bot = (spec.e1, spec.e2) if wb.gamma1 <= wb.gamma2 else (spec.e2, spec.e1)
    return SCALAR_HEADER, [
        _crow("lambda_c", lam_c),
        _crow("gamma_top", wb.top),
        _crow("gamma_bot", wb.bottom),
        _crow("e_top", top),
        _crow("e_bot", bot),
    ]


def cmd_jordan(cfg, args):
    branch = "EP" + args.ep[-1]
    lam = exceptional_points(cfg.params)[branch]
    jf = ep_jordan_form(cfg.params, branch)
    rows = [_crow("lambda_ep", lam), _crow("e_ep", jf.e_ep), _crow("energy_ep", 1j * jf.e_ep)]
    for name, m in (("s", jf.s), ("j", jf.j)):
        rows += [_crow(f"{name}{r + 1}{c + 1}", m[r, c]) for r in range(2) for c in range(2)]
    rows += [_crow(f"phi_ep_{k + 1}", jf.phi_ep[k]) for k in range(2)]
    rows += [_crow(f"phi_assoc_{k + 1}", jf.phi_assoc[k]) for k in range(2)]
    if branch == "EP1":
        rows.append(_crow("energy_ep_closed_form", ep_energy(cfg.params)))
    return SCALAR_HEADER, rows


COMMANDS = {
    "spectrum": cmd_spectrum,
    "eps": cmd_eps,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "critical": cmd_critical,
    "jordan": cmd_jordan,
}


def run(argv=None):
    """Run one subcommand; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        thread_count()
    except InvalidArgumentError as exc:
        print(f"epdyn: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = _config_from_args(args)
        header, rows = COMMANDS[args.command](cfg, args)
    except (UsageError, ConfigError) as exc:
        print(f"epdyn {args.command}: {exc}", file=sys.stderr)
        return 2
    except (EPDynError, ArithmeticError, ValueError, ImportError) as exc:
        print(f"epdyn {args.command}: {exc}", file=sys.stderr)
        return 1

    text = render(header, rows, cfg.fmt)
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def main():
    sys.exit(run())

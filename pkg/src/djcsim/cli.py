"""Command-line front end: scenario runs, kernel traces and parameter sweeps.

Subcommands
-----------
single   one- or multi-mode run with a single shared excitation; the initial
         entanglement sits either on the atoms or on the resonant cavity
         modes (--initial atoms|fields)
double   run with one excitation per cavity, starting from the entangled
         superposition of no excitation and both atoms excited
kernel   trace of the mode-summed memory kernel K(tau)
sweep    repeat single/double runs along one parameter axis and summarize

Each run writes one CSV (headers mandatory, '.' decimal separator, LF line
endings) and prints a summary to stdout.  Parameters can also be supplied
as key=value lines in a file passed with --config; command-line flags win
over file values.  Exit codes: 0 success, 2 invalid parameters or paths,
3 numerical failure (nonfinite amplitudes).
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from typing import List, Optional

import numpy as np

from .double import init_double
from .evolve import IntegrationError, Trajectory, default_step, run_double, run_single
from .model import SystemConfig, build_mode_grid, retardation_time
from .revivals import (
    RevivalReport,
    detect_revivals,
    first_kernel_echo,
    first_revival_after_death,
    memory_kernel,
    predict_revival_times,
)
from .single import init_atoms_entangled, init_fields_entangled

_SWEEP_AXES = ("theta", "n_modes", "length_ratio", "omega_a")

_PI_EXPR = re.compile(r"^\s*(\d+(?:\.\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d+)?))?\s*$")


def parse_number(text: str) -> float:
    """Parse a float, also accepting 'pi', '3pi/8' or 'pi/4' style values."""
    match = _PI_EXPR.match(text)
    if match:
        value = math.pi * float(match.group(1) or 1.0)
        if match.group(2):
            value /= float(match.group(2))
        return value
    return float(text)


def _parse_values(text: str) -> List[float]:
    items = [item for item in text.split(",") if item.strip()]
    return [parse_number(item) for item in items]


_CONFIG_CONVERTERS = {
    "theta": parse_number,
    "modes": int,
    "length_ratio": float,
    "omega_a": float,
    "profile": str,
    "initial": str,
    "tmax": float,
    "dt": float,
    "stride": int,
    "out": str,
    "angle_convention": str,
    "axis": str,
    "values": str,
}


def _load_config_file(path: str) -> dict:
    """Read flat key=value lines; '#' starts a comment."""
    overrides = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_CONVERTERS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            overrides[key] = _CONFIG_CONVERTERS[key](value.strip())
    return overrides


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key=value parameter file; flags override it")
    sub.add_argument("--theta", type=parse_number, default=math.pi / 4,
                     help="initial mixing angle in radians; accepts pi/4 style (default pi/4)")
    sub.add_argument("--modes", type=int, default=1,
                     help="modes per cavity, odd (default 1)")
    sub.add_argument("--length-ratio", dest="length_ratio", type=float, default=670.0,
                     help="cavity length over atomic wavelength (default 670)")
    sub.add_argument("--omega-a", dest="omega_a", type=float, default=4840.0,
                     help="atomic frequency in vacuum-Rabi units (default 4840)")
    sub.add_argument("--profile", choices=("uniform", "sqrtfreq"), default="sqrtfreq",
                     help="coupling profile across modes (default sqrtfreq)")
    sub.add_argument("--tmax", type=float, default=None,
                     help="window length; default 5 round trips, or two Rabi cycles for 1 mode")
    sub.add_argument("--dt", type=float, default=None,
                     help="integration step (kernel: tau sample step); default derived from the grid")
    sub.add_argument("--stride", type=int, default=None,
                     help="record every Nth step (default: aim for ~2000 rows)")
    sub.add_argument("--out", default=None, help="output CSV path")
    sub.add_argument("--angle-convention", dest="angle_convention",
                     choices=("printed", "swapped"), default="printed",
                     help="role of theta in the initial state: as written, or with "
                          "cos/sin exchanged (default printed)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="djcsim",
        description="Entanglement dynamics of two independent atom-cavity systems "
                    "with multimode fields and round-trip retardation.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    subs = {}

    single = commands.add_parser("single", help="single shared excitation")
    _add_common_flags(single)
    single.add_argument("--initial", choices=("atoms", "fields"), default="atoms",
                        help="where the initial entanglement sits (default atoms)")
    subs["single"] = single

    double = commands.add_parser("double", help="one excitation per cavity")
    _add_common_flags(double)
    subs["double"] = double

    kernel = commands.add_parser("kernel", help="memory kernel trace")
    _add_common_flags(kernel)
    subs["kernel"] = kernel

    sweep = commands.add_parser("sweep", help="runs along one parameter axis")
    _add_common_flags(sweep)
    sweep.add_argument("--initial", choices=("atoms", "fields", "double"),
                       default="atoms",
                       help="scenario swept: single with atoms/fields entangled, "
                            "or the double-excitation run (default atoms)")
    sweep.add_argument("--axis", choices=_SWEEP_AXES, default=None,
                       help="parameter to sweep")
    sweep.add_argument("--values", default=None,
                       help="comma-separated axis values (pi expressions allowed)")
    subs["sweep"] = sweep

    return parser, subs


def _make_config(args: argparse.Namespace) -> SystemConfig:
    theta = args.theta
    if args.angle_convention == "swapped":
        theta = math.pi / 2 - theta
    return SystemConfig(
        omega_a=args.omega_a,
        length_ratio=args.length_ratio,
        n_modes=args.modes,
        theta=theta,
        coupling_profile=args.profile,
    )


def _default_tmax(config: SystemConfig) -> float:
    if config.n_modes == 1:
        return 2.0 * 2.0 * math.pi  # two Rabi cycles of the resonant mode
    return 5.0 * retardation_time(config)


def _format(value: float) -> str:
    return repr(float(value))


def _write_csv(path: str, first_column: str, times, records: dict) -> None:
    columns = [first_column] + list(records)
    with open(path, "w", encoding="ascii", newline="") as handle:
        handle.write(",".join(columns) + "\n")
        for i in range(len(times)):
            row = [_format(times[i])] + [_format(records[c][i]) for c in records]
            handle.write(",".join(row) + "\n")


def _print_summary(config: SystemConfig, traj: Trajectory, report: RevivalReport,
                   out_path: str) -> None:
    conc = traj.records["c_ab"]
    norm = traj.records["norm"]
    print(f"t_r={retardation_time(config):.6f}")
    times = predict_revival_times(config, 3)
    note = "  (single-mode cavity: Rabi-periodic, round-trip times not applicable)" \
        if config.n_modes == 1 else ""
    print("predicted revival times: "
          + ", ".join(f"{t:.6f}" for t in times) + note)
    print(f"initial concurrence: {conc[0]:.6f}")
    print(f"final concurrence:   {conc[-1]:.6f}")
    print(f"max |norm - 1|: {max(abs(norm - 1.0)):.3e}")
    if report.dead_intervals:
        spans = ", ".join(f"[{a:.4f}, {b:.4f}]" for a, b in report.dead_intervals[:5])
        more = " ..." if len(report.dead_intervals) > 5 else ""
        print(f"dead intervals: {spans}{more}")
        try:
            first = first_revival_after_death(report)
            print(f"first revival after collapse: onset={first.onset:.4f} "
                  f"peak_t={first.peak_time:.4f} peak={first.peak_value:.6f}")
        except ValueError:
            pass
    else:
        print("dead intervals: none")
    if report.revivals:
        for event in report.revivals[:5]:
            print(f"revival: onset={event.onset:.4f} peak_t={event.peak_time:.4f} "
                  f"peak={event.peak_value:.6f}")
        if len(report.revivals) > 5:
            print(f"({len(report.revivals) - 5} more revivals not shown)")
    else:
        print("revivals: none detected")
    print(f"wrote {out_path}")


def _run_trajectory(args: argparse.Namespace, scenario: str) -> int:
    config = _make_config(args)
    grid = build_mode_grid(config)
    t_max = args.tmax if args.tmax is not None else _default_tmax(config)
    if t_max <= 0:
        raise ValueError(f"tmax must be positive, got {t_max!r}")
    dt = args.dt
    if dt is None:
        dt = default_step(grid) * (0.5 if scenario == "double" else 1.0)
    stride = args.stride
    if stride is None:
        stride = max(1, math.ceil(t_max / dt) // 2000)
    elif stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride!r}")
    if scenario == "double":
        state = init_double(config.theta, grid)
        traj = run_double(grid, state, t_max, dt=dt, sample_stride=stride)
    else:
        if scenario == "single-fields":
            state = init_fields_entangled(config.theta, grid)
        else:
            state = init_atoms_entangled(config.theta, grid)
        traj = run_single(grid, state, t_max, dt=dt, sample_stride=stride)
    out_path = args.out or f"djcsim_{scenario}.csv"
    _write_csv(out_path, "t", traj.times, traj.records)
    report = detect_revivals(traj, predicted_period=retardation_time(config))
    print(f"scenario: {scenario}  modes={config.n_modes} omega_a={config.omega_a} "
          f"length_ratio={config.length_ratio} profile={config.coupling_profile} "
          f"theta={config.theta!r} ({args.angle_convention} convention)")
    _print_summary(config, traj, report, out_path)
    return 0


def _run_kernel(args: argparse.Namespace) -> int:
    config = _make_config(args)
    grid = build_mode_grid(config)
    t_r = retardation_time(config)
    tau_max = args.tmax if args.tmax is not None else 3.0 * t_r
    if tau_max <= 0:
        raise ValueError(f"tmax must be positive, got {tau_max!r}")
    dtau = args.dt if args.dt is not None else t_r / 400.0
    if dtau <= 0:
        raise ValueError(f"dt must be positive, got {dtau!r}")
    count = int(math.floor(tau_max / dtau + 1e-9)) + 1
    taus = np.array([i * dtau for i in range(count)])
    values = memory_kernel(grid, taus)
    records = {
        "re_k": values.real,
        "im_k": values.imag,
        "abs_k": np.abs(values),
    }
    out_path = args.out or "djcsim_kernel.csv"
    _write_csv(out_path, "tau", taus, records)
    print(f"scenario: kernel  modes={config.n_modes} omega_a={config.omega_a} "
          f"length_ratio={config.length_ratio} profile={config.coupling_profile}")
    print(f"t_r={t_r:.6f}  K(0)={values[0].real:.6f}")
    if config.n_modes > 1:
        echo = first_kernel_echo(grid, dtau, tau_max=tau_max)
        print(f"first rephasing maximum of |K| at tau={echo:.6f}")
    print(f"wrote {out_path}")
    return 0


def _run_sweep(args: argparse.Namespace) -> int:
    if not args.axis:
        raise ValueError("sweep requires --axis")
    if not args.values:
        raise ValueError("sweep requires --values")
    values = _parse_values(args.values)
    if not values:
        raise ValueError("values list is empty")
    out_path = args.out or "djcsim_sweep.csv"
    stem, dot, ext = out_path.rpartition(".")
    if not dot:
        stem, ext = out_path, "csv"

    run_outputs = []
    for index, value in enumerate(values):
        run_args = argparse.Namespace(**vars(args))
        if args.axis == "theta":
            run_args.theta = value
        elif args.axis == "n_modes":
            if value != int(value):
                raise ValueError(f"n_modes value must be an integer, got {value!r}")
            run_args.modes = int(value)
        elif args.axis == "length_ratio":
            run_args.length_ratio = value
        else:
            run_args.omega_a = value
        run_args.out = f"{stem}_{args.axis}_{index:02d}.{ext}"
        scenario = "double" if args.initial == "double" else f"single-{args.initial}"
        print(f"--- sweep {args.axis}={value!r} ---")
        _run_trajectory(run_args, scenario)
        run_outputs.append((value, run_args.out))

    summary_path = f"{stem}_summary.{ext}"
    with open(summary_path, "w", encoding="ascii", newline="") as handle:
        handle.write("value,first_revival_peak,first_dead_start\n")
        for value, csv_path in run_outputs:
            report = detect_revivals(_read_back(csv_path))
            peak = ""
            dead = ""
            if report.dead_intervals:
                dead = _format(report.dead_intervals[0][0])
                try:
                    peak = _format(first_revival_after_death(report).peak_value)
                except ValueError:
                    peak = ""
            handle.write(f"{_format(value)},{peak},{dead}\n")
    print(f"wrote {summary_path}")
    return 0


def _read_back(csv_path: str) -> Trajectory:
    """Reload a written trajectory CSV (sweep summaries reuse the detector)."""
    with open(csv_path, "r", encoding="ascii") as handle:
        header = handle.readline().strip().split(",")
        data = [line.strip().split(",") for line in handle if line.strip()]
    columns = {name: np.array([float(row[i]) for row in data])
               for i, name in enumerate(header)}
    times = columns.pop("t")
    return Trajectory(times=times, records=columns)


def main(argv: Optional[List[str]] = None) -> int:
    parser, subs = _build_parser()
    args, _ = parser.parse_known_args(argv)
    if getattr(args, "config", None):
        try:
            overrides = _load_config_file(args.config)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        unknown = set(overrides) - {a.dest for a in subs[args.command]._actions}
        if unknown:
            print(f"error: config keys not valid for '{args.command}': "
                  f"{sorted(unknown)}", file=sys.stderr)
            return 2
        subs[args.command].set_defaults(**overrides)
    args = parser.parse_args(argv)

    try:
        if args.command == "single":
            return _run_trajectory(args, f"single-{args.initial}")
        if args.command == "double":
            return _run_trajectory(args, "double")
        if args.command == "kernel":
            return _run_kernel(args)
        return _run_sweep(args)
    except IntegrationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

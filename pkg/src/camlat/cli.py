"""Command-line interface.

Subcommands map onto the three canonical experiments plus a single-point
run; ``reproduce`` executes all three sweeps and writes their CSV tables
and SVG charts. Exit codes: 0 success, 1 config error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import DEFAULT_PROFILE, PROFILES, load_config
from .engine import COMPONENT_KEYS
from .errors import CamlatError, ConfigurationError
from .experiments import SweepResult, SweepSpec, emit_csv, emit_plot, run_point, run_sweep

DEFAULT_SWEEPS = {
    "vru_count": (50, 70, 90, 110, 130),
    "vehicle_intensity": (0.01, 0.03, 0.05, 0.07, 0.09),
    "cluster_size": (1, 3, 5, 7, 9),
}
_SWEEP_BASENAMES = {
    "vru_count": "vru_sweep",
    "vehicle_intensity": "density_sweep",
    "cluster_size": "cluster_sweep",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="camlat",
        description="Monte-Carlo latency comparison: edge-hosted vs distant-cloud "
        "processing of periodic road-user awareness messages.",
    )
    parser.add_argument("--config", help="JSON config document (defaults apply when omitted)")
    parser.add_argument("--seed", type=int, help="override engine.master_seed")
    parser.add_argument("--replications", type=int, help="override engine.replications")
    parser.add_argument("--workers", type=int, help="override engine.workers")
    parser.add_argument("--profile", choices=sorted(PROFILES), help=f"parameter profile (default {DEFAULT_PROFILE})")
    parser.add_argument("--out-dir", default="results", help="directory for CSV/SVG outputs")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", help="simulate the configured single operating point")
    for name, param in (
        ("sweep-vru", "vru_count"),
        ("sweep-density", "vehicle_intensity"),
        ("sweep-cluster", "cluster_size"),
    ):
        p = sub.add_parser(name, help=f"sweep {param}")
        p.set_defaults(parameter=param)
        p.add_argument(
            "--values",
            help="comma-separated sweep values (default: "
            + ",".join(str(v) for v in DEFAULT_SWEEPS[param])
            + ")",
        )
    sub.add_parser("reproduce", help="run all three sweeps and emit tables and charts")
    return parser


def _parse_values(text: str, parameter: str) -> tuple:
    caster = float if parameter == "vehicle_intensity" else int
    try:
        return tuple(caster(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigurationError(f"invalid --values {text!r}: {exc}") from exc


def _print_rows(result: SweepResult) -> None:
    for row in result.rows:
        cloud = row.stats["e2e_cloud"].mean_s * 1e3
        mec = row.stats["e2e_mec"].mean_s * 1e3
        print(
            f"  {result.parameter}={row.value:g}: cloud {cloud:8.2f} ms | "
            f"edge {mec:7.2f} ms | gain {row.gain_pct:5.1f} %"
        )
    for value, message in result.failures:
        print(f"  {result.parameter}={value:g}: FAILED ({message})", file=sys.stderr)


def _run_sweep_command(plan, parameter: str, values: tuple, out_dir: str) -> SweepResult:
    result = run_sweep(SweepSpec(parameter=parameter, values=values, base_plan=plan))
    base = os.path.join(out_dir, _SWEEP_BASENAMES[parameter])
    emit_csv(result, base + ".csv")
    emit_plot(result, base + ".svg")
    print(f"{parameter} sweep -> {base}.csv, {base}.svg")
    _print_rows(result)
    return result


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        plan = load_config(
            args.config,
            profile=args.profile,
            seed=args.seed,
            replications=args.replications,
            workers=args.workers,
        )
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    os.makedirs(args.out_dir, exist_ok=True)
    try:
        if args.command == "run":
            stats = run_point(plan)
            print(f"single point (N={plan.scenario.vru_count} VRUs, seed {plan.master_seed}):")
            for key in COMPONENT_KEYS:
                s = stats[key]
                print(
                    f"  {key:>9}: {s.mean_s * 1e3:9.3f} ms "
                    f"(+/- {s.ci95_half_width_s * 1e3:.3f} ms, n={s.sample_count})"
                )
            gain = 100.0 * (1.0 - stats["e2e_mec"].mean_s / stats["e2e_cloud"].mean_s)
            print(f"  edge-processing gain: {gain:.1f} %")
        elif args.command == "reproduce":
            for parameter, values in DEFAULT_SWEEPS.items():
                _run_sweep_command(plan, parameter, values, args.out_dir)
        else:
            values = (
                _parse_values(args.values, args.parameter)
                if args.values
                else DEFAULT_SWEEPS[args.parameter]
            )
            _run_sweep_command(plan, args.parameter, values, args.out_dir)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except CamlatError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

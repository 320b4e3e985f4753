"""Command-line interface: run, presets, analyze.

Exit codes: 0 success, 2 configuration error, 3 runtime failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .amplitudes import load_amplitude_dump
from .ces import CesSpec
from .config import ChannelOptions, ConfigError, RunConfig, load_config
from .core import Constants
from .presets import SCALES, make_preset, preset_rows
from .runner import run as run_simulation
from .runner import write_analysis_outputs

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairces",
        description="Pair-creation simulator with conversion-energy spectrum analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a configuration or preset")
    src = p_run.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", type=Path, help="JSON run configuration file")
    src.add_argument("--preset", help="named scenario preset (see `pairces presets`)")
    p_run.add_argument("--scale", choices=SCALES, default="desk",
                       help="preset scale; `full` reproduces the complete setup and takes hours")
    p_run.add_argument("--out", type=Path, required=True, help="output directory")
    p_run.add_argument("--workers", type=int, default=None, help="parallel worker processes")
    p_run.add_argument("--dump-amplitudes", action="store_true",
                       help="also write the raw binary amplitude matrix")
    p_run.add_argument("--quiet", action="store_true", help="suppress progress output")

    sub.add_parser("presets", help="list scenario presets")

    p_an = sub.add_parser("analyze", help="re-analyze a raw amplitude dump without re-simulating")
    p_an.add_argument("--amplitudes", type=Path, required=True, help="amplitudes.bin from a run")
    p_an.add_argument("--out", type=Path, required=True, help="output directory")
    p_an.add_argument("--c", type=float, default=Constants().c, help="speed of light (a.u.)")
    p_an.add_argument("--e-min-c2", type=float, default=2.0)
    p_an.add_argument("--e-max-c2", type=float, default=8.0)
    p_an.add_argument("--points", type=int, default=1000)
    p_an.add_argument("--window-c2", type=float, default=0.04)
    p_an.add_argument("--freq-c2", type=float, action="append", default=[],
                      help="oscillating frequency for the channel lattice (repeatable)")
    p_an.add_argument("--v0-c2", type=float, default=0.0, help="static height for k=1 channels")
    p_an.add_argument("--order-max", type=int, default=8)
    p_an.add_argument("--allow-emission", action="store_true")
    p_an.add_argument("--tol-c2", type=float, default=0.3, help="channel assignment half-width")
    return parser


def _cmd_run(args) -> int:
    if args.preset is not None:
        config = make_preset(args.preset, args.scale)
    else:
        config = load_config(args.config)
    overrides = dict(config.to_dict())
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.dump_amplitudes:
        overrides["dump_amplitudes"] = True
    config = RunConfig.from_dict(overrides)
    if config.grid.n_points >= 4096:
        print("warning: full-scale grid selected; this run will take hours on a desktop",
              file=sys.stderr)
    log = (lambda msg: None) if args.quiet else (lambda msg: print(msg, file=sys.stderr, flush=True))
    run_simulation(config, args.out, log=log)
    print(f"artifacts written to {args.out}")
    return EXIT_OK


def _cmd_presets() -> int:
    rows = preset_rows()
    width = max(len(name) for name, _, _ in rows)
    fig_width = max(len(fig) for _, fig, _ in rows)
    for name, fig, desc in rows:
        print(f"{name:<{width}}  {fig:<{fig_width}}  {desc}")
    return EXIT_OK


def _cmd_analyze(args) -> int:
    try:
        constants = Constants(c=args.c)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    c2 = constants.c2
    if args.e_min_c2 < 2.0:
        raise ConfigError(f"--e-min-c2 must be >= 2 (pair threshold), got {args.e_min_c2}")
    try:
        ces = CesSpec(args.e_min_c2 * c2, args.e_max_c2 * c2, args.points, args.window_c2 * c2)
        if len(args.freq_c2) > 2:
            raise ValueError("at most two --freq-c2 values are supported")
        if args.tol_c2 <= 0:
            raise ValueError(f"--tol-c2 must be positive, got {args.tol_c2}")
        channels = ChannelOptions(
            frequencies=tuple(f * c2 for f in args.freq_c2),
            v0=args.v0_c2 * c2,
            order_max=args.order_max,
            allow_emission=args.allow_emission,
            tolerance=args.tol_c2 * c2,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    matrix = load_amplitude_dump(args.amplitudes, constants)
    args.out.mkdir(parents=True, exist_ok=True)
    write_analysis_outputs(matrix, ces, channels, args.out)
    print(f"analysis written to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "presets":
            return _cmd_presets()
        if args.command == "analyze":
            return _cmd_analyze(args)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

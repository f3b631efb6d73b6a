"""Command-line entry point.

Subcommands: ``run`` (experiment grid), ``trace`` (test-trajectory tracking
file), ``timing`` (solver wall-clock comparison), ``gen-data`` (dataset CSV
export). Exit codes: 0 success, 1 any grid cell failed, 2 config error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .config import ExperimentConfig, default_config, parse_config
from .datasets import export_csv
from .errors import ConfigError, SblsError
from .runner import (
    emit_tracking_trace,
    grid_size,
    make_dataset,
    run_grid,
    timing_report,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbls",
        description="Broad-learning benchmarks with dense and sparse training",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", type=Path, help="experiment config file")
        p.add_argument("--out", type=Path, help="output directory override")
        p.add_argument(
            "--seed-override",
            help="comma-separated seeds replacing the configured list",
        )

    p_run = sub.add_parser("run", help="run the experiment grid")
    add_common(p_run)

    p_trace = sub.add_parser("trace", help="write a tracking file for one cell")
    add_common(p_trace)
    p_trace.add_argument(
        "--noise", type=float, help="noise level (default: first configured)"
    )

    p_timing = sub.add_parser("timing", help="compare solver wall-clock times")
    add_common(p_timing)
    p_timing.add_argument("--repeats", type=int, default=5)

    p_gen = sub.add_parser("gen-data", help="export one cell's dataset as CSV")
    add_common(p_gen)
    p_gen.add_argument(
        "--noise", type=float, help="noise level (default: first configured)"
    )
    return parser


def _load_config(args) -> ExperimentConfig:
    config = parse_config(args.config) if args.config else default_config()
    if args.seed_override:
        try:
            seeds = tuple(int(s) for s in args.seed_override.split(",") if s.strip())
        except ValueError as exc:
            raise ConfigError(f"seed-override: {exc}") from exc
        if not seeds:
            raise ConfigError("seed-override: expected at least one seed")
        config = replace(config, seeds=seeds)
    if args.out:
        config = replace(config, output_dir=args.out)
    return config


def _pick_noise(config: ExperimentConfig, requested: float | None) -> float:
    if requested is None:
        return config.noise_levels[0]
    return requested


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = _build_parser().parse_args(argv)
    try:
        config = _load_config(args)
        if args.command == "run":
            records = run_grid(config)
            expected = grid_size(config)
            print(f"wrote {len(records)} of {expected} records to {config.output_dir}")
            return 0 if len(records) == expected else 1
        if args.command == "trace":
            gamma = _pick_noise(config, args.noise)
            seed = config.seeds[0]
            path = Path(config.output_dir) / (
                f"tracking_{config.benchmark}_g{gamma:g}_s{seed}.csv"
            )
            emit_tracking_trace(config, gamma, seed, path)
            print(f"wrote {path}")
            return 0
        if args.command == "timing":
            report = timing_report(config, repeats=args.repeats)
            print(report.format())
            return 0
        if args.command == "gen-data":
            gamma = _pick_noise(config, args.noise)
            seed = config.seeds[0]
            dataset = make_dataset(config, gamma, seed)
            out = Path(config.output_dir) / (
                f"dataset_{config.benchmark}_g{gamma:g}_s{seed}"
            )
            export_csv(dataset, out)
            print(f"wrote {out}")
            return 0
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SblsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end: run batches, validate configs, render plots."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiment import (
    ConfigError,
    apply_overrides,
    load_config,
    read_summary,
    render_plots,
    run_batch,
)


def _parse_list(values: list[str] | None) -> list[str] | None:
    if not values:
        return None
    items: list[str] = []
    for value in values:
        items.extend(part.strip() for part in value.split(",") if part.strip())
    return items or None


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    protocols = _parse_list(args.protocol)
    seeds_raw = _parse_list(args.seed)
    seeds = [int(s) for s in seeds_raw] if seeds_raw else None
    config = apply_overrides(config, protocols=protocols, seeds=seeds, max_rounds=args.rounds)
    run_batch(config)
    plot_paths = render_plots(config.output_dir)

    print(f"batch complete: {len(config.protocols)} protocol(s) x {len(config.seeds)} seed(s)")
    print(f"{'protocol':<10}{'seed':>6}{'first':>8}{'half':>8}{'last':>8}{'packets':>10}")
    for protocol, seed, fnd, hnd, lnd, packets in read_summary(Path(config.output_dir) / "summary.csv"):
        print(f"{protocol:<10}{seed:>6}{fnd:>8}{hnd:>8}{lnd:>8}{packets:>10}")
    print(f"artifacts in {config.output_dir}/ ({', '.join(p.name for p in plot_paths)})")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    print(
        f"config OK: n={config.population.n}, region {config.region.side_m:g} m, "
        f"protocols {','.join(config.protocols)}, seeds {','.join(str(s) for s in config.seeds)}, "
        f"max_rounds {config.max_rounds}"
    )
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    paths = render_plots(args.output_dir)
    for path in paths:
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsnsim",
        description="Round-based simulator for heterogeneous WSN clustering protocols.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a seed x protocol batch from a config file")
    run_p.add_argument("config", help="path to an INI experiment config")
    run_p.add_argument(
        "--protocol",
        action="append",
        metavar="TAG",
        help="override protocols (repeatable or comma-separated)",
    )
    run_p.add_argument(
        "--seed",
        action="append",
        metavar="N",
        help="override seeds (repeatable or comma-separated)",
    )
    run_p.add_argument("--rounds", type=int, metavar="N", help="override max_rounds")
    run_p.set_defaults(func=_cmd_run)

    validate_p = sub.add_parser("validate", help="parse and validate a config file")
    validate_p.add_argument("config")
    validate_p.set_defaults(func=_cmd_validate)

    plot_p = sub.add_parser("plot", help="re-render SVG charts from batch artifacts")
    plot_p.add_argument("output_dir")
    plot_p.set_defaults(func=_cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

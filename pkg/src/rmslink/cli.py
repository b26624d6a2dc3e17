"""Command-line entry point.

Subcommands: dl-sweep, ul-sweep, chanest-nmse, modulate.  All dB/dBm values
convert to linear units here; library code works in watts throughout.
Exits 0 on success, 1 with a single-line diagnostic on failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .errors import ConfigError
from .modulation import SCHEMES, bits_per_symbol, gating_schedule, map_bits, write_schedule
from .sweep import (chanest_records, parse_config, run_sweep, write_chanest_records)


def _add_sweep_args(sub):
    sub.add_argument("--config", required=True, help="flat key = value config file")
    sub.add_argument("--out", required=True, help="output CSV path")
    sub.add_argument("--trials", type=int, default=None, help="override config trials")
    sub.add_argument("--seed", type=int, default=None, help="override master seed")
    sub.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmslink",
                                     description="transmissive-surface link simulator")
    subs = parser.add_subparsers(dest="command", required=True)

    for name in ("dl-sweep", "ul-sweep"):
        _add_sweep_args(subs.add_parser(name, help=f"run the {name[:2]} sum-rate sweep"))

    ce = subs.add_parser("chanest-nmse", help="pilot-SNR NMSE sweep")
    ce.add_argument("--config", required=True)
    ce.add_argument("--out", required=True)
    ce.add_argument("--snr-db", required=True,
                    help="comma-separated pilot SNR list in dB, e.g. 0,10,20,30,40")

    mo = subs.add_parser("modulate", help="emit a gating schedule for a bit string")
    mo.add_argument("--scheme", required=True, choices=SCHEMES)
    mo.add_argument("--bits", required=True, help="binary string, e.g. 0110")
    mo.add_argument("--out", required=True, help="output schedule path")
    return parser


def _load_config(args):
    cfg = parse_config(args.config)
    if args.trials is not None:
        if args.trials < 1:
            raise ConfigError(f"--trials must be positive, got {args.trials}")
        cfg = dataclasses.replace(cfg, trials=args.trials)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, master_seed=args.seed)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("dl-sweep", "ul-sweep"):
            cfg = _load_config(args)
            run_sweep(cfg, args.command[:2], args.out, jobs=args.jobs)
        elif args.command == "chanest-nmse":
            cfg = parse_config(args.config)
            try:
                snr_list = [float(tok) for tok in args.snr_db.split(",") if tok.strip()]
            except ValueError:
                raise ConfigError(f"bad --snr-db list: {args.snr_db!r}") from None
            if not snr_list:
                raise ConfigError("--snr-db list is empty")
            write_chanest_records(args.out, chanest_records(cfg, snr_list))
        elif args.command == "modulate":
            step = bits_per_symbol(args.scheme)
            if len(args.bits) % step != 0:
                raise ConfigError(
                    f"bit string length {len(args.bits)} is not a multiple of {step}")
            symbols = map_bits(args.bits, args.scheme)
            write_schedule(args.out, gating_schedule(symbols), args.scheme)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

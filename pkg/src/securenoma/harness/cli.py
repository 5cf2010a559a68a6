"""Command-line entry point: one subcommand per experiment kind.

Exit status is 0 on success, 2 for an invalid configuration and 1 for any
other failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import KINDS, ConfigError, load_config
from .csvio import emit_csv
from .sweep import run_sweep

log = logging.getLogger("securenoma")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="securenoma",
                                     description="NOMA physical-layer security experiments")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run a {kind} sweep")
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--seed", type=int, help="master seed (overrides the config)")
        p.add_argument("--trials", type=int, help="trials per sweep point (overrides the config)")
        p.add_argument("--out", help="CSV destination; stdout when omitted")
        p.add_argument("--workers", type=int, help="worker processes; never changes results")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config, args.kind).with_overrides(
            seed=args.seed, trials=args.trials, workers=args.workers)
        result = run_sweep(config)
        data = emit_csv(result, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # surfaced as exit status 1
        log.debug("run failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out is None:
        sys.stdout.write(data.decode())
    return 0


if __name__ == "__main__":
    sys.exit(main())

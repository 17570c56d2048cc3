"""Command line interface for the fill experiments and crisis arithmetic.

    cascadehash fill --levels 3 --base-exponent 18 --seed 1
    cascadehash sweep --m-values 1,2,3,4,6,12 --trials 5 --format csv
    cascadehash crisis-rate --occupancies 0.95,0.72,0.1 --probes 4
    cascadehash equiv-probes --load 0.76 --target 0.000024

The environment variable CASCADEHASH_SEED supplies the default seed.
Exit status is 0 on success and 1 on a configuration error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import harness
from .core import CascadeConfig, Growth
from .sizing import ConfigError


def _default_seed() -> int:
    return int(os.environ.get("CASCADEHASH_SEED", "0"), 0)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--budget", type=int, default=12, help="total probe budget B")
    parser.add_argument(
        "--base-exponent", type=int, default=18,
        help="level 1 holds the smallest prime >= 3*2^K slots",
    )
    parser.add_argument(
        "--seed", type=lambda s: int(s, 0), default=None,
        help="root seed (default: $CASCADEHASH_SEED or 0)",
    )
    parser.add_argument(
        "--format", choices=["table", "csv", "json"], default="table"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cascadehash",
        description="Cascade hash table load-factor experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fill = sub.add_parser("fill", help="fill one cascade until its first crisis")
    fill.add_argument("--levels", type=int, required=True, help="level count M")
    _add_common(fill)

    sw = sub.add_parser("sweep", help="fill-until-crisis across several M values")
    sw.add_argument(
        "--m-values", type=lambda s: [int(v) for v in s.split(",")],
        default=list(harness.DEFAULT_M_VALUES),
        help="comma-separated level counts (default 1,2,3,4,6,12)",
    )
    sw.add_argument("--trials", type=int, default=harness.DEFAULT_TRIALS)
    _add_common(sw)

    cr = sub.add_parser("crisis-rate", help="product-bound crisis rate estimate")
    cr.add_argument(
        "--occupancies", type=lambda s: [float(v) for v in s.split(",")],
        required=True, help="comma-separated per-level occupancies in [0,1]",
    )
    cr.add_argument("--probes", type=int, required=True, help="probes per level")

    eq = sub.add_parser(
        "equiv-probes",
        help="single-table probes needed to match a target crisis rate",
    )
    eq.add_argument("--load", type=float, required=True)
    eq.add_argument("--target", type=float, required=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fill":
            seed = args.seed if args.seed is not None else _default_seed()
            config = CascadeConfig(
                levels=args.levels,
                base_exponent=args.base_exponent,
                seed=seed,
                probe_budget=args.budget,
                growth=Growth.REPORT_CRISIS,
            )
            report = harness.fill_until_crisis(config, harness.trial_seeds(seed, args.levels, 0)[1])
            sys.stdout.write(harness.emit_report(report, args.format))
        elif args.command == "sweep":
            seed = args.seed if args.seed is not None else _default_seed()
            report = harness.sweep(
                base_exponent=args.base_exponent,
                probe_budget=args.budget,
                m_values=args.m_values,
                trials=args.trials,
                seed=seed,
            )
            sys.stdout.write(harness.emit_report(report, args.format))
        elif args.command == "crisis-rate":
            rate = harness.crisis_rate_estimate(args.occupancies, args.probes)
            print(rate)
        elif args.command == "equiv-probes":
            print(harness.equivalent_single_table_probes(args.load, args.target))
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

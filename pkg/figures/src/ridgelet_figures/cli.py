"""Script entry point: render one figure kind from a CSV.

Usage: ridgelet-figures {risk,runtime} INPUT_CSV OUTPUT_BASE

Writes OUTPUT_BASE.png and OUTPUT_BASE.svg (an existing .png/.svg suffix
on OUTPUT_BASE is stripped first).
"""

from __future__ import annotations

import argparse
import sys

from .plots import SchemaError, plot_risk, plot_runtime


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ridgelet-figures",
        description="Render experiment figures from risk/runtime CSV files",
    )
    parser.add_argument("kind", choices=("risk", "runtime"), help="figure kind")
    parser.add_argument("csv", help="input CSV path")
    parser.add_argument("out", help="output image base path (PNG and SVG emitted)")
    parser.add_argument("--fit-min-d-naive", type=int, default=4)
    parser.add_argument("--fit-min-d-deq", type=int, default=8)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.kind == "risk":
            _, info = plot_risk(args.csv, args.out)
        else:
            _, info = plot_runtime(
                args.csv,
                args.out,
                {"naive": args.fit_min_d_naive, "dequantized": args.fit_min_d_deq},
            )
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in info["files"]:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

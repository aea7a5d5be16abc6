"""Command-line wrapper: one figure per invocation."""
from __future__ import annotations

import argparse
import sys

from .render import FIGURE_IDS, FigureSpec, render
from .schema import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="llent-figures",
        description="Render llent sweep CSVs into publication-style figures.")
    parser.add_argument("--fig", required=True, choices=FIGURE_IDS,
                        help="figure id")
    parser.add_argument("--csv", action="append", required=True,
                        help="input CSV path; repeat to concatenate files")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--linear-x", action="store_true",
                        help="linear coupling axis instead of logarithmic")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(csv_paths=tuple(args.csv), figure_id=args.fig,
                      out_path=args.out, log_x=not args.linear_x)
    try:
        path = render(spec)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())

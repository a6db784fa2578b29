"""Command-line front end: ``figures series`` and ``figures triptych``."""

import argparse
import sys

from .formats import FormatError
from .plots import load_curves, render_series, render_triptych, triptych_from_files


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render twin-experiment artifacts to PNG.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    series = sub.add_parser(
        "series", help="overlay errors.csv curves on a log axis"
    )
    series.add_argument("csv", nargs="+", help="errors.csv files to overlay")
    series.add_argument("--out", required=True, help="output PNG path")

    triptych = sub.add_parser(
        "triptych", help="reference / assimilated / difference panels"
    )
    triptych.add_argument("reference", help="reference-field NFLD file")
    triptych.add_argument("assimilated", help="assimilated-field NFLD file")
    triptych.add_argument("--out", required=True, help="output PNG path")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "series":
            render_series(load_curves(args.csv), args.out)
        else:
            render_triptych(triptych_from_files(args.reference, args.assimilated), args.out)
    except (FormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()

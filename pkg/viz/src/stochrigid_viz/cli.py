"""Command-line renderer: detects the CSV kind from its header."""

import argparse
import sys

from .formats import HISTOGRAM_HEADER, SWEEP_HEADER
from .render import render_snapshot, render_sweep


def _detect(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as f:
            first = f.readline().rstrip("\n")
    except OSError as e:
        raise ValueError(f"cannot read {path!r}: {e.strerror}") from None
    if first == HISTOGRAM_HEADER:
        return "histogram"
    if first == SWEEP_HEADER:
        return "sweep"
    raise ValueError(
        f"{path}:1: unrecognized header {first!r}; expected a histogram or sweep CSV"
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="stochrigid-viz",
        description="Render a stochrigid histogram or Lyapunov sweep CSV to PNG.",
    )
    parser.add_argument("--input", required=True, help="histogram or sweep CSV")
    parser.add_argument("--output", required=True, help="output PNG path")
    parser.add_argument(
        "--vmin",
        type=float,
        default=None,
        help="color floor: log-scale density floor for snapshots, lower color"
        " limit for sweeps (defaults: 1/(10 N area) and symmetric about 0)",
    )
    args = parser.parse_args(argv)
    try:
        kind = _detect(args.input)
        if kind == "histogram":
            render_snapshot(args.input, args.output, vmin=args.vmin)
        else:
            render_sweep(args.input, args.output, vmin=args.vmin)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

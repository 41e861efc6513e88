"""benchfigs: render benchmark figures from plot-series files."""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .reader import SeriesFormatError
from .render import render_figures


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(
        prog="benchfigs",
        description="Render clauses-vs-time figures from .series files.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("series_dir", help="directory of .series files")
    parser.add_argument("out_dir", help="directory for rendered figures")
    parser.add_argument("--format", default="svg", choices=["svg", "png", "pdf"])
    parser.add_argument("--y-scale", default="linear", choices=["linear", "log"])
    args = parser.parse_args(argv)

    try:
        written, warnings = render_figures(
            args.series_dir, args.out_dir, fmt=args.format, y_scale=args.y_scale
        )
    except SeriesFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(1)
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    for path in written:
        print(path)
    if not written:
        sys.exit(1)


if __name__ == "__main__":
    main()

"""Entry points: plot-sweep IN.csv IN.json OUT.png and plot-bounds IN.json OUT.png.

Exit codes mirror the producer CLI: 0 success, 1 usage/parse error, 2 guards
(not currently applicable here).
"""

from __future__ import annotations

import argparse
import sys

from . import ParseError
from .plots import plot_count_vs_bound, plot_sweep


def main_sweep(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plot-sweep", description="render a sweep regime figure")
    parser.add_argument("csv", help="sweep CSV artifact")
    parser.add_argument("sidecar", help="sweep JSON sidecar")
    parser.add_argument("out", help="output image (.png or .svg)")
    try:
        args = parser.parse_args(argv)
        info = plot_sweep(args.csv, args.sidecar, args.out)
    except (ParseError, OSError) as exc:
        print(f"plot-sweep: {exc}", file=sys.stderr)
        return 1
    print(f"plot-sweep: wrote {args.out} ({info['points_plotted']} points, boundaries at "
          f"{info['boundary_lines'][0]:.3e} and {info['boundary_lines'][1]:.3e})")
    return 0


def main_bounds(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plot-bounds", description="render a count-vs-bound chart")
    parser.add_argument("report", help="count-vs-bound JSON report")
    parser.add_argument("out", help="output image (.png or .svg)")
    try:
        args = parser.parse_args(argv)
        info = plot_count_vs_bound(args.report, args.out)
    except (ParseError, OSError) as exc:
        print(f"plot-bounds: {exc}", file=sys.stderr)
        return 1
    status = "all within bound" if info["all_ok"] else "BOUND VIOLATED"
    print(f"plot-bounds: wrote {args.out} ({len(info['sizes'])} sizes, {status})")
    return 0


if __name__ == "__main__":
    sys.exit(main_sweep())

"""Command line for the figure renderer.

Exit codes: 0 success, 1 input validation error, 3 I/O error.
"""

import argparse
import sys

from .figures import FIGURE_ORDER, PlotJob, render
from .logdata import EmptyLogError, LogFormatError
from .scenariometa import ScenarioMetaError


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render tracking/joint/control-point figures from a control CSV log.",
    )
    parser.add_argument("csv", help="CSV log produced by the simulator")
    parser.add_argument("scenario", help="scenario file the log was produced from")
    parser.add_argument("--out", default=".", help="output directory (default: .)")
    parser.add_argument(
        "--figs",
        default=",".join(FIGURE_ORDER),
        help=f"comma-separated subset of {','.join(FIGURE_ORDER)}",
    )
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if not exc.code else 1

    figures = tuple(name.strip() for name in args.figs.split(",") if name.strip())
    try:
        job = PlotJob(args.csv, args.scenario, args.out, figures)
        written = render(job)
    except (LogFormatError, EmptyLogError, ScenarioMetaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""CLI: pairces-figures render --fig figN --in <run dir> --out <image>."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FIGURE_IDS, FigureRequest, SchemaError, render_to_file


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="pairces-figures")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure from a run directory")
    p.add_argument("--fig", required=True, choices=FIGURE_IDS)
    p.add_argument("--in", dest="input_dir", type=Path, required=True)
    p.add_argument("--out", dest="output_path", type=Path, required=True)
    p.add_argument("--e-min-c2", type=float, default=None)
    p.add_argument("--e-max-c2", type=float, default=None)
    p.add_argument("--title", default=None)
    args = parser.parse_args(argv)

    e_range = None
    if args.e_min_c2 is not None and args.e_max_c2 is not None:
        e_range = (args.e_min_c2, args.e_max_c2)
    try:
        request = FigureRequest(
            figure=args.fig,
            input_dir=args.input_dir,
            output_path=args.output_path,
            e_range_c2=e_range,
            title=args.title,
        )
        render_to_file(request)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.output_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

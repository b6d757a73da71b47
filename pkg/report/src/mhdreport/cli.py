"""Command line: report <run_dir|sweep_dir> --out <dir>."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .artifacts import ArtifactError, load_run
from .figures import plot_condition_region, plot_norm_decay
from .summary import render_summary


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="report",
        description="Render SVG figures and an HTML summary from a solver "
                    "run or sweep directory (read-only).")
    parser.add_argument("run_dir", help="run or sweep directory")
    parser.add_argument("--out", help="output directory (default: <run_dir>/report)")
    args = parser.parse_args(argv)

    out = Path(args.out) if args.out else Path(args.run_dir) / "report"
    try:
        run = load_run(args.run_dir)
        written = []
        if run.is_sweep:
            written.append(plot_condition_region(run, out))
        elif run.series is not None:
            written.append(plot_norm_decay(run, out))
        written.append(render_summary(run, out))
    except ArtifactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

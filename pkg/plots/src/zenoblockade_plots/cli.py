"""Command-line figure rendering.

    zeno-plot probabilities --in SCENARIO_DIR --out FILE.png
    zeno-plot wigner        --in SCENARIO_DIR --out FILE.png [--run LABEL]
    zeno-plot torus         --in REPORT_DIR   --out FILE.png

``--in`` points at a `zenoblockade simulate` output directory (for
probabilities/wigner) or a `zenoblockade zeno report` directory (for torus).
Exit codes: 0 success, 2 validation error (nothing written).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import FigureRequest, plot_probabilities, plot_torus, plot_wigner
from .io import ValidationError, discover_runs


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="zeno-plot", description="Render figures from zenoblockade outputs"
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind, help_text in (
        ("probabilities", "phonon probability traces, one line style per run"),
        ("wigner", "Wigner heatmap(s) with a zero-centered diverging colormap"),
        ("torus", "wrapped-angle scatter of basis states by Zeno class"),
    ):
        p = sub.add_parser(kind, help=help_text)
        p.add_argument("--in", dest="in_dir", type=Path, required=True)
        p.add_argument("--out", dest="out_path", type=Path, required=True)
        if kind == "wigner":
            p.add_argument("--run", help="plot only this run label")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.kind == "probabilities":
            runs = discover_runs(args.in_dir)
            req = FigureRequest(
                out_path=args.out_path,
                probability_paths=tuple(
                    (label, run_dir / "probabilities.csv") for label, run_dir in runs
                ),
            )
            plot_probabilities(req)
        elif args.kind == "wigner":
            runs = discover_runs(args.in_dir)
            if args.run is not None:
                runs = [(label, d) for label, d in runs if label == args.run]
                if not runs:
                    raise ValidationError(f"run label {args.run!r} not found")
            req = FigureRequest(
                out_path=args.out_path,
                wigner_paths=tuple(
                    (label, run_dir / "wigner_final.csv") for label, run_dir in runs
                ),
            )
            plot_wigner(req)
        else:
            req = FigureRequest(
                out_path=args.out_path, torus_path=args.in_dir / "torus.csv"
            )
            plot_torus(req)
    except ValidationError as exc:
        print(f"[zeno-plot] error: {exc}", file=sys.stderr)
        return 2
    print(f"[zeno-plot] wrote {args.out_path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Entry points: plot-energy, plot-convergence, plot-field."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureJob, plot
from .readers import ParseError


def _run(kind: str, argv, description: str, extra=None) -> int:
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("inputs", nargs="+", help="input file(s)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--dpi", type=int, default=150)
    parser.add_argument("--label", action="append", default=[], help="curve label (repeatable)")
    if extra:
        extra(parser)
    args = parser.parse_args(argv)
    job = FigureJob(
        inputs=tuple(args.inputs), kind=kind, out=args.out, dpi=args.dpi,
        labels=tuple(args.label),
        vmin=getattr(args, "vmin", None), vmax=getattr(args, "vmax", None),
        loglog=not getattr(args, "linear", False),
    )
    try:
        meta = plot(job)
    except ParseError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    if kind == "convergence":
        print(f"wrote {args.out} (fitted slope {meta['slope']:.4f})")
    else:
        print(f"wrote {args.out}")
    return 0


def main_energy(argv=None) -> int:
    return _run("energy", argv, "Plot energy traces from shflow trace CSV files.")


def main_convergence(argv=None) -> int:
    def extra(parser):
        parser.add_argument("--linear", action="store_true", help="disable log-log axes")

    return _run("convergence", argv,
                "Plot a convergence sweep (error vs tau and tau^2) from an order CSV.",
                extra)


def main_field(argv=None) -> int:
    def extra(parser):
        parser.add_argument("--vmin", type=float, default=None)
        parser.add_argument("--vmax", type=float, default=None)

    return _run("heatmap_panel", argv, "Plot SHF1 field snapshots as heatmap panels.", extra)


if __name__ == "__main__":
    sys.exit(main_energy())

"""Average throughput of every scheme across a budget sweep.

Writes one CSV row per (budget, scheme) and, with --plot, a PNG of the
five curves.  The mixed-transmission curve is the upper concave envelope
of the direct and relay curves, so it should visibly ride whichever is
better and bridge between them on a straight chord.

Usage:
    python scripts/run_budget_sweep.py --out sweep.csv --plot sweep.png
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from relayopt import (
    ChannelGains,
    CircuitModel,
    baseline_cdlt,
    baseline_crat_dl,
    c_m,
    dlt_curve,
    rat_dl_curve,
    rat_wdl_curve,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--h-sd", type=float, default=1.0)
    parser.add_argument("--h-sr", type=float, default=10.0)
    parser.add_argument("--h-rd", type=float, default=3.0)
    parser.add_argument("--alpha-d", type=float, default=0.2)
    parser.add_argument("--alpha-r", type=float, default=0.24)
    parser.add_argument("--alpha-e", type=float, default=0.19)
    parser.add_argument("--start", type=float, default=0.05)
    parser.add_argument("--stop", type=float, default=2.0)
    parser.add_argument("--steps", type=int, default=200)
    parser.add_argument("--out", default="budget_sweep.csv")
    parser.add_argument("--plot", default=None, help="optional PNG path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    gains = ChannelGains(h_sd=args.h_sd, h_sr=args.h_sr, h_rd=args.h_rd)
    circuit = CircuitModel.from_aggregates(
        alpha_d=args.alpha_d, alpha_r=args.alpha_r, alpha_e=args.alpha_e
    )
    grid = np.linspace(args.start, args.stop, args.steps)

    curves = {
        "DLT": dlt_curve(gains, circuit).values(grid),
        "RAT_DL": rat_dl_curve(gains, circuit).values(grid),
        "RAT_WDL": rat_wdl_curve(gains, circuit).values(grid),
        "MT": np.array([c_m(float(p), gains, circuit) for p in grid]),
        "CDLT": np.array(
            [baseline_cdlt(float(p), gains, circuit).throughput for p in grid]
        ),
        "CRAT_DL": np.array(
            [baseline_crat_dl(float(p), gains, circuit).throughput for p in grid]
        ),
    }

    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["p0", "scheme", "throughput"])
        for i, p in enumerate(grid):
            for scheme, vals in curves.items():
                writer.writerow([f"{p:.6g}", scheme, f"{vals[i]:.12g}"])
    print(f"wrote {args.steps * len(curves)} rows to {args.out}")

    if args.plot is not None:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(7, 4.5))
        for scheme, vals in curves.items():
            style = "--" if scheme.startswith("C") else "-"
            ax.plot(grid, vals, style, label=scheme, linewidth=1.4)
        ax.set_xlabel("average power budget [W]")
        ax.set_ylabel("average throughput [bit/s/Hz]")
        ax.legend(loc="lower right", fontsize=8)
        ax.grid(alpha=0.3)
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"wrote {args.plot}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

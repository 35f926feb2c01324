"""Winner map over the (h_sr, h_rd) plane at a fixed budget.

For each grid cell the optimal time share decides the label: DLT when the
direct link takes every slot, RAT_DL when relaying takes every slot, MT
when the optimum genuinely mixes the two.  Writes a CSV and, with --plot,
a color-coded PNG of the plane.

Usage:
    python scripts/run_region_map.py --p0 1.0 --out region.csv --plot region.png
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from relayopt import ChannelGains, CircuitModel, solve_mixed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--h-sd", type=float, default=1.0)
    parser.add_argument("--alpha-d", type=float, default=0.2)
    parser.add_argument("--alpha-r", type=float, default=0.24)
    parser.add_argument("--p0", type=float, default=1.0)
    parser.add_argument("--h-sr-start", type=float, default=2.0)
    parser.add_argument("--h-sr-stop", type=float, default=10.0)
    parser.add_argument("--h-rd-start", type=float, default=0.5)
    parser.add_argument("--h-rd-stop", type=float, default=10.0)
    parser.add_argument("--steps", type=int, default=30)
    parser.add_argument("--out", default="region_map.csv")
    parser.add_argument("--plot", default=None, help="optional PNG path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    circuit = CircuitModel.from_aggregates(alpha_d=args.alpha_d, alpha_r=args.alpha_r)
    h_sr_axis = np.linspace(args.h_sr_start, args.h_sr_stop, args.steps)
    h_rd_axis = np.linspace(args.h_rd_start, args.h_rd_stop, args.steps)

    labels = np.empty((args.steps, args.steps), dtype=int)
    names = {0: "DLT", 1: "MT", 2: "RAT_DL"}
    rows = []
    for i, h_sr in enumerate(h_sr_axis):
        for j, h_rd in enumerate(h_rd_axis):
            gains = ChannelGains(h_sd=args.h_sd, h_sr=float(h_sr), h_rd=float(h_rd))
            sol = solve_mixed(args.p0, gains, circuit)
            if sol.theta_star >= 1.0:
                labels[i, j] = 0
            elif sol.theta_star <= 0.0:
                labels[i, j] = 2
            else:
                labels[i, j] = 1
            rows.append(
                [
                    f"{h_sr:.6g}",
                    f"{h_rd:.6g}",
                    names[labels[i, j]],
                    f"{sol.theta_star:.6g}",
                    f"{sol.throughput:.12g}",
                ]
            )

    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["h_sr", "h_rd", "winner", "theta", "throughput"])
        writer.writerows(rows)
    counts = {names[k]: int(np.sum(labels == k)) for k in names}
    print(f"wrote {len(rows)} cells to {args.out}; winners: {counts}")

    if args.plot is not None:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        from matplotlib.colors import ListedColormap

        fig, ax = plt.subplots(figsize=(6, 5))
        cmap = ListedColormap(["#4878cf", "#f2c14e", "#d1495b"])
        ax.imshow(
            labels.T,
            origin="lower",
            aspect="auto",
            cmap=cmap,
            vmin=0,
            vmax=2,
            extent=(
                args.h_sr_start, args.h_sr_stop,
                args.h_rd_start, args.h_rd_stop,
            ),
        )
        ax.set_xlabel("h_sr")
        ax.set_ylabel("h_rd")
        ax.set_title(f"winning scheme at P0 = {args.p0} W")
        handles = [
            plt.Rectangle((0, 0), 1, 1, color=cmap(k / 2.0)) for k in range(3)
        ]
        ax.legend(handles, [names[k] for k in range(3)], loc="upper right", fontsize=8)
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"wrote {args.plot}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

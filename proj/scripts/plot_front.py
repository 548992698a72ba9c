#!/usr/bin/env python3
"""3-D scatter of a dse report: accuracy metric, area and power, with the
Pareto front highlighted and corrupt designs drawn as crosses."""

import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def load(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        sys.exit(f"{path}: no rows")
    for r in rows:
        r["accuracy"] = float(r["accuracy"])
        r["area_um2"] = float(r["area_um2"])
        r["power_uW"] = float(r["power_uW"])
        r["pareto"] = r["pareto"] == "1"
        r["corrupt_flag"] = r["corrupt_flag"] == "1"
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("report", help="CSV written by 'approxvit dse'")
    ap.add_argument("-o", "--out", default="front.png")
    ap.add_argument("--title", default=None)
    ap.add_argument("--labels", action="store_true", help="annotate front members")
    args = ap.parse_args()

    rows = load(args.report)
    metric = rows[0]["metric"]
    fig = plt.figure(figsize=(8, 6))
    ax = fig.add_subplot(projection="3d")
    groups = [
        ("dominated", [r for r in rows if not r["pareto"] and not r["corrupt_flag"]],
         dict(c="tab:gray", marker="o", alpha=0.5)),
        ("corrupt", [r for r in rows if r["corrupt_flag"]],
         dict(c="tab:red", marker="x")),
        ("Pareto front", [r for r in rows if r["pareto"]],
         dict(c="tab:blue", marker="o", s=60, edgecolors="k")),
    ]
    for label, pts, style in groups:
        if not pts:
            continue
        ax.scatter([p["accuracy"] for p in pts], [p["area_um2"] for p in pts],
                   [p["power_uW"] for p in pts], label=f"{label} ({len(pts)})", **style)
    if args.labels:
        for r in rows:
            if r["pareto"]:
                ax.text(r["accuracy"], r["area_um2"], r["power_uW"], r["adder"], fontsize=7)

    ax.set_xlabel("BER" if metric == "ber" else "accuracy (%)")
    ax.set_ylabel("area (um^2)")
    ax.set_zlabel("power (uW)")
    ax.set_title(args.title or f"design space ({metric})")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()

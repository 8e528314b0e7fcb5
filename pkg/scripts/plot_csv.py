#!/usr/bin/env python3
"""Quick-look plots for levyprey CSV output (developer tooling).

Usage:
    python scripts/plot_csv.py traj.csv [more.csv ...] [--out fig.png]

Trajectory files (t,x,y,z) get one line per species; ensemble files get the
median with a shaded 2.5-97.5% band. Requires matplotlib, which is not a
dependency of the package itself.
"""

from __future__ import annotations

import argparse
import csv
import sys


def _load(path):
    meta, header, rows = [], None, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                meta.append(line)
            elif header is None:
                header = line.split(",")
            else:
                rows.append([float(v) if v else float("nan") for v in line.split(",")])
    return meta, header, rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("files", nargs="+")
    ap.add_argument("--out", help="write PNG instead of showing a window")
    args = ap.parse_args(argv)

    try:
        import matplotlib

        if args.out:
            matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib is required for plotting", file=sys.stderr)
        return 1

    fig, ax = plt.subplots(figsize=(9, 5))
    for path in args.files:
        meta, header, rows = _load(path)
        cols = {name: [r[i] for r in rows] for i, name in enumerate(header)}
        t = cols["t"]
        if "x" in cols:  # trajectory schema
            for s in ("x", "y", "z"):
                ax.plot(t, cols[s], label=f"{path}:{s}", lw=1)
        else:  # ensemble schema
            for s in ("x", "y", "z"):
                ax.plot(t, cols[f"q500_{s}"], label=f"{path}:median {s}", lw=1)
                ax.fill_between(t, cols[f"q025_{s}"], cols[f"q975_{s}"], alpha=0.15)
    ax.set_xlabel("t (days)")
    ax.set_ylabel("population")
    ax.legend(fontsize=7)
    fig.tight_layout()
    if args.out:
        fig.savefig(args.out, dpi=150)
        print(f"wrote {args.out}")
    else:
        plt.show()
    return 0


if __name__ == "__main__":
    sys.exit(main())

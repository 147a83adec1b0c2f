#!/usr/bin/env python3
"""Plot density/CDF tables produced by `udist pdf` or `udist cdf`.

This script is shipped as documentation: it shows how to consume the CSV
output.  It is not part of the toolkit and has no tests.

Example — reproduce the classic four-profile disk figure:

    for r1 in 0 0.5 0.75 6; do
        udist pdf --scene crates/udist-cli/scenes/disk_r1_$r1.json \
                  --grid 512 --out /tmp/disk_r1_$r1.csv
    done
    python3 docs/plot_density.py /tmp/disk_r1_*.csv --out disk_profiles.png
"""

import argparse
import csv
import pathlib
import sys


def read_table(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], rows[1:]
    xs = [float(r[0]) for r in data]
    ys = [float(r[1]) for r in data]
    return header, xs, ys


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("tables", nargs="+", help="CSV files from `udist pdf`/`udist cdf`")
    parser.add_argument("--out", default=None, help="image path (default: show window)")
    args = parser.parse_args()

    try:
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit("matplotlib is required: pip install matplotlib")

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ylabel = None
    for path in args.tables:
        header, xs, ys = read_table(path)
        ylabel = {"f": "density", "F": "CDF"}.get(header[1], header[1])
        ax.plot(xs, ys, label=pathlib.Path(path).stem)
    ax.set_xlabel("distance")
    ax.set_ylabel(ylabel or "value")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    if args.out:
        fig.savefig(args.out, dpi=150)
        print(f"wrote {args.out}")
    else:
        plt.show()


if __name__ == "__main__":
    main()

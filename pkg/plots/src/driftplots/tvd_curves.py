"""Total-variation-distance convergence curves, one line per noise level.

Usage: drift-plot-tvd --in curve_p0.csv curve_p0.01.csv ... --out tvd.png
Curves may also be concatenated into a single CSV; lines are grouped by
the `p` column. The n axis is log-scaled.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .histogram import SchemaError

REQUIRED = ("n", "tvd", "p")


def read_curves(paths: list[Path]) -> dict[str, list[tuple[int, float]]]:
    """Points grouped by noise strength, in file order then step order."""
    curves: dict[str, list[tuple[int, float]]] = {}
    for path in paths:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [col for col in REQUIRED if col not in header]
            if missing:
                raise SchemaError(f"{path}: missing columns {missing}; header was {header}")
            rows = list(reader)
        if not rows:
            raise SchemaError(f"{path}: no data rows")
        for row in rows:
            curves.setdefault(row["p"], []).append((int(row["n"]), float(row["tvd"])))
    for points in curves.values():
        points.sort()
    return curves


def plot_tvd(paths: list[Path], out_path: Path) -> Path:
    if not paths:
        raise SchemaError("need at least one curve file")
    curves = read_curves(paths)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for p_value in sorted(curves, key=float):
        points = curves[p_value]
        # log axis cannot show n=0; keep the prior point at n=1
        ns = [max(n, 1) for n, _ in points]
        tvds = [t for _, t in points]
        style = dict(marker="o", markersize=3) if len(points) <= 2 else dict(marker="")
        ax.plot(ns, tvds, label=f"p = {p_value}", **style)
    ax.set_xscale("log")
    ax.set_xlabel("repetitions n")
    ax.set_ylabel("TVD to physical rates")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--in", dest="csv_paths", nargs="+", required=True)
    parser.add_argument("--out", dest="out_path", required=True)
    args = parser.parse_args(argv)
    try:
        plot_tvd([Path(p) for p in args.csv_paths], Path(args.out_path))
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

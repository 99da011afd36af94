"""Grouped-bar chart of prior / updated / physical error rates per Pauli.

Usage: drift-plot-histogram --in histogram.csv --out rates.png
The output format follows the --out extension (png or svg).
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


class SchemaError(ValueError):
    """CSV is missing a required column."""


@dataclass(frozen=True)
class HistogramSpec:
    csv_path: Path
    out_path: Path
    label_col: str = "label"
    prior_col: str = "prior"
    updated_col: str = "updated"
    physical_col: str = "physical"
    error_col: str = "stddev"


def read_rows(spec: HistogramSpec) -> list[dict]:
    with open(spec.csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        needed = [spec.label_col, spec.prior_col, spec.updated_col,
                  spec.physical_col, spec.error_col]
        missing = [col for col in needed if col not in header]
        if missing:
            raise SchemaError(
                f"{spec.csv_path}: missing columns {missing}; header was {header}"
            )
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{spec.csv_path}: no data rows")
    return rows


def plot_histogram(spec: HistogramSpec) -> Path:
    """Render the grouped-bar chart; error bars sit on the updated column."""
    rows = read_rows(spec)
    labels = [row[spec.label_col] for row in rows]
    prior = [float(row[spec.prior_col]) for row in rows]
    updated = [float(row[spec.updated_col]) for row in rows]
    physical = [float(row[spec.physical_col]) for row in rows]
    stddev = [float(row[spec.error_col]) for row in rows]

    x = range(len(labels))
    width = 0.27
    fig, ax = plt.subplots(figsize=(max(6.0, 0.65 * len(labels)), 4.0))
    ax.bar([i - width for i in x], prior, width, label="prior", color="#7f9cc4")
    ax.bar(x, updated, width, yerr=stddev, capsize=2.5,
           label="updated", color="#cf6d4f")
    ax.bar([i + width for i in x], physical, width, label="physical",
           color="#71a36b")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, rotation=0 if len(labels) <= 4 else 60)
    ax.set_ylabel("error rate")
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out_path)
    plt.close(fig)
    return spec.out_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--in", dest="csv_path", required=True)
    parser.add_argument("--out", dest="out_path", required=True)
    parser.add_argument("--label-col", default="label")
    parser.add_argument("--prior-col", default="prior")
    parser.add_argument("--updated-col", default="updated")
    parser.add_argument("--physical-col", default="physical")
    parser.add_argument("--error-col", default="stddev")
    args = parser.parse_args(argv)
    spec = HistogramSpec(
        csv_path=Path(args.csv_path),
        out_path=Path(args.out_path),
        label_col=args.label_col,
        prior_col=args.prior_col,
        updated_col=args.updated_col,
        physical_col=args.physical_col,
        error_col=args.error_col,
    )
    try:
        plot_histogram(spec)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

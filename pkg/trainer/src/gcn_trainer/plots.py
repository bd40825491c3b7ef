"""Plot sweep CSVs produced by `conceptrank sweep`.

Usage: python -m gcn_trainer.plots sweep.csv out.png
"""

from __future__ import annotations

import csv
import sys
from collections import defaultdict
from pathlib import Path


def read_sweep(path):
    lines = Path(path).read_text().splitlines()
    rows = list(csv.DictReader(l for l in lines if not l.startswith("#")))
    data = [r for r in rows if not r["graph_id"].startswith("__")]
    by_value = defaultdict(lambda: defaultdict(list))
    for r in data:
        for metric in ("entropy", "infd_gauss", "infd_unit"):
            by_value[float(r["param_value"])][metric].append(float(r[metric]))
    return by_value


def plot(csv_path, out_path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    by_value = read_sweep(csv_path)
    values = sorted(by_value)
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.2))
    for ax, metric in zip(axes, ("entropy", "infd_gauss", "infd_unit")):
        med = [float(np.median(by_value[v][metric])) for v in values]
        lo = [float(np.quantile(by_value[v][metric], 0.25)) for v in values]
        hi = [float(np.quantile(by_value[v][metric], 0.75)) for v in values]
        ax.plot(values, med, marker="o")
        ax.fill_between(values, lo, hi, alpha=0.25)
        ax.set_title(metric)
        ax.set_xlabel("parameter value")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 2:
        print("usage: python -m gcn_trainer.plots <sweep.csv> <out.png>", file=sys.stderr)
        return 2
    plot(argv[0], argv[1])
    print(f"wrote {argv[1]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

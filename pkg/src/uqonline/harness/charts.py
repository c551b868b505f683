"""Static chart emission from experiment CSVs."""

from __future__ import annotations

import csv
import os
from collections import defaultdict

from .experiment import RECORD_COLUMNS

__all__ = ["ChartError", "emit_chart"]


class ChartError(ValueError):
    """Malformed CSV or nothing to plot."""


def _load_series(csv_path: str) -> dict[str, list[float]]:
    """Mean cumulative excess per algorithm, averaged across runs per round."""
    sums: dict[str, defaultdict[int, float]] = {}
    counts: dict[str, defaultdict[int, int]] = {}
    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != RECORD_COLUMNS:
            raise ChartError(
                f"unexpected header {header!r}; need {','.join(RECORD_COLUMNS)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(RECORD_COLUMNS):
                raise ChartError(f"row {lineno}: expected {len(RECORD_COLUMNS)} fields")
            try:
                int(row[0]), int(row[3]), int(row[4]), int(row[6])
                float(row[5]), float(row[7])
                t = int(row[1])
                alg = row[2]
                excess = float(row[8])
            except ValueError as exc:
                raise ChartError(f"row {lineno}: {exc}") from exc
            sums.setdefault(alg, defaultdict(float))[t] += excess
            counts.setdefault(alg, defaultdict(int))[t] += 1
    series = {}
    for alg in sums:
        ts = sorted(sums[alg])
        series[alg] = [sums[alg][t] / counts[alg][t] for t in ts]
    return series


def emit_chart(csv_path: str, out_path: str) -> str:
    """Render one cumulative-excess line per algorithm to a static file.

    The output format follows the extension (.svg default, .pdf/.png also
    fine); the figure is a pure function of the CSV contents.
    """
    series = _load_series(csv_path)
    if not series:
        raise ChartError("no data rows: nothing to plot")

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for alg in sorted(series):
        ys = series[alg]
        ax.plot(range(1, len(ys) + 1), ys, label=alg, linewidth=1.4)
    ax.set_xlabel("instances")
    ax.set_ylabel("cumulative empirical ratio - 1")
    ax.legend(loc="upper right", fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()

    root, ext = os.path.splitext(out_path)
    if not ext:
        out_path = root + ".svg"
    fig.savefig(out_path)
    plt.close(fig)
    return out_path

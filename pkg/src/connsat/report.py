"""Benchmark report output: a CSV table plus figures rendered next to it."""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .driver import BENCH_COLUMNS


def write_csv(rows, path):
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=BENCH_COLUMNS)
        w.writeheader()
        for row in rows:
            w.writerow(row)


def render_figures(rows, out_dir):
    """Render summary figures for the benchmark rows; returns the paths."""
    data = [r for r in rows if r["file"] != "TOTAL"]
    written = []
    if not data:
        return written

    counts = {}
    for r in data:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    labels = sorted(counts)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(labels, [counts[s] for s in labels], color="steelblue")
    ax.set_ylabel("problems")
    ax.set_title("verdicts")
    fig.tight_layout()
    path = os.path.join(out_dir, "status_counts.png")
    fig.savefig(path)
    plt.close(fig)
    written.append(path)

    by_time = sorted(data, key=lambda r: (r["wall_ms"], r["file"]))
    fig, ax = plt.subplots(figsize=(7, max(2.5, 0.3 * len(by_time))))
    ax.barh(
        [r["file"] for r in by_time],
        [r["wall_ms"] for r in by_time],
        color=["seagreen" if r["status"] == "Theorem" else "indianred" for r in by_time],
    )
    ax.set_xlabel("wall time (ms)")
    ax.set_title("time per problem")
    ax.invert_yaxis()
    fig.tight_layout()
    path = os.path.join(out_dir, "wall_ms.png")
    fig.savefig(path)
    plt.close(fig)
    written.append(path)
    return written


def write_report(rows, out_dir):
    """Write report.csv and its figures into out_dir; returns all paths."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "report.csv")
    write_csv(rows, csv_path)
    return [csv_path] + render_figures(rows, out_dir)

"""Rendering of diagnostic reports: delimited output plus matplotlib figures."""

from __future__ import annotations

import csv
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["write_summability_csv", "render_summability_figures"]


def write_summability_csv(report, path):
    """Two sections: C_N by N, then per-component r^{-k} masses."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["section", "key1", "key2", "value"])
        for n, c in enumerate(report.c_values):
            w.writerow(["C_N", n, "", "inf" if math.isinf(c) else format(c, ".17g")])
        for (k, l), v in sorted(report.per_component.items()):
            w.writerow(["component_mass", k, l, "inf" if math.isinf(v) else format(v, ".17g")])
        for (k, l) in report.node_at_zero:
            w.writerow(["node_at_zero", k, l, ""])
        for msg in report.divergence_warnings:
            w.writerow(["warning", "", "", msg])


def render_summability_figures(report, prefix):
    """Write <prefix>_cn.png and <prefix>_components.png; returns the paths."""
    paths = []

    fig, ax = plt.subplots(figsize=(6, 4))
    ns = list(range(len(report.c_values)))
    finite = [c if math.isfinite(c) else float("nan") for c in report.c_values]
    ax.plot(ns, finite, "o-", color="tab:blue")
    if any(math.isinf(c) for c in report.c_values):
        bad = [n for n, c in enumerate(report.c_values) if math.isinf(c)]
        ax.scatter(bad, [0] * len(bad), marker="x", color="tab:red", label="divergent")
        ax.legend()
    ax.set_xlabel("N")
    ax.set_ylabel("C_N")
    ax.set_title("Summability partial sums")
    if all(c > 0 for c in finite if not math.isnan(c)) and len(ns) > 1:
        ax.set_yscale("log")
    fig.tight_layout()
    p = f"{prefix}_cn.png"
    fig.savefig(p, dpi=120)
    plt.close(fig)
    paths.append(p)

    fig, ax = plt.subplots(figsize=(6, 4))
    items = sorted(report.per_component.items())
    labels = [f"({k},{l})" for (k, l), _ in items]
    vals = [v if math.isfinite(v) else 0.0 for _, v in items]
    colors = ["tab:red" if not math.isfinite(v) else "tab:blue" for _, v in items]
    ax.bar(range(len(items)), vals, color=colors)
    ax.set_xticks(range(len(items)))
    ax.set_xticklabels(labels, rotation=60, fontsize=7)
    ax.set_ylabel(r"$\int r^{-k}\,d\sigma_{k,l}$")
    ax.set_title("Per-component masses (red = divergent)")
    fig.tight_layout()
    p = f"{prefix}_components.png"
    fig.savefig(p, dpi=120)
    plt.close(fig)
    paths.append(p)
    return paths

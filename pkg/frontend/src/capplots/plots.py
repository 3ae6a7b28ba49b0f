"""Figure builders. Headless by construction (Agg backend) and byte-stable:
saved images carry no timestamps or tool-version metadata.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "capplots"  # deterministic SVG element ids

import matplotlib.pyplot as plt

from .frame import SweepFrame


def build_sweep_figure(frame: SweepFrame):
    """Log-log alpha vs p: per-trial scatter, median line, the two regime
    boundary verticals, and the reference slopes p q^r and p q^(r-1).

    Returns (figure, info) where info records what was drawn.
    """
    r, q = frame.r, frame.q
    fig, ax = plt.subplots(figsize=(8, 5.5), dpi=110)
    xs = [row.p for row in frame.rows if row.alpha > 0]
    ys = [row.alpha for row in frame.rows if row.alpha > 0]
    ax.scatter(xs, ys, s=8, alpha=0.35, color="#1f77b4", label="trial alpha", zorder=2)

    med_x = []
    med_y = []
    if frame.aggregates:
        for agg in frame.aggregates:
            if agg["median_alpha"] > 0:
                med_x.append(agg["p"])
                med_y.append(agg["median_alpha"])
    else:
        for p in sorted({row.p for row in frame.rows}):
            vals = sorted(row.alpha for row in frame.rows if row.p == p)
            med = vals[len(vals) // 2]
            if med > 0:
                med_x.append(p)
                med_y.append(med)
    ax.plot(med_x, med_y, color="#d62728", lw=2, label="median alpha", zorder=3)

    b_sparse = frame.boundaries["sparse_upper"]
    b_mid = frame.boundaries["mid_upper"]
    ax.axvline(b_sparse, color="#2ca02c", ls="--", lw=1.2, label="q^(-(r+1)/2)")
    ax.axvline(b_mid, color="#9467bd", ls="--", lw=1.2, label="q^(-(r-1)/2) ln^2 q")

    p_lo = min(min(row.p for row in frame.rows), b_sparse) * 0.5
    p_hi = max(max(row.p for row in frame.rows), b_mid) * 2.0
    ref_p = [p_lo, p_hi]
    ax.plot(ref_p, [p * q**r for p in ref_p], color="0.5", ls=":", lw=1, label="p q^r")
    ax.plot(ref_p, [p * q ** (r - 1) for p in ref_p], color="0.7", ls=":", lw=1, label="p q^(r-1)")

    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlim(p_lo, p_hi)
    y_max = max(max(ys, default=1), max(med_y, default=1))
    ax.set_ylim(0.5, y_max * 4)
    ax.set_xlabel("p")
    ax.set_ylabel("independence number of the sample")
    ax.set_title(f"caps in p-random subsets of PG({r},{q})")
    ax.legend(loc="upper left", fontsize=8)
    ax.grid(True, which="both", alpha=0.2)
    info = {
        "boundary_lines": [b_sparse, b_mid],
        "points_plotted": len(xs),
        "median_points": len(med_x),
    }
    return fig, info


def build_bounds_figure(report: dict):
    """ln(count) against ln C((1+gamma) alpha, m), one pair of bars per m."""
    entries = report["entries"]
    ms = [e["m"] for e in entries]
    ln_counts = [e["ln_count"] for e in entries]
    ln_bounds = [e["ln_bound"] for e in entries]
    fig, ax = plt.subplots(figsize=(7, 4.5), dpi=110)
    width = 0.38
    xpos = range(len(ms))
    ax.bar([x - width / 2 for x in xpos], ln_counts, width, label="ln count", color="#1f77b4")
    ax.bar(
        [x + width / 2 for x in xpos],
        ln_bounds,
        width,
        label="ln C((1+g) alpha, m)",
        color="#ff7f0e",
    )
    ax.set_xticks(list(xpos))
    ax.set_xticklabels([str(m) for m in ms])
    ax.set_xlabel("m")
    ax.set_ylabel("ln value")
    alpha = report.get("alpha")
    gamma = report.get("gamma")
    ok = all(e["ok"] for e in entries)
    ax.set_title(f"counts vs container envelope (alpha={alpha}, gamma={gamma}): {'ok' if ok else 'VIOLATED'}")
    ax.legend(fontsize=8)
    ax.grid(True, axis="y", alpha=0.2)
    return fig, {"all_ok": ok, "sizes": ms}


_STABLE_METADATA = {
    ".png": {"Software": None},
    ".svg": {"Date": None, "Creator": None},
}


def save_figure(fig, out_path) -> Path:
    """Write the image without timestamp/tool metadata so reruns are
    byte-identical under a fixed renderer version."""
    out_path = Path(out_path)
    metadata = _STABLE_METADATA.get(out_path.suffix.lower(), {})
    fig.savefig(out_path, metadata=metadata)
    plt.close(fig)
    return out_path


def plot_sweep(csv_path, sidecar_path, out_path):
    from .frame import load_sweep

    frame = load_sweep(csv_path, sidecar_path)
    fig, info = build_sweep_figure(frame)
    save_figure(fig, out_path)
    return info


def plot_count_vs_bound(report_path, out_path):
    from .frame import load_bounds_report

    report = load_bounds_report(report_path)
    fig, info = build_bounds_figure(report)
    save_figure(fig, out_path)
    return info

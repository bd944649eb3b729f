"""Matplotlib renderings written next to the delimited outputs.

The 2D path figure is saved as SVG 1.1 with a fixed 800x600 viewBox;
everything else goes to PNG.  Styling is documented in
docs/file-formats.md.  Output is deterministic: hashed ids are salted
with a constant and date metadata is dropped.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "repgeom"

import matplotlib.pyplot as plt
import numpy as np

_SVG_SIZE = (800 / 72, 600 / 72)  # 800x600 viewBox at 72 dpi units

_KIND_STYLE = {
    "input": dict(marker="s", color="black", s=90, zorder=5),
    "target": dict(marker="*", color="purple", s=220, zorder=5),
    "layer": dict(marker="o", s=60, zorder=4),
}


def save_path_figure(rows, out_path) -> None:
    """Scatter plus polylines: layer path solid, reference geodesic dashed."""
    fig, ax = plt.subplots(figsize=_SVG_SIZE)
    geo = [r for r in rows if r.kind == "geodesic"]
    if geo:
        ax.plot([r.x for r in geo], [r.y for r in geo], "k--", linewidth=1.2, alpha=0.7,
                label="input-target geodesic", zorder=2)
    path_rows = [r for r in rows if r.kind in ("input", "layer", "target")]
    ax.plot([r.x for r in path_rows], [r.y for r in path_rows], "-", color="#1f77b4",
            linewidth=1.5, zorder=3)
    layers = [r for r in rows if r.kind == "layer"]
    if layers:
        colors = plt.cm.viridis(np.linspace(0.15, 0.85, len(layers)))
        ax.scatter([r.x for r in layers], [r.y for r in layers], c=colors, **_KIND_STYLE["layer"])
        for r in layers:
            ax.annotate(r.label, (r.x, r.y), textcoords="offset points", xytext=(5, 5), fontsize=8)
    for kind in ("input", "target"):
        pts = [r for r in rows if r.kind == kind]
        if pts:
            ax.scatter([r.x for r in pts], [r.y for r in pts], label=kind, **_KIND_STYLE[kind])
    ax.set_xlabel("component 1")
    ax.set_ylabel("component 2")
    ax.set_title("representation path (MDS + PCA)")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)


def save_pairwise_heatmap(labels, matrix, out_path) -> None:
    matrix = np.asarray(matrix)
    fig, ax = plt.subplots(figsize=(6.5, 5.5))
    im = ax.imshow(matrix, cmap="viridis")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_yticks(range(len(labels)))
    ax.set_yticklabels(labels, fontsize=8)
    fig.colorbar(im, ax=ax, label="distance")
    ax.set_title("pairwise representation distances")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def _masked(values):
    return [np.nan if v is None else v for v in values]


def save_curve_figures(report, out_path) -> None:
    """Distance curves and angle curves, one panel each."""
    depth = np.arange(1, report.depth + 1)
    fig, axes = plt.subplots(1, 2, figsize=(11, 4.2))

    ax = axes[0]
    ax.plot(depth, report.dist_from_input, "^-", color="tab:orange", label="from input")
    ax.plot(depth, report.dist_to_target, "v-", color="tab:green", label="to target")
    ax.plot(depth, report.projected_progress, "o-", color="tab:blue", label="projected progress")
    ax.set_xlabel("layer")
    ax.set_ylabel("distance")
    ax.set_title("distances along the path")
    ax.legend(fontsize=8)

    ax = axes[1]
    if report.internal_angles:
        ax.plot(depth[:-1], _masked(report.internal_angles), "o-", color="tab:red",
                label="internal angle")
    ax.plot(np.arange(0, report.depth), _masked(report.target_angles), "s-",
            color="tab:green", label="target angle")
    ax.axhline(np.pi / 2, color="gray", linestyle=":", linewidth=1)
    ax.set_xlabel("segment start")
    ax.set_ylabel("angle (rad)")
    ax.set_ylim(0, np.pi)
    ax.set_title("path angles")
    ax.legend(fontsize=8)

    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def save_progress_deviation_figure(per_model, out_path) -> None:
    """Per-model mean progress vs mean deviation with standard-error bars."""
    fig, ax = plt.subplots(figsize=(6.5, 5.5))
    for name, _names, pd in per_model:
        if pd.progress_mean is None or pd.deviation_mean is None:
            continue
        ax.errorbar(
            pd.progress_mean,
            pd.deviation_mean,
            xerr=pd.progress_se,
            yerr=pd.deviation_se,
            fmt="o",
            capsize=3,
            label=name,
        )
    ax.set_xlabel("progress toward target (per step)")
    ax.set_ylabel("orthogonal deviation (per step)")
    ax.set_title("step decomposition by model")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def save_compare_figure(rows, out_path) -> None:
    """Depth-aligned curves per model for the three distance quantities."""
    quantities = ("dist_from_input", "dist_to_target", "projected_progress")
    models = sorted({r[0] for r in rows})
    fig, axes = plt.subplots(1, 3, figsize=(14, 4.0))
    for ax, quantity in zip(axes, quantities):
        for model in models:
            pts = sorted((r[1], r[3]) for r in rows if r[0] == model and r[2] == quantity)
            if pts:
                ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", label=model, markersize=4)
        ax.set_xlabel("relative depth")
        ax.set_title(quantity)
    axes[0].set_ylabel("distance")
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)

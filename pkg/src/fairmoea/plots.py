"""Hand-emitted SVG charts for run artifacts (no plotting dependency).

Emits hypervolume-vs-generation curves, the generation x objective mask
heatmap, a per-objective selection-frequency bar chart and, when several
runs differ only in tau, the final-hypervolume-vs-tau curve.
"""

from __future__ import annotations

import json
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np
import pandas as pd

from .errors import MissingArtifacts
from .objectives import N_OBJECTIVES, OBJECTIVE_NAMES

_PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


class SvgCanvas:
    """Tiny append-only SVG builder."""

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">',
            f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        ]

    def line(self, x1, y1, x2, y2, color="#000", width=1.0):
        self.parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="{color}" stroke-width="{width}"/>'
        )

    def rect(self, x, y, w, h, fill, stroke="none"):
        self.parts.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{w:.2f}" height="{h:.2f}" '
            f'fill="{fill}" stroke="{stroke}"/>'
        )

    def polyline(self, points, color, width=1.5):
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"/>'
        )

    def text(self, x, y, content, size=11, anchor="start", rotate=None):
        transform = f' transform="rotate({rotate} {x:.2f} {y:.2f})"' if rotate else ""
        self.parts.append(
            f'<text x="{x:.2f}" y="{y:.2f}" font-size="{size}" '
            f'font-family="sans-serif" text-anchor="{anchor}"{transform}>'
            f"{escape(str(content))}</text>"
        )

    def save(self, path):
        Path(path).write_text("\n".join(self.parts + ["</svg>"]), encoding="utf-8")


class _Axes:
    """Linear mapping from data space onto a margin-padded plot area."""

    def __init__(self, canvas, x_range, y_range, margin=(55, 15, 20, 45)):
        self.canvas = canvas
        left, right, top, bottom = margin
        self.x0, self.x1 = left, canvas.width - right
        self.y0, self.y1 = canvas.height - bottom, top
        self.xa, self.xb = x_range
        self.ya, self.yb = y_range
        if self.xb == self.xa:
            self.xb = self.xa + 1.0
        if self.yb == self.ya:
            self.yb = self.ya + 1.0

    def x(self, v):
        return self.x0 + (v - self.xa) / (self.xb - self.xa) * (self.x1 - self.x0)

    def y(self, v):
        return self.y0 + (v - self.ya) / (self.yb - self.ya) * (self.y1 - self.y0)

    def draw(self, x_label, y_label, n_ticks=5):
        c = self.canvas
        c.line(self.x0, self.y0, self.x1, self.y0)
        c.line(self.x0, self.y0, self.x0, self.y1)
        for frac in np.linspace(0, 1, n_ticks):
            xv = self.xa + frac * (self.xb - self.xa)
            yv = self.ya + frac * (self.yb - self.ya)
            c.line(self.x(xv), self.y0, self.x(xv), self.y0 + 4)
            c.text(self.x(xv), self.y0 + 16, f"{xv:g}", size=9, anchor="middle")
            c.line(self.x0 - 4, self.y(yv), self.x0, self.y(yv))
            c.text(self.x0 - 6, self.y(yv) + 3, f"{yv:.3g}", size=9, anchor="end")
        c.text((self.x0 + self.x1) / 2, c.height - 8, x_label, anchor="middle")
        c.text(14, (self.y0 + self.y1) / 2, y_label, anchor="middle", rotate=-90)

    def legend(self, labels_colors):
        c = self.canvas
        y = self.y1 + 8
        for label, color in labels_colors:
            c.line(self.x1 - 130, y, self.x1 - 110, y, color=color, width=2)
            c.text(self.x1 - 105, y + 4, label, size=10)
            y += 15


def plot_curves(curves: dict, path, x_label="generation", y_label="hv"):
    """One polyline per named (x values, y values) series, with legend."""
    if not curves:
        raise MissingArtifacts("no curves to plot")
    all_x = np.concatenate([np.asarray(x, dtype=float) for x, _ in curves.values()])
    all_y = np.concatenate([np.asarray(y, dtype=float) for _, y in curves.values()])
    canvas = SvgCanvas(640, 400)
    axes = _Axes(canvas, (all_x.min(), all_x.max()), (all_y.min(), all_y.max()))
    axes.draw(x_label, y_label)
    legend = []
    for i, (label, (xs, ys)) in enumerate(curves.items()):
        color = _PALETTE[i % len(_PALETTE)]
        axes.canvas.polyline([(axes.x(x), axes.y(y)) for x, y in zip(xs, ys)], color)
        legend.append((label, color))
    axes.legend(legend)
    canvas.save(path)


def plot_mask_heatmap(mask_matrix: np.ndarray, generations, path):
    """Rect per (generation, objective) cell; filled when selected."""
    mask_matrix = np.asarray(mask_matrix)
    n_gen, n_obj = mask_matrix.shape
    cell_w = max(3.0, min(14.0, 560.0 / max(n_gen, 1)))
    cell_h = 12.0
    canvas = SvgCanvas(int(70 + cell_w * n_gen + 20), int(40 + cell_h * n_obj + 30))
    for j in range(n_obj):
        canvas.text(62, 40 + cell_h * j + 10, OBJECTIVE_NAMES[j], size=8, anchor="end")
        for i in range(n_gen):
            fill = "#2b6cb0" if mask_matrix[i, j] else "#edf2f7"
            canvas.rect(70 + cell_w * i, 40 + cell_h * j, cell_w - 0.5,
                        cell_h - 0.5, fill=fill)
    step = max(1, n_gen // 10)
    for i in range(0, n_gen, step):
        canvas.text(70 + cell_w * i + cell_w / 2, 40 + cell_h * n_obj + 12,
                    str(generations[i]), size=8, anchor="middle")
    canvas.text(70, 20, "selected objectives by generation", size=12)
    canvas.save(path)


def plot_selection_frequency(counts: np.ndarray, n_generations: int, path):
    """Bar chart of how often each objective was selected."""
    counts = np.asarray(counts, dtype=float)
    canvas = SvgCanvas(640, 360)
    axes = _Axes(canvas, (-0.5, N_OBJECTIVES - 0.5), (0, max(counts.max(), 1.0)))
    axes.draw("objective", "selections")
    bar_w = (axes.x1 - axes.x0) / N_OBJECTIVES * 0.8
    for j, count in enumerate(counts):
        x = axes.x(j) - bar_w / 2
        axes.canvas.rect(x, axes.y(count), bar_w, axes.y0 - axes.y(count),
                         fill="#2b6cb0")
        canvas.text(axes.x(j), axes.y0 + 26, OBJECTIVE_NAMES[j], size=7,
                    anchor="middle", rotate=-60)
    canvas.text(axes.x0, 14, f"selection frequency over {n_generations} generations",
                size=12)
    canvas.save(path)


def _read_run(run_dir: Path):
    gen_path = run_dir / "generations.csv"
    if not gen_path.exists():
        raise MissingArtifacts(f"{run_dir} has no generations.csv")
    gens = pd.read_csv(gen_path)
    mask_path = run_dir / "mask.csv"
    mask = pd.read_csv(mask_path) if mask_path.exists() else None
    config = {}
    cfg_path = run_dir / "run.json"
    if cfg_path.exists():
        config = json.loads(cfg_path.read_text())
    return gens, mask, config


def emit_plots(run_dirs, out_dir) -> list:
    """Emit all applicable SVG charts from run directories; returns the
    written paths."""
    run_dirs = [Path(d) for d in run_dirs]
    if not run_dirs:
        raise MissingArtifacts("no run directories given")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    runs = [_read_run(d) for d in run_dirs]

    # mean hypervolume curve over runs (aligned on generation)
    hv = pd.concat([g[["generation", "hv"]] for g, _, _ in runs])
    mean_hv = hv.groupby("generation")["hv"].mean()
    curves = {"mean hv": (mean_hv.index.to_numpy(), mean_hv.to_numpy())}
    path = out / "hv_curve.svg"
    plot_curves(curves, path)
    written.append(path)

    masks = [m for _, m, _ in runs if m is not None]
    if masks:
        first = masks[0]
        matrix = first[OBJECTIVE_NAMES].to_numpy()
        path = out / "mask_heatmap.svg"
        plot_mask_heatmap(matrix, first["generation"].tolist(), path)
        written.append(path)

        counts = sum(m[OBJECTIVE_NAMES].to_numpy().sum(axis=0) for m in masks)
        n_gen = sum(len(m) for m in masks)
        path = out / "selection_frequency.svg"
        plot_selection_frequency(np.asarray(counts, dtype=float), n_gen, path)
        written.append(path)

    taus = {}
    for gens, _, config in runs:
        if "tau" in config:
            taus.setdefault(float(config["tau"]), []).append(float(gens["hv"].iloc[-1]))
    if len(taus) > 1:
        xs = sorted(taus)
        ys = [float(np.mean(taus[t])) for t in xs]
        path = out / "tau_sweep.svg"
        plot_curves({"final hv": (np.asarray(xs), np.asarray(ys))}, path,
                    x_label="tau", y_label="final hv")
        written.append(path)
    return written

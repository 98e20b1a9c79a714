"""Static plot artifacts: spread box plots, sweep charts, training curves.

Every plot is paired with a CSV of the plotted numbers.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def plot_training_curves(epochs, out_path: str | Path) -> Path:
    out_path = Path(out_path)
    xs = [e.epoch for e in epochs]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.plot(xs, [e.train_loss for e in epochs], label="train")
    ax1.plot(xs, [e.val_loss for e in epochs], label="validation")
    ax1.set_xlabel("epoch"); ax1.set_ylabel("loss"); ax1.legend()
    ax2.plot(xs, [e.train_accuracy for e in epochs], label="train")
    ax2.plot(xs, [e.val_accuracy for e in epochs], label="validation")
    ax2.set_xlabel("epoch"); ax2.set_ylabel("accuracy"); ax2.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path


def plot_accuracy_spread(curves: dict[str, list[float]], out_path: str | Path) -> Path:
    """Box plot of per-epoch validation accuracies, one box per combination."""
    out_path = Path(out_path)
    labels = sorted(curves)
    fig, ax = plt.subplots(figsize=(2 + 2 * len(labels), 4))
    ax.boxplot([curves[k] for k in labels], tick_labels=labels, whis=(0, 100))
    ax.set_ylabel("validation accuracy")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    with out_path.with_suffix(".csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["combination", "epoch", "val_accuracy"])
        for label in labels:
            for epoch, acc in enumerate(curves[label], start=1):
                writer.writerow([label, epoch, acc])
    return out_path


def plot_sweep(cells: dict[tuple[int, float], float], out_path: str | Path) -> Path:
    """Bar chart of best validation accuracy per (frozen, factor) cell."""
    out_path = Path(out_path)
    keys = sorted(cells)
    labels = [f"f={k[0]}, s={k[1]}" for k in keys]
    fig, ax = plt.subplots(figsize=(2 + 0.9 * len(keys), 4))
    ax.bar(range(len(keys)), [cells[k] for k in keys])
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylabel("best validation accuracy")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    with out_path.with_suffix(".csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frozen_layers", "step_size_factor", "best_val_accuracy"])
        for k in keys:
            writer.writerow([k[0], k[1], cells[k]])
    return out_path

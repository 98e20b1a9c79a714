"""`signlab` command line interface."""

from __future__ import annotations

import json
from pathlib import Path

import click

from .letters import LETTERS


@click.group()
def main():
    """Sign-alphabet dataset, training, selection, and serving toolkit."""


# --- dataset -----------------------------------------------------------


@main.group()
def dataset():
    """Dataset construction commands."""


@dataset.command("build")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--interval", default=0.1, show_default=True, help="Frame sampling interval (s).")
@click.option("--seed", default=0, show_default=True)
def dataset_build(manifest_path, out_dir, interval, seed):
    """Build a split PNG dataset from a recording manifest."""
    from .dataset import build_dataset, load_manifests, TRAIN_POLICY, TEST_POLICY
    from .dataset.augment import AugmentationPolicy

    manifests = load_manifests(manifest_path)
    train_policy = AugmentationPolicy.from_dict({**TRAIN_POLICY.to_dict(), "seed": seed})
    test_policy = AugmentationPolicy.from_dict({**TEST_POLICY.to_dict(), "seed": seed})
    report = build_dataset(manifests, out_dir, interval, train_policy, test_policy)
    click.echo(f"built {report.total_samples} samples -> {out_dir}")
    for split, count in report.split_counts.items():
        click.echo(f"  {split}: {count}")
    if report.skipped:
        click.echo(f"  skipped entries: {len(report.skipped)} (see dataset_report.json)")


@dataset.command("synth")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--frames-per-class", default=200, show_default=True)
@click.option("--recordings", default=1, show_default=True)
@click.option("--seed", default=0, show_default=True)
def dataset_synth(out_dir, frames_per_class, recordings, seed):
    """Generate the synthetic glyph fixture (videos + manifest)."""
    from .dataset import generate_synthetic_fixture, save_manifests

    out = Path(out_dir)
    manifests = generate_synthetic_fixture(
        out / "videos", frames_per_class, seed, n_recordings=recordings
    )
    manifest_path = out / "manifest.json"
    save_manifests(manifests, manifest_path)
    total = sum(len(m.entries) for m in manifests) * frames_per_class
    click.echo(f"wrote {manifest_path} ({total} frames across {len(manifests)} recordings)")


# --- training / evaluation ---------------------------------------------


@main.command("train")
@click.option("--dataset", "dataset_dir", required=True, type=click.Path(exists=True))
@click.option("--backbone", default="inception_v3", show_default=True)
@click.option("--optimizer", default="mini_batch_gd", show_default=True)
@click.option("--frozen", default=5, show_default=True)
@click.option("--factor", default=1.2, show_default=True)
@click.option("--epochs", default=10, show_default=True)
@click.option("--batch-size", default=32, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--weights", default=None, help="Backbone weights ('imagenet' or a path).")
def train_cmd(dataset_dir, backbone, optimizer, frozen, factor, epochs, batch_size, seed, out_dir, weights):
    """Train one model and export its best checkpoint."""
    from .model import ModelSpec, TrainingConfig
    from .experiments import run_once

    spec = ModelSpec(backbone=backbone, frozen_layers=frozen)
    config = TrainingConfig(
        optimizer=optimizer, batch_size=batch_size, step_size_factor=factor,
        epochs=epochs, seed=seed,
    )
    result = run_once(spec, config, dataset_dir, out_dir, run_name="train", weights=weights)
    click.echo(
        f"best epoch {result.best_epoch}: val accuracy {result.best_val_accuracy:.4f}"
    )
    click.echo(f"checkpoint: {result.checkpoint_uri}")


@main.command("eval")
@click.option("--ckpt", "checkpoint", required=True, type=click.Path(exists=True))
@click.option("--dataset", "dataset_dir", required=True, type=click.Path(exists=True))
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", default=None, type=click.Path())
def eval_cmd(checkpoint, dataset_dir, seed, out_dir):
    """Evaluate a checkpoint on the augmented test split."""
    from .evaluate import evaluate
    from .model import load_model

    model, spec = load_model(checkpoint)
    report = evaluate(model, dataset_dir, spec, seed=seed)
    click.echo(report.to_text())
    if out_dir:
        report.save(out_dir)
        click.echo(f"report written to {out_dir}")


# --- experiments --------------------------------------------------------


@main.group()
def grid():
    """Backbone x optimizer grid commands."""


@grid.command("run")
@click.option("--dataset", "dataset_dir", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--backbones", default="inception_resnet_v2,xception,inception_v3", show_default=True)
@click.option("--optimizers", default="adam,mini_batch_gd", show_default=True)
@click.option("--epochs", default=10, show_default=True)
@click.option("--repeats", default=3, show_default=True)
@click.option("--frozen", default=20, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--weights", default=None)
def grid_run(dataset_dir, out_dir, backbones, optimizers, epochs, repeats, frozen, seed, weights):
    """Train every (backbone, optimizer) cell with repeated runs."""
    from .model import TrainingConfig
    from .experiments import run_grid

    config = TrainingConfig(epochs=epochs, repeats=repeats, seed=seed)
    cells = run_grid(
        backbones.split(","), optimizers.split(","), dataset_dir, config, out_dir,
        frozen_layers=frozen, weights=weights,
    )
    for cell in cells:
        status = f"{cell.mean_best_val_accuracy:.4f}" if not cell.error else f"FAILED ({cell.error})"
        click.echo(f"  {cell.backbone} / {cell.optimizer}: {status}")


@grid.command("select")
@click.option("--grid-dir", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", default=None, type=click.Path())
def grid_select(grid_dir, out_path):
    """Select the winning combination from persisted grid results."""
    from .experiments import GridCell, select_combination
    from .experiments.plots import plot_accuracy_spread

    cells = [
        GridCell.from_dict(d)
        for d in json.loads((Path(grid_dir) / "grid_cells.json").read_text())
    ]
    report = select_combination(cells)
    for line in report.rationale:
        click.echo(line)
    curves = {
        f"{f['backbone']}/{f['optimizer']}": next(
            c.per_epoch_val_accuracies for c in cells
            if (c.backbone, c.optimizer) == (f["backbone"], f["optimizer"])
        )
        for f in report.finalists
    }
    if curves:
        plot_accuracy_spread(curves, Path(grid_dir) / "spread_boxplot.png")
    target = Path(out_path) if out_path else Path(grid_dir) / "selection_report.json"
    target.write_text(json.dumps(report.to_dict(), indent=2))
    click.echo(f"selection report: {target}")


@main.command("sweep")
@click.option("--dataset", "dataset_dir", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--backbone", default="inception_v3", show_default=True)
@click.option("--optimizer", default="mini_batch_gd", show_default=True)
@click.option("--frozen-values", default="5,20,50", show_default=True)
@click.option("--factor-values", default="0.2,0.7,1.2", show_default=True)
@click.option("--epochs", default=10, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--weights", default=None)
def sweep_cmd(dataset_dir, out_dir, backbone, optimizer, frozen_values, factor_values, epochs, seed, weights):
    """Sweep frozen-layer count x step-size factor for one combination."""
    from .model import TrainingConfig
    from .experiments import sweep_hyperparams
    from .experiments.plots import plot_sweep

    config = TrainingConfig(epochs=epochs, seed=seed)
    result = sweep_hyperparams(
        backbone, optimizer, dataset_dir, config, out_dir,
        frozen_values=tuple(int(v) for v in frozen_values.split(",")),
        factor_values=tuple(float(v) for v in factor_values.split(",")),
        weights=weights,
    )
    plot_sweep(result.cells, Path(out_dir) / "sweep_chart.png")
    for key, acc in sorted(result.cells.items()):
        click.echo(f"  frozen={key[0]} factor={key[1]}: {acc:.4f}")
    if result.winner:
        frozen, factor = result.winner
        click.echo(
            f"winner: frozen={frozen} factor={factor} "
            f"(mean {result.confirmation_means[result.winner]:.4f})"
        )


@main.command("finalize")
@click.option("--dataset", "dataset_dir", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--backbone", default="inception_v3", show_default=True)
@click.option("--optimizer", default="mini_batch_gd", show_default=True)
@click.option("--frozen", default=5, show_default=True)
@click.option("--factor", default=1.2, show_default=True)
@click.option("--epochs", default=30, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--weights", default=None)
def finalize_cmd(dataset_dir, out_dir, backbone, optimizer, frozen, factor, epochs, seed, weights):
    """Train the selected architecture one last time and export everything."""
    from .model import ModelSpec, TrainingConfig
    from .experiments import finalize

    spec = ModelSpec(backbone=backbone, frozen_layers=frozen)
    config = TrainingConfig(
        optimizer=optimizer, step_size_factor=factor, epochs=epochs, seed=seed,
    )
    result = finalize(spec, config, dataset_dir, out_dir, weights=weights)
    click.echo(f"final best val accuracy: {result.best_val_accuracy:.4f}")
    click.echo(f"checkpoint: {result.checkpoint_uri}")


@main.group()
def stats():
    """Statistics utilities."""


@stats.command("wilcoxon")
@click.option("--a", "a_path", required=True, type=click.Path(exists=True))
@click.option("--b", "b_path", required=True, type=click.Path(exists=True))
def stats_wilcoxon(a_path, b_path):
    """Paired signed-rank test of two JSON number arrays."""
    from .experiments import wilcoxon_signed_rank

    xs = json.loads(Path(a_path).read_text())
    ys = json.loads(Path(b_path).read_text())
    result = wilcoxon_signed_rank(xs, ys)
    click.echo(
        f"W={result.w_statistic} n={result.n_effective} "
        f"p={result.p_value:.6g} ({result.method})"
        + (" [degenerate: all differences zero]" if result.degenerate else "")
    )


# --- serving / live tool -------------------------------------------------


@main.command("serve")
@click.option("--ckpt", "checkpoint", default=None, type=click.Path(),
              help="Checkpoint directory (default: $SIGNLAB_CKPT).")
@click.option("--port", default=None, type=int, help="Port (default: $SIGNLAB_PORT or 8080).")
def serve_cmd(checkpoint, port):
    """Run the HTTP prediction service."""
    import os

    from .service import serve

    checkpoint = checkpoint or os.environ.get("SIGNLAB_CKPT")
    if not checkpoint:
        raise click.UsageError("provide --ckpt or set SIGNLAB_CKPT")
    serve(checkpoint, port or int(os.environ.get("SIGNLAB_PORT", "8080")))


@main.command("spell")
@click.option("--ckpt", "checkpoint", required=True, type=click.Path(exists=True))
@click.option("--camera", default=0, show_default=True)
@click.option("--threshold", default=0.7, show_default=True)
@click.option("--stability", default=5, show_default=True)
@click.option("--replay", "replay_path", default=None, type=click.Path(exists=True),
              help="Replay a recorded prediction log instead of opening the camera.")
def spell_cmd(checkpoint, camera, threshold, stability, replay_path):
    """Live word spelling from the webcam (or a recorded log)."""
    from .speller import replay, run_webcam

    if replay_path:
        state = replay(replay_path, threshold, stability)
        click.echo(f"word buffer: {state.word_buffer!r}")
        return
    run_webcam(checkpoint, camera, threshold, stability)


if __name__ == "__main__":
    main()

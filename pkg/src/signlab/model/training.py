"""Mini-batch training loop with lazy, seeded augmentation."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from ..errors import DataError, DivergenceError
from ..letters import letter_index
from ..dataset.augment import AugmentationPolicy, augment
from ..dataset.build import list_samples, load_report, read_image
from .config import EpochRecord, ModelSpec, RunResult, TrainingConfig, steps_per_epoch
from .network import export_model, preprocess
from .registry import get_backbone


class SplitLoader:
    """Loads one split from disk; training batches are augmented lazily."""

    def __init__(self, dataset_dir: str | Path, split: str, policy: AugmentationPolicy | None):
        self.samples = list_samples(dataset_dir, split)
        if not self.samples:
            raise DataError(f"split {split!r} of {dataset_dir} is empty")
        self.policy = policy
        self.labels = np.array([letter_index(letter) for _, letter in self.samples])

    def __len__(self) -> int:
        return len(self.samples)

    def load_batch(self, indices: np.ndarray, rng: np.random.Generator | None) -> np.ndarray:
        images = []
        for i in indices:
            img = read_image(self.samples[i][0])
            if self.policy is not None and rng is not None:
                img = augment(img, self.policy, rng)
            images.append(img)
        return np.stack(images)

    def batches(self, batch_size: int):
        """Sequential unaugmented batches over the whole split."""
        for start in range(0, len(self.samples), batch_size):
            idx = np.arange(start, min(start + batch_size, len(self.samples)))
            yield self.load_batch(idx, None), self.labels[idx]


def train_loaders(dataset_dir: str | Path, augment_training: bool = True):
    report = load_report(dataset_dir)
    train_policy = None
    if augment_training and report.policies.get("train"):
        train_policy = AugmentationPolicy.from_dict(report.policies["train"])
    return (
        SplitLoader(dataset_dir, "train", train_policy),
        SplitLoader(dataset_dir, "validation", None),
    )


def _one_hot(labels: np.ndarray, n_classes: int) -> np.ndarray:
    return np.eye(n_classes, dtype=np.float32)[labels]


def _evaluate_split(model, loader: SplitLoader, normalization: str, batch_size: int):
    total_loss, correct, n = 0.0, 0, 0
    for images, labels in loader.batches(batch_size):
        probs = np.asarray(model(preprocess(images, normalization), training=False))
        p_true = np.clip(probs[np.arange(len(labels)), labels], 1e-12, 1.0)
        total_loss += float(-np.log(p_true).sum())
        correct += int((probs.argmax(axis=1) == labels).sum())
        n += len(labels)
    return total_loss / n, correct / n


def make_optimizer(config: TrainingConfig):
    from tensorflow import keras

    lr = config.effective_learning_rate
    if config.optimizer == "mini_batch_gd":
        return keras.optimizers.SGD(learning_rate=lr)
    return keras.optimizers.Adam(learning_rate=lr)


def train(
    model,
    dataset_dir: str | Path,
    config: TrainingConfig,
    spec: ModelSpec,
    checkpoint_dir: str | Path | None = None,
    augment_training: bool = True,
    log=None,
) -> RunResult:
    """Run config.epochs epochs of mini-batch optimization.

    Each epoch draws steps_per_epoch batches from a seeded shuffle of the
    training split, augmented on the fly. The best epoch under
    config.metric_mode is kept; its weights are restored into `model` and,
    when checkpoint_dir is given, exported with the spec sidecar.
    """
    train_loader, val_loader = train_loaders(dataset_dir, augment_training)
    normalization = get_backbone(spec.backbone).input_normalization
    n_classes = spec.n_classes

    model.compile(
        optimizer=make_optimizer(config),
        loss="categorical_crossentropy",
        metrics=["accuracy"],
    )

    steps = steps_per_epoch(len(train_loader), config.batch_size, config.step_size_factor)
    records: list[EpochRecord] = []
    best_metric = -math.inf
    best_epoch = 0
    best_weights = None

    for epoch in range(1, config.epochs + 1):
        rng = np.random.default_rng([config.seed, epoch])
        order = rng.permutation(len(train_loader))
        while len(order) < steps * config.batch_size:
            order = np.concatenate([order, rng.permutation(len(train_loader))])

        epoch_loss, epoch_correct, seen = 0.0, 0.0, 0
        for step in range(steps):
            idx = order[step * config.batch_size : (step + 1) * config.batch_size]
            images = train_loader.load_batch(idx, rng)
            x = preprocess(images, normalization)
            y = _one_hot(train_loader.labels[idx], n_classes)
            loss, acc = (float(v) for v in model.train_on_batch(x, y))
            if not math.isfinite(loss):
                raise DivergenceError(f"non-finite loss at epoch {epoch}, step {step + 1}")
            epoch_loss += loss * len(idx)
            epoch_correct += acc * len(idx)
            seen += len(idx)

        val_loss, val_acc = _evaluate_split(model, val_loader, normalization, config.batch_size)
        record = EpochRecord(epoch, epoch_loss / seen, val_loss, epoch_correct / seen, val_acc)
        records.append(record)
        if log:
            log(record)

        metric = val_acc if config.metric_mode == "max_val_accuracy" else -val_loss
        if metric > best_metric:
            best_metric = metric
            best_epoch = epoch
            best_weights = model.get_weights()

    model.set_weights(best_weights)
    checkpoint_uri = ""
    if checkpoint_dir is not None:
        checkpoint_uri = str(export_model(model, spec, checkpoint_dir))

    return RunResult(
        spec=spec,
        config=config,
        epochs=records,
        best_epoch=best_epoch,
        best_val_accuracy=records[best_epoch - 1].val_accuracy,
        checkpoint_uri=checkpoint_uri,
    )

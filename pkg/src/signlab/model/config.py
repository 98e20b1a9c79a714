"""Model and training configuration records."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

from ..errors import InputError
from ..letters import N_CLASSES

OPTIMIZERS = ("mini_batch_gd", "adam")
METRIC_MODES = ("max_val_accuracy", "min_val_loss")

DEFAULT_HEAD_WIDTHS = (1024, 1024, 512)
# The source never states learning rates; these are conventional defaults.
DEFAULT_LEARNING_RATES = {"mini_batch_gd": 0.01, "adam": 0.001}


@dataclass(frozen=True)
class ModelSpec:
    backbone: str
    frozen_layers: int = 5
    head_widths: tuple[int, ...] = DEFAULT_HEAD_WIDTHS
    n_classes: int = N_CLASSES
    pooling: str = "global_average"

    def __post_init__(self):
        if self.frozen_layers < 0:
            raise InputError("frozen_layers must be >= 0")
        if any(w <= 0 for w in self.head_widths):
            raise InputError(f"head widths must be > 0, got {self.head_widths}")
        if self.pooling != "global_average":
            raise InputError(f"only global_average pooling is supported, got {self.pooling!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["head_widths"] = list(self.head_widths)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        d = dict(d)
        d["head_widths"] = tuple(d["head_widths"])
        return cls(**d)


@dataclass(frozen=True)
class TrainingConfig:
    optimizer: str = "mini_batch_gd"
    batch_size: int = 32
    step_size_factor: float = 1.2
    epochs: int = 10
    metric_mode: str = "max_val_accuracy"
    repeats: int = 3
    seed: int = 0
    learning_rate: float | None = None  # None -> optimizer default

    def __post_init__(self):
        if self.optimizer not in OPTIMIZERS:
            raise InputError(f"optimizer must be one of {OPTIMIZERS}, got {self.optimizer!r}")
        if self.batch_size < 1 or self.epochs < 1 or self.step_size_factor <= 0:
            raise InputError("batch_size >= 1, epochs >= 1, step_size_factor > 0 required")
        if self.metric_mode not in METRIC_MODES:
            raise InputError(f"metric_mode must be one of {METRIC_MODES}")

    @property
    def effective_learning_rate(self) -> float:
        return self.learning_rate if self.learning_rate is not None else DEFAULT_LEARNING_RATES[self.optimizer]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "TrainingConfig":
        return cls(**d)


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    val_loss: float
    train_accuracy: float
    val_accuracy: float

    def to_dict(self) -> dict:
        return {
            "epoch": self.epoch,
            "train_loss": self.train_loss,
            "val_loss": self.val_loss,
            "train_acc": self.train_accuracy,
            "val_acc": self.val_accuracy,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EpochRecord":
        return cls(d["epoch"], d["train_loss"], d["val_loss"], d["train_acc"], d["val_acc"])


@dataclass
class RunResult:
    spec: ModelSpec
    config: TrainingConfig
    epochs: list[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    best_val_accuracy: float = 0.0
    checkpoint_uri: str = ""

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "config": self.config.to_dict(),
            "epochs": [e.to_dict() for e in self.epochs],
            "best_epoch": self.best_epoch,
            "best_val_accuracy": self.best_val_accuracy,
            "checkpoint_uri": self.checkpoint_uri,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunResult":
        return cls(
            spec=ModelSpec.from_dict(d["spec"]),
            config=TrainingConfig.from_dict(d["config"]),
            epochs=[EpochRecord.from_dict(e) for e in d["epochs"]],
            best_epoch=d["best_epoch"],
            best_val_accuracy=d["best_val_accuracy"],
            checkpoint_uri=d["checkpoint_uri"],
        )


def steps_per_epoch(n_train: int, batch_size: int, factor: float) -> int:
    """ceil(factor * n_train / batch_size), never below 1."""
    if n_train < 1:
        raise InputError(f"n_train must be >= 1, got {n_train}")
    if batch_size < 1 or factor <= 0:
        raise InputError("batch_size >= 1 and factor > 0 required")
    return max(1, math.ceil(factor * n_train / batch_size))

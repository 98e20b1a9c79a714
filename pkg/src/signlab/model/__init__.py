from .registry import BackboneDescriptor, get_backbone, build_backbone, backbone_names, normalize_input
from .config import ModelSpec, TrainingConfig, EpochRecord, RunResult, steps_per_epoch
from .network import (
    assemble_model, predict, predict_batch, preprocess,
    export_model, load_model, trainable_parameter_count,
)
from .training import train, SplitLoader, train_loaders

__all__ = [
    "BackboneDescriptor", "get_backbone", "build_backbone", "backbone_names",
    "normalize_input", "ModelSpec", "TrainingConfig", "EpochRecord", "RunResult",
    "steps_per_epoch", "assemble_model", "predict", "predict_batch", "preprocess",
    "export_model", "load_model", "trainable_parameter_count", "train",
    "SplitLoader", "train_loaders",
]

"""Network assembly, inference, and checkpoint I/O."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import CheckpointError, FormatError, SpecError
from .config import ModelSpec
from .registry import build_backbone, get_backbone, normalize_input

SPEC_SIDECAR = "model_spec.json"
WEIGHTS_FILE = "model.keras"


def assemble_model(spec: ModelSpec, weights: str | None = None):
    """Backbone (original classifier removed) + global average pooling +
    ReLU dense head + softmax output, with the first `frozen_layers`
    backbone layers marked non-trainable.
    """
    from tensorflow import keras

    get_backbone(spec.backbone)  # raises RegistryError for unknown names
    base = build_backbone(spec.backbone, weights=weights)
    if spec.frozen_layers > len(base.layers):
        raise SpecError(
            f"frozen_layers={spec.frozen_layers} exceeds backbone layer count {len(base.layers)}"
        )
    for layer in base.layers[: spec.frozen_layers]:
        layer.trainable = False

    x = keras.layers.GlobalAveragePooling2D(name="head_pool")(base.output)
    for i, width in enumerate(spec.head_widths):
        x = keras.layers.Dense(width, activation="relu", name=f"head_dense_{i}")(x)
    out = keras.layers.Dense(spec.n_classes, activation="softmax", name="head_softmax")(x)
    model = keras.Model(base.input, out, name=f"{spec.backbone}_transfer")
    return model


def trainable_parameter_count(model) -> int:
    return int(sum(int(np.prod(w.shape)) for w in model.trainable_weights))


def preprocess(images: np.ndarray, normalization: str) -> np.ndarray:
    """Map uint8 images (or a single image) to normalized float batch input."""
    arr = np.asarray(images)
    if arr.ndim == 3:
        arr = arr[None]
    if arr.ndim != 4 or arr.shape[-1] != 3:
        raise FormatError(f"expected NxHxWx3 images, got shape {arr.shape}")
    return normalize_input(normalization, arr)


def predict(model, image: np.ndarray, normalization: str = "inception_style") -> np.ndarray:
    """Probability vector over the classes for one preprocessable image."""
    if image.ndim != 3 or image.shape[:2] != tuple(model.input_shape[1:3]):
        raise FormatError(
            f"expected {model.input_shape[1:3]}x3 image, got shape {image.shape}"
        )
    batch = preprocess(image, normalization)
    return predict_batch(model, batch)[0]


def predict_batch(model, preprocessed: np.ndarray, chunk_size: int = 64) -> np.ndarray:
    # chunked so arbitrarily large requests never materialize all
    # intermediate activations at once
    parts = [
        np.asarray(model(preprocessed[i : i + chunk_size], training=False))
        for i in range(0, len(preprocessed), chunk_size)
    ]
    return parts[0] if len(parts) == 1 else np.concatenate(parts)


def export_model(model, spec: ModelSpec, uri: str | Path) -> Path:
    """Write a self-describing checkpoint directory (weights + spec sidecar)."""
    path = Path(uri)
    path.mkdir(parents=True, exist_ok=True)
    model.save(path / WEIGHTS_FILE)
    (path / SPEC_SIDECAR).write_text(json.dumps(spec.to_dict(), indent=2))
    return path


def load_model(uri: str | Path, expect_classes: int | None = None):
    """Load a checkpoint, returning (model, spec). Validates the sidecar
    against the saved network's output width.
    """
    from tensorflow import keras

    path = Path(uri)
    weights = path / WEIGHTS_FILE
    sidecar = path / SPEC_SIDECAR
    if not weights.exists() or not sidecar.exists():
        raise CheckpointError(f"missing checkpoint at {path}")
    try:
        spec = ModelSpec.from_dict(json.loads(sidecar.read_text()))
        model = keras.models.load_model(weights, compile=False)
    except CheckpointError:
        raise
    except Exception as err:
        raise CheckpointError(f"corrupt checkpoint at {path}: {err}") from err
    n_out = int(model.output_shape[-1])
    if n_out != spec.n_classes:
        raise CheckpointError(
            f"checkpoint head has {n_out} classes but sidecar declares {spec.n_classes}"
        )
    if expect_classes is not None and n_out != expect_classes:
        raise CheckpointError(
            f"checkpoint head has {n_out} classes, expected {expect_classes}"
        )
    return model, spec

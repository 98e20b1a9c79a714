"""Backbone registry: pre-trained convolutional feature extractors.

The three large backbones mirror the Keras Applications models with the
highest ImageNet accuracy; `small_cnn` is a desk-scale backbone for fast
tests and CI, registered through the same interface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import RegistryError


@dataclass(frozen=True)
class BackboneDescriptor:
    name: str
    imagenet_top1: float          # fraction on ImageNet validation
    parameter_count: int          # parameters of the pre-trained network
    input_normalization: str      # "inception_style" maps [0,255] -> [-1,1]


def _inception_style(x: np.ndarray) -> np.ndarray:
    return x.astype(np.float32) / 127.5 - 1.0


_NORMALIZERS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "inception_style": _inception_style,
}


def normalize_input(scheme: str, images: np.ndarray) -> np.ndarray:
    try:
        return _NORMALIZERS[scheme](images)
    except KeyError:
        raise RegistryError(f"unknown normalization scheme: {scheme!r}") from None


def _build_inception_v3(input_shape, weights):
    from tensorflow import keras

    return keras.applications.InceptionV3(
        include_top=False, weights=weights, input_shape=input_shape
    )


def _build_xception(input_shape, weights):
    from tensorflow import keras

    return keras.applications.Xception(
        include_top=False, weights=weights, input_shape=input_shape
    )


def _build_inception_resnet_v2(input_shape, weights):
    from tensorflow import keras

    return keras.applications.InceptionResNetV2(
        include_top=False, weights=weights, input_shape=input_shape
    )


def _build_small_cnn(input_shape, weights):
    # weights are ignored: this backbone exists for fast tests, not transfer.
    from tensorflow import keras

    inp = keras.Input(shape=input_shape, name="small_input")
    x = keras.layers.Conv2D(8, 3, strides=2, activation="relu", name="small_conv1")(inp)
    x = keras.layers.MaxPooling2D(2, name="small_pool1")(x)
    x = keras.layers.Conv2D(16, 3, strides=2, activation="relu", name="small_conv2")(x)
    x = keras.layers.MaxPooling2D(2, name="small_pool2")(x)
    x = keras.layers.Conv2D(32, 3, strides=2, activation="relu", name="small_conv3")(x)
    return keras.Model(inp, x, name="small_cnn")


_REGISTRY: dict[str, tuple[BackboneDescriptor, Callable]] = {
    "inception_resnet_v2": (
        BackboneDescriptor("inception_resnet_v2", 0.803, 55_873_736, "inception_style"),
        _build_inception_resnet_v2,
    ),
    "xception": (
        BackboneDescriptor("xception", 0.790, 23_910_480, "inception_style"),
        _build_xception,
    ),
    "inception_v3": (
        BackboneDescriptor("inception_v3", 0.779, 23_851_784, "inception_style"),
        _build_inception_v3,
    ),
    "small_cnn": (
        BackboneDescriptor("small_cnn", 0.0, 6_376, "inception_style"),
        _build_small_cnn,
    ),
}


def backbone_names() -> list[str]:
    return list(_REGISTRY)


def get_backbone(name: str) -> BackboneDescriptor:
    try:
        return _REGISTRY[name][0]
    except KeyError:
        raise RegistryError(f"unknown backbone {name!r}; known: {sorted(_REGISTRY)}") from None


def build_backbone(name: str, input_shape=(224, 224, 3), weights: str | None = None):
    """Instantiate the backbone network (without its original classifier)."""
    if name not in _REGISTRY:
        raise RegistryError(f"unknown backbone {name!r}; known: {sorted(_REGISTRY)}")
    return _REGISTRY[name][1](input_shape, weights)

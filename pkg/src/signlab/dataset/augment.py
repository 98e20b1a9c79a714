"""Seeded image augmentation: rotation, shifts, zoom, shear, brightness.

Out-of-bounds pixels are filled with the nearest border pixel. All sampling
comes from an explicit numpy Generator, so a fixed seed gives bitwise
reproducible output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np
import cv2

from ..errors import FormatError, InputError


@dataclass(frozen=True)
class AugmentationPolicy:
    rotation_range: float = 0.0      # degrees, sampled in [-r, r]
    width_shift: float = 0.0         # fraction of width
    height_shift: float = 0.0        # fraction of height
    zoom_range: float = 0.0          # zoom factor sampled in [1-z, 1+z]
    shear_range: float = 0.0         # degrees
    brightness_range: Optional[tuple[float, float]] = None
    fill_mode: str = "nearest"
    seed: int = 0

    def __post_init__(self):
        for name in ("rotation_range", "width_shift", "height_shift", "zoom_range", "shear_range"):
            if getattr(self, name) < 0:
                raise InputError(f"{name} must be >= 0")
        if self.brightness_range is not None:
            lo, hi = self.brightness_range
            if lo > hi:
                raise InputError(f"brightness_range low > high: {self.brightness_range}")
        if self.fill_mode != "nearest":
            raise InputError(f"only fill_mode='nearest' is supported, got {self.fill_mode!r}")

    @property
    def is_identity(self) -> bool:
        return (
            self.rotation_range == 0
            and self.width_shift == 0
            and self.height_shift == 0
            and self.zoom_range == 0
            and self.shear_range == 0
            and self.brightness_range is None
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["brightness_range"] is not None:
            d["brightness_range"] = list(d["brightness_range"])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AugmentationPolicy":
        d = dict(d)
        if d.get("brightness_range") is not None:
            d["brightness_range"] = tuple(d["brightness_range"])
        return cls(**d)


# Paper-style defaults; the source gives the operation names but no magnitudes.
TRAIN_POLICY = AugmentationPolicy(
    rotation_range=15.0, width_shift=0.10, height_shift=0.10,
    zoom_range=0.10, shear_range=10.0,
)
TEST_POLICY = AugmentationPolicy(
    rotation_range=15.0, width_shift=0.10, height_shift=0.10,
    zoom_range=0.10, shear_range=10.0, brightness_range=(0.7, 1.3),
)


def augment(image: np.ndarray, policy: AugmentationPolicy, rng: np.random.Generator) -> np.ndarray:
    """One random augmentation of a HxWx3 uint8 image, shape preserved."""
    if image.ndim != 3 or image.shape[2] != 3:
        raise FormatError(f"expected HxWx3 image, got shape {image.shape}")
    if policy.is_identity:
        return image.copy()

    h, w = image.shape[:2]
    angle = math.radians(rng.uniform(-policy.rotation_range, policy.rotation_range))
    tx = rng.uniform(-policy.width_shift, policy.width_shift) * w
    ty = rng.uniform(-policy.height_shift, policy.height_shift) * h
    zoom = 1.0 + rng.uniform(-policy.zoom_range, policy.zoom_range)
    shear = math.radians(rng.uniform(-policy.shear_range, policy.shear_range))

    # Compose rotation, shear and zoom about the image center, then translate.
    cx, cy = (w - 1) / 2.0, (h - 1) / 2.0
    cos_a, sin_a = math.cos(angle), math.sin(angle)
    # rotation @ shear, scaled by zoom
    m00 = zoom * cos_a
    m01 = zoom * (-cos_a * math.sin(shear) - sin_a * math.cos(shear))
    m10 = zoom * sin_a
    m11 = zoom * (-sin_a * math.sin(shear) + cos_a * math.cos(shear))
    matrix = np.array(
        [
            [m00, m01, cx - m00 * cx - m01 * cy + tx],
            [m10, m11, cy - m10 * cx - m11 * cy + ty],
        ],
        dtype=np.float64,
    )
    out = cv2.warpAffine(
        image, matrix, (w, h),
        flags=cv2.INTER_LINEAR, borderMode=cv2.BORDER_REPLICATE,
    )

    if policy.brightness_range is not None:
        factor = rng.uniform(*policy.brightness_range)
        out = np.clip(out.astype(np.float32) * factor, 0, 255).astype(np.uint8)
    return out


def rng_for(policy: AugmentationPolicy, *stream: int) -> np.random.Generator:
    """Deterministic generator for (policy.seed, stream ids)."""
    return np.random.default_rng([policy.seed, *stream])

"""Synthetic glyph fixture: 26 distinct letter glyphs rendered as short clips.

Stands in for private human-subject recordings; produces real video files
plus a manifest the normal build pipeline can consume.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import cv2

from ..letters import LETTERS
from .manifest import RecordingEntry, RecordingManifest

FPS = 10
FRAME_W, FRAME_H = 320, 240


def _render_frame(letter: str, rng: np.random.Generator) -> np.ndarray:
    # dark background, bright glyph: class identity is carried by shape,
    # not absolute intensity, so lighting changes stay harmless
    bg = rng.integers(10, 60, size=3)
    frame = np.full((FRAME_H, FRAME_W, 3), bg, dtype=np.uint8)
    # mild per-frame jitter so augmentation/splits see non-constant content
    x = 90 + int(rng.integers(-12, 13))
    y = 170 + int(rng.integers(-12, 13))
    scale = 4.0 + float(rng.uniform(-0.4, 0.4))
    shade = int(rng.integers(210, 256))
    color = (shade, shade, shade)
    cv2.putText(frame, letter, (x, y), cv2.FONT_HERSHEY_SIMPLEX, scale, color, 10, cv2.LINE_AA)
    # per-frame illumination drift, like real recordings under uneven light
    gain = float(rng.uniform(0.75, 1.25))
    return np.clip(frame.astype(np.float32) * gain, 0.0, 255.0).astype(np.uint8)


def generate_synthetic_fixture(
    out_dir: str | Path,
    frames_per_class: int = 200,
    seed: int = 0,
    n_recordings: int = 1,
    letters: tuple[str, ...] = LETTERS,
) -> list[RecordingManifest]:
    """Write one clip per (recording, letter) and return the manifests."""
    if frames_per_class < 4:
        raise ValueError(f"frames_per_class must be >= 4, got {frames_per_class}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    duration = frames_per_class / FPS

    manifests = []
    for r in range(n_recordings):
        rec_id = f"synth{r:02d}"
        entries = []
        for li, letter in enumerate(letters):
            rng = np.random.default_rng([seed, r, li])
            path = out / f"{rec_id}_{letter}.avi"
            writer = cv2.VideoWriter(
                str(path), cv2.VideoWriter_fourcc(*"MJPG"), FPS, (FRAME_W, FRAME_H)
            )
            if not writer.isOpened():
                raise RuntimeError(f"cannot open video writer for {path}")
            for _ in range(frames_per_class):
                writer.write(_render_frame(letter, rng))
            writer.release()
            entries.append(RecordingEntry(letter, str(path), duration))
        manifests.append(
            RecordingManifest(
                recording_id=rec_id,
                person_id=f"synthperson{r:02d}",
                age=30 + r,
                gender=("male", "female", "other")[r % 3],
                entries=entries,
            )
        )
    return manifests

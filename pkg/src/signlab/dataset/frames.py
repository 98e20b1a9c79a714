"""Frame extraction and resizing."""

from __future__ import annotations

import numpy as np
import cv2

from ..errors import EmptyRecordingError, FormatError, IngestionError

TARGET_SIZE = 224
DEFAULT_INTERVAL_S = 0.1


def extract_frames(video_uri: str, interval: float = DEFAULT_INTERVAL_S) -> list[np.ndarray]:
    """Sample one frame per `interval` seconds, in temporal order.

    A recording of duration D yields floor(D / interval) frames; frame k is
    taken at time k * interval. Frames are RGB uint8 arrays.
    """
    if interval <= 0:
        raise ValueError(f"interval must be > 0, got {interval}")
    cap = cv2.VideoCapture(video_uri)
    if not cap.isOpened():
        raise IngestionError(f"cannot open video: {video_uri}")
    try:
        fps = cap.get(cv2.CAP_PROP_FPS)
        frame_count = int(cap.get(cv2.CAP_PROP_FRAME_COUNT))
        if fps <= 0 or frame_count <= 0:
            raise IngestionError(f"unreadable video metadata: {video_uri}")
        duration = frame_count / fps
        n = int(duration / interval + 1e-9)
        if n == 0:
            raise EmptyRecordingError(
                f"recording shorter than one interval ({duration:.3f}s < {interval}s): {video_uri}"
            )
        frames: list[np.ndarray] = []
        want = [min(int(round(k * interval * fps)), frame_count - 1) for k in range(n)]
        pos = 0
        frame = None
        for target in want:
            while pos <= target:
                ok, frame = cap.read()
                if not ok:
                    raise IngestionError(
                        f"decoder failed at frame {pos}/{frame_count}: {video_uri}"
                    )
                pos += 1
            frames.append(cv2.cvtColor(frame, cv2.COLOR_BGR2RGB))
        return frames
    finally:
        cap.release()


def resize_frame(frame: np.ndarray, size: int = TARGET_SIZE) -> np.ndarray:
    """Bilinear resize to size x size x 3."""
    if frame.ndim != 3 or frame.shape[2] != 3:
        raise FormatError(f"expected HxWx3 frame, got shape {frame.shape}")
    if frame.shape[0] == size and frame.shape[1] == size:
        return frame.copy()
    return cv2.resize(frame, (size, size), interpolation=cv2.INTER_LINEAR)

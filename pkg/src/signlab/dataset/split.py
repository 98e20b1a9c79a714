"""Train/validation/test split assignment.

Splits are assigned per (recording, letter) group as contiguous temporal
blocks: adjacent frames sampled 0.1 s apart are near-duplicates, so random
interleaving would leak training content into the test set.
"""

from __future__ import annotations

from ..errors import DataError

SPLITS = ("train", "validation", "test")
DEFAULT_RATIOS = (0.50, 0.25, 0.25)


def _round_half_up(x: float) -> int:
    return int(x + 0.5)


def split_counts(n: int, ratios: tuple[float, float, float] = DEFAULT_RATIOS) -> tuple[int, int, int]:
    """(train, validation, test) counts for a group of n frames.

    Train and validation round to nearest; test takes the remainder.
    """
    if n <= 0:
        raise DataError(f"cannot split empty group (n={n})")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {ratios}")
    n_train = min(_round_half_up(ratios[0] * n), n)
    n_val = min(_round_half_up(ratios[1] * n), n - n_train)
    return n_train, n_val, n - n_train - n_val


def assign_splits(
    frame_indices: list[int],
    ratios: tuple[float, float, float] = DEFAULT_RATIOS,
    group: tuple[str, str] | None = None,
) -> dict[int, str]:
    """Map each frame index of one (recording, letter) group to a split.

    Frames are ordered by index and cut into contiguous blocks
    train -> validation -> test.
    """
    if not frame_indices:
        raise DataError(f"empty group {group}" if group else "empty group")
    ordered = sorted(frame_indices)
    n_train, n_val, _ = split_counts(len(ordered), ratios)
    assignment: dict[int, str] = {}
    for pos, idx in enumerate(ordered):
        if pos < n_train:
            assignment[idx] = "train"
        elif pos < n_train + n_val:
            assignment[idx] = "validation"
        else:
            assignment[idx] = "test"
    return assignment

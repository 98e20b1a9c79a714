"""End-to-end dataset construction: extract -> resize -> split -> persist.

Frames are stored as lossless PNG under <root>/<split>/<letter>/ so the
validation-purity guarantee (validation samples byte-identical to resized
source frames) can be checked by hashing. Augmentation is not baked into
storage; the per-split policies are recorded in the report and applied at
load time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import cv2

from ..errors import IngestionError
from .augment import AugmentationPolicy, TRAIN_POLICY, TEST_POLICY
from .frames import extract_frames, resize_frame, DEFAULT_INTERVAL_S
from .manifest import RecordingManifest, validate_manifests
from .split import assign_splits, SPLITS

REPORT_NAME = "dataset_report.json"


@dataclass
class RecordingCount:
    recording_id: str
    person_id: str
    expected_frames: int
    actual_frames: int


@dataclass
class DatasetReport:
    root: str
    interval_s: float
    per_recording: list[RecordingCount] = field(default_factory=list)
    split_counts: dict[str, int] = field(default_factory=lambda: {s: 0 for s in SPLITS})
    skipped: list[dict] = field(default_factory=list)
    policies: dict[str, dict | None] = field(default_factory=dict)
    persons: dict[str, str] = field(default_factory=dict)  # recording_id -> person_id

    @property
    def total_samples(self) -> int:
        return sum(self.split_counts.values())

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "interval_s": self.interval_s,
            "per_recording": [vars(c) for c in self.per_recording],
            "split_counts": self.split_counts,
            "skipped": self.skipped,
            "policies": self.policies,
            "persons": self.persons,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetReport":
        return cls(
            root=d["root"],
            interval_s=d["interval_s"],
            per_recording=[RecordingCount(**c) for c in d["per_recording"]],
            split_counts=d["split_counts"],
            skipped=d["skipped"],
            policies=d["policies"],
            persons=d.get("persons", {}),
        )


def sample_path(root: Path, split: str, letter: str, recording_id: str, frame_index: int) -> Path:
    return root / split / letter / f"{recording_id}_{frame_index}.png"


def build_dataset(
    manifests: list[RecordingManifest],
    out_dir: str | Path,
    interval: float = DEFAULT_INTERVAL_S,
    train_policy: AugmentationPolicy = TRAIN_POLICY,
    test_policy: AugmentationPolicy = TEST_POLICY,
) -> DatasetReport:
    """Build the on-disk dataset from source recordings.

    Ingestion failures for individual entries are recorded as skipped, not
    fatal; the report carries expected vs actual frame counts per recording.
    """
    validate_manifests(manifests)
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)

    report = DatasetReport(
        root=str(root),
        interval_s=interval,
        policies={
            "train": train_policy.to_dict(),
            "validation": None,
            "test": test_policy.to_dict(),
        },
    )

    for m in manifests:
        report.persons[m.recording_id] = m.person_id
        expected = sum(int(e.duration_s / interval + 1e-9) for e in m.entries)
        actual = 0
        for entry in m.entries:
            try:
                frames = extract_frames(entry.video_uri, interval)
            except IngestionError as err:
                report.skipped.append(
                    {"recording_id": m.recording_id, "letter": entry.letter, "error": str(err)}
                )
                continue
            resized = [resize_frame(f) for f in frames]
            assignment = assign_splits(
                list(range(len(resized))), group=(m.recording_id, entry.letter)
            )
            for idx, frame in enumerate(resized):
                split = assignment[idx]
                path = sample_path(root, split, entry.letter, m.recording_id, idx)
                path.parent.mkdir(parents=True, exist_ok=True)
                cv2.imwrite(
                    str(path),
                    cv2.cvtColor(frame, cv2.COLOR_RGB2BGR),
                    [cv2.IMWRITE_PNG_COMPRESSION, 1],
                )
                report.split_counts[split] += 1
            actual += len(resized)
        report.per_recording.append(
            RecordingCount(m.recording_id, m.person_id, expected, actual)
        )

    (root / REPORT_NAME).write_text(json.dumps(report.to_dict(), indent=2))
    return report


def load_report(dataset_dir: str | Path) -> DatasetReport:
    return DatasetReport.from_dict(json.loads((Path(dataset_dir) / REPORT_NAME).read_text()))


def list_samples(dataset_dir: str | Path, split: str) -> list[tuple[Path, str]]:
    """(path, letter) pairs for one split, in deterministic order."""
    split_dir = Path(dataset_dir) / split
    out: list[tuple[Path, str]] = []
    if not split_dir.is_dir():
        return out
    for letter_dir in sorted(split_dir.iterdir()):
        if letter_dir.is_dir():
            for p in sorted(letter_dir.iterdir()):
                out.append((p, letter_dir.name))
    return out


def read_image(path: str | Path) -> np.ndarray:
    img = cv2.imread(str(path), cv2.IMREAD_COLOR)
    if img is None:
        raise IngestionError(f"cannot read image: {path}")
    return cv2.cvtColor(img, cv2.COLOR_BGR2RGB)

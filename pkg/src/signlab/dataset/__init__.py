from .manifest import RecordingManifest, RecordingEntry, load_manifests, save_manifests
from .frames import extract_frames, resize_frame
from .split import assign_splits, split_counts
from .augment import AugmentationPolicy, augment, TRAIN_POLICY, TEST_POLICY
from .build import build_dataset, DatasetReport, load_report, list_samples, read_image, sample_path
from .synth import generate_synthetic_fixture

__all__ = [
    "RecordingManifest", "RecordingEntry", "load_manifests", "save_manifests",
    "extract_frames", "resize_frame", "assign_splits", "split_counts",
    "AugmentationPolicy", "augment", "TRAIN_POLICY", "TEST_POLICY",
    "build_dataset", "DatasetReport", "load_report", "list_samples", "read_image",
    "sample_path", "generate_synthetic_fixture",
]
